#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fracgs/error.hpp"
#include "fracgs/grid.hpp"

namespace fracgs::cli {

/// Everything a run depends on. Keys of the flat config file carry the same
/// names as the long command-line options.
struct RunConfig {
  std::string task = "thresholds";  ///< scalar, constants, thresholds, system, scan, bubble
  std::filesystem::path out = "out";
  int threads = 1;
  std::uint64_t seed = 1;

  int dim = 3;
  double s = 0.75;
  double p = 2.0;
  double mu = 1.0;
  double nu = 1.0;
  double lambda = 0.5;
  double beta = 1.0;
  double gamma = 1.0;

  int n = 64;
  double half_width = 20.0;

  double tol = 1e-10;        ///< scalar solver update tolerance
  int max_iter = 2000;
  int flow_steps = 1200;
  double flow_tol = 1e-6;
  std::string metric = "sobolev";
  double delta = 0.02;
  int bisect_steps = 2;

  int ss_n = 128;
  double ss_half_width = 20.0;
  int cp_n = 128;
  double cp_half_width = 10.0;
  double s_s = 0.0;   ///< > 0 skips the S_s computation
  double c_p1 = 0.0;  ///< > 0 skips the C_{p+1} computation

  std::vector<double> mu_grid;
  std::vector<double> lambda_grid;
  std::vector<double> eps_list;  ///< bubble scales; default r/4, r/8, r/16
  double cutoff_radius = 0.0;    ///< bubble cutoff r; default L/3
  bool write_profiles = false;
};

/// Parses flags and the optional --config file. Throws Error(ConfigParse).
RunConfig parse_args(int argc, const char* const* argv);

/// Executes the configured task and writes its artifacts under cfg.out.
void run(const RunConfig& cfg);

/// 0 ok, 2 configuration error, 3 solver failure, 4 io failure.
int exit_code(ErrorKind kind) noexcept;

/// Full entry point: parse, run, report. Never throws.
int main_entry(int argc, const char* const* argv);

/// 17 significant digits, the CSV number format.
std::string format_number(double x);

/// One line per grid point: coordinates then value.
void write_profile_text(const std::filesystem::path& path, const Field& f);

}  // namespace fracgs::cli
