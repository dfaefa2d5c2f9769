#include "fracgs/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "fracgs/model.hpp"
#include "fracgs/params.hpp"
#include "fracgs/scalar_gs.hpp"
#include "fracgs/system_gs.hpp"
#include "fracgs/thresholds.hpp"

#ifndef FRACGS_VERSION
#define FRACGS_VERSION "0.0.0"
#endif

namespace fracgs::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const std::vector<std::string> kTasks{"scalar", "constants", "thresholds", "system", "scan", "bubble"};

// nlohmann writes NaN as null, which is what the records want for
// quantities that are undefined in a regime.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::IoFailure, "cannot open " + path.string() + " for writing");
  f.precision(17);
  return f;
}

void write_json(const fs::path& path, const json& j) {
  auto f = open_out(path);
  f << j.dump(2) << '\n';
  if (!f) throw Error(ErrorKind::IoFailure, "write failed: " + path.string());
}

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header) : path_(path), f_(open_out(path)) {
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) f_ << (i ? "," : "") << cells[i];
    f_ << '\n';
    if (!f_) throw Error(ErrorKind::IoFailure, "write failed: " + path_.string());
  }

 private:
  fs::path path_;
  std::ofstream f_;
};

std::string fmt(double x) { return format_number(x); }
std::string fmt(int x) { return std::to_string(x); }
std::string fmt(bool x) { return x ? "true" : "false"; }

json config_json(const RunConfig& c) {
  return json{{"task", c.task},
              {"out", c.out.string()},
              {"threads", c.threads},
              {"seed", c.seed},
              {"dim", c.dim},
              {"s", c.s},
              {"p", c.p},
              {"mu", c.mu},
              {"nu", c.nu},
              {"lambda", c.lambda},
              {"beta", c.beta},
              {"gamma", c.gamma},
              {"n", c.n},
              {"half_width", c.half_width},
              {"tol", c.tol},
              {"max_iter", c.max_iter},
              {"flow_steps", c.flow_steps},
              {"flow_tol", c.flow_tol},
              {"metric", c.metric},
              {"delta", c.delta},
              {"bisect_steps", c.bisect_steps},
              {"ss_n", c.ss_n},
              {"ss_half_width", c.ss_half_width},
              {"cp_n", c.cp_n},
              {"cp_half_width", c.cp_half_width},
              {"s_s", c.s_s},
              {"c_p1", c.c_p1},
              {"mu_grid", c.mu_grid},
              {"lambda_grid", c.lambda_grid},
              {"eps_list", c.eps_list},
              {"cutoff_radius", c.cutoff_radius},
              {"write_profiles", c.write_profiles}};
}

FlowOptions flow_options(const RunConfig& c) {
  FlowOptions f;
  f.flow_steps = c.flow_steps;
  f.tol = c.flow_tol;
  f.metric = c.metric == "l2" ? GradientMetric::L2 : GradientMetric::Sobolev;
  f.delta = c.delta;
  return f;
}

json solver_json(const RunConfig& c) {
  const FlowOptions f = flow_options(c);
  const ScalarSolveOptions so;
  return json{{"scalar_tol", c.tol},
              {"scalar_residual_cap", std::max(so.residual_cap, 10.0 * c.tol)},
              {"scalar_max_iter", c.max_iter},
              {"flow_steps", f.flow_steps},
              {"flow_tol", f.tol},
              {"metric", to_string(f.metric)},
              {"modulus_every", f.modulus_every},
              {"tau_floor", f.tau_floor},
              {"symmetry_tol", f.symmetry_tol},
              {"stall_window", f.stall_window},
              {"stall_rtol", f.stall_rtol},
              {"verdict_delta", f.delta},
              {"nehari_t_low", 1e-8},
              {"nehari_bisect_steps", 200},
              {"nehari_phi_rtol", 1e-12},
              {"s_s_max_spread", 0.02},
              {"c_p1_consistency", 1e-3}};
}

SharpConstants constants_for(const RunConfig& c, const Exponents& e) {
  ConstantsOptions o;
  o.ss_n = c.ss_n;
  o.ss_half_width = c.ss_half_width;
  o.cp_n = c.cp_n;
  o.cp_half_width = c.cp_half_width;
  if (c.s_s > 0.0 && c.c_p1 > 0.0) {
    SharpConstants k;
    k.options = o;
    k.s_s = c.s_s;
    k.c_p1 = c.c_p1;
    k.c0 = c0_bound(e, c.s_s);
    k.method = "provided in configuration";
    return k;
  }
  return compute_sharp_constants(e, o);
}

json constants_json(const SharpConstants& k) {
  return json{{"s_s", k.s_s},     {"s_s_spread", k.s_s_spread}, {"c_p1", k.c_p1},
              {"c_p1_spread", k.c_p1_spread}, {"c0", k.c0},     {"method", k.method},
              {"scalar_iterations", k.scalar_iterations},     {"scalar_residual", k.scalar_residual}};
}

json report_json(const ThresholdReport& r) {
  return json{{"dim", r.dim},
              {"s", r.s},
              {"p", r.p},
              {"mu", r.mu},
              {"nu", r.nu},
              {"lambda", r.lambda},
              {"s_s", r.s_s},
              {"c_p1", r.c_p1},
              {"c0", r.c0},
              {"mu0", r.mu0},
              {"mu0_error", r.mu0_error},
              {"mu0_bar", r.mu0_bar},
              {"critical_level", r.critical_level},
              {"lambda_tilde", num(r.lambda_tilde)},
              {"a_star", num(r.a_star)},
              {"lower_bound", num(r.lower_bound)},
              {"upper_bound", r.upper_bound},
              {"a0_bound", num(r.a0_bound)},
              {"regime", to_string(r.regime)},
              {"prediction", to_string(r.prediction)}};
}

void write_profile_pair(const fs::path& stem, const Field& f, const json& meta) {
  write_profile_text(fs::path(stem.string() + ".txt"), f);
  write_json(fs::path(stem.string() + ".json"), meta);
}

void task_scalar(const RunConfig& c, json& summary) {
  validate_scalar_power(c.dim, c.s, c.p);
  const GridPtr g = SpectralGrid::create(c.dim, c.n, c.half_width, c.s);
  ScalarSolveOptions o;
  o.tol = c.tol;
  o.max_iter = c.max_iter;
  const ScalarGroundState w = solve_scalar(g, c.beta, c.gamma, c.p, o);
  json meta{{"dim", c.dim}, {"s", c.s},           {"p", c.p},
            {"beta", c.beta}, {"gamma", c.gamma}, {"n", c.n},
            {"half_width", c.half_width}, {"energy", w.energy}, {"residual_norm", w.residual_norm},
            {"update_norm", w.update_norm}, {"iterations", w.iterations},
            {"seed_profile", "gaussian amplitude 1 width L/10"}};
  if (c.beta == 1.0 && c.gamma == 1.0) {
    const CpEstimates cp = extract_c_p1(w);
    meta["c_p1_rayleigh"] = cp.rayleigh;
    meta["c_p1_energy"] = cp.energy_inversion;
  }
  write_profile_pair(c.out / "scalar_profile", w.profile, meta);
  CsvWriter csv(c.out / "scalar.csv", {"beta", "gamma", "energy", "residual_norm", "iterations", "max_value"});
  csv.row({fmt(c.beta), fmt(c.gamma), fmt(w.energy), fmt(w.residual_norm), fmt(w.iterations), fmt(w.profile.max())});
  summary = meta;
}

void task_constants(const RunConfig& c, json& summary) {
  const Exponents e = validate_exponents(c.dim, c.s, c.p);
  const SharpConstants k = constants_for(c, e);
  summary = constants_json(k);
  write_json(c.out / "constants.json", summary);
}

void task_thresholds(const RunConfig& c, json& summary) {
  const ProblemParams pr = validate_params({c.dim, c.s, c.p, c.mu, c.nu, c.lambda});
  const SharpConstants k = constants_for(c, pr.exps);
  const ThresholdReport r = make_threshold_report(pr, k);
  summary = report_json(r);
  summary["s_s_spread"] = k.s_s_spread;
  summary["c_p1_spread"] = k.c_p1_spread;
  write_json(c.out / "thresholds.json", summary);
  std::vector<std::string> keys, vals;
  for (const auto& [key, val] : summary.items()) {
    keys.push_back(key);
    if (val.is_number_float()) vals.push_back(fmt(val.get<double>()));
    else if (val.is_number_integer()) vals.push_back(std::to_string(val.get<long long>()));
    else if (val.is_null()) vals.push_back("nan");
    else vals.push_back(val.get<std::string>());
  }
  CsvWriter csv(c.out / "thresholds.csv", keys);
  csv.row(vals);
}

json run_json(const GroundStateRun& r) {
  json seeds = json::array();
  for (const SeedResult& s : r.seeds)
    seeds.push_back({{"id", s.id}, {"energy", num(s.energy)}, {"residual", num(s.residual)},
                     {"iterations", s.iterations}, {"converged", s.converged}, {"stop", s.stop}});
  return json{{"mu", r.params.mu},
              {"nu", r.params.nu},
              {"lambda", r.params.lambda},
              {"a_level", r.a_level},
              {"critical_level", r.critical_level},
              {"a0_bound", num(r.a0_bound)},
              {"lambda_tilde", num(r.lambda_tilde)},
              {"verdict", to_string(r.verdict)},
              {"residual", r.residual},
              {"seed_id", r.seed_id},
              {"iterations", r.iterations},
              {"seeds", seeds}};
}

void task_system(const RunConfig& c, json& summary) {
  const ProblemParams pr = validate_params({c.dim, c.s, c.p, c.mu, c.nu, c.lambda});
  const SharpConstants k = constants_for(c, pr.exps);
  const ThresholdReport rep = make_threshold_report(pr, k);
  const GridPtr g = SpectralGrid::create(c.dim, c.n, c.half_width, c.s);
  const auto seeds = standard_seeds(pr, g, rep, c.seed);
  const GroundStateRun run = minimize_on_nehari(pr, seeds, level_context(rep), flow_options(c));
  summary = run_json(run);
  summary["thresholds"] = report_json(rep);
  write_json(c.out / "run.json", summary);
  CsvWriter csv(c.out / "seeds.csv", {"seed_id", "energy", "residual", "iterations", "converged", "stop"});
  for (const SeedResult& s : run.seeds)
    csv.row({s.id, fmt(s.energy), fmt(s.residual), fmt(s.iterations), fmt(s.converged), s.stop});
  if (c.write_profiles) {
    const json meta{{"mu", pr.mu}, {"nu", pr.nu}, {"lambda", pr.lambda}, {"a_level", run.a_level},
                    {"residual", run.residual}, {"seed_id", run.seed_id}};
    write_profile_pair(c.out / "system_u", run.pair.u, meta);
    write_profile_pair(c.out / "system_v", run.pair.v, meta);
  }
}

void task_scan(const RunConfig& c, json& summary) {
  if (c.mu_grid.empty() || c.lambda_grid.empty())
    throw Error(ErrorKind::ConfigParse, "scan needs mu_grid and lambda_grid");
  const Exponents e = validate_exponents(c.dim, c.s, c.p);
  const SharpConstants k = constants_for(c, e);
  ScanOptions o;
  o.flow = flow_options(c);
  o.bisect_steps = c.bisect_steps;
  o.threads = c.threads;
  o.rng_seed = c.seed;
  const auto rows = dichotomy_scan(e, c.mu_grid, c.nu, c.lambda_grid, c.n, c.half_width, k, o);

  CsvWriter scan(c.out / "scan.csv", {"mu", "nu", "lambda", "a_level", "critical_level", "verdict", "lambda_tilde",
                                      "bracket_lo", "bracket_hi", "a0_bound", "residual", "seed_id", "iterations"});
  CsvWriter bnd(c.out / "boundary.csv", {"mu", "lower", "upper", "estimate", "bracket_lo", "bracket_hi",
                                         "inside_bracket", "level_monotone"});
  json jrows = json::array();
  for (const ScanRow& row : rows) {
    for (const GroundStateRun& r : row.runs)
      scan.row({fmt(r.params.mu), fmt(r.params.nu), fmt(r.params.lambda), fmt(r.a_level), fmt(r.critical_level),
                to_string(r.verdict), fmt(r.lambda_tilde), fmt(row.report.lower_bound), fmt(row.report.lambda_tilde),
                fmt(r.a0_bound), fmt(r.residual), r.seed_id, fmt(r.iterations)});
    const BoundaryEstimate& b = row.boundary;
    bnd.row({fmt(row.mu), fmt(b.lower), fmt(b.upper), fmt(b.estimate), fmt(b.bracket_lo), fmt(b.bracket_hi),
             fmt(b.inside_bracket), fmt(row.level_monotone)});
    jrows.push_back({{"mu", row.mu}, {"points", row.runs.size()}, {"boundary_estimate", num(b.estimate)},
                     {"inside_bracket", b.inside_bracket}, {"level_monotone", row.level_monotone}});
  }
  summary = json{{"rows", jrows}, {"constants", constants_json(k)}};
}

void task_bubble(const RunConfig& c, json& summary) {
  validate_exponents(c.dim, c.s, c.p);
  const GridPtr g = SpectralGrid::create(c.dim, c.n, c.half_width, c.s);
  const double r = c.cutoff_radius > 0.0 ? c.cutoff_radius : c.half_width / 3.0;
  std::vector<double> eps = c.eps_list;
  if (eps.empty()) eps = {r / 4.0, r / 8.0, r / 16.0};
  std::vector<BubbleFamily> fam;
  CsvWriter csv(c.out / "bubble.csv", {"epsilon", "cutoff_radius", "seminorm_sq", "l2_sq", "crit_norm", "crit_power"});
  for (double x : eps) {
    fam.push_back(build_bubble(g, x, r));
    const BubbleFamily& b = fam.back();
    csv.row({fmt(b.epsilon), fmt(r), fmt(b.seminorm_sq), fmt(b.l2_sq), fmt(b.crit_norm), fmt(b.crit_power)});
  }
  summary = json{{"cutoff_radius", r}, {"scales", eps.size()}};
  if (fam.size() >= 3) {
    const BubbleSlopes sl = bubble_slopes(fam);
    summary["slope_seminorm_excess"] = num(sl.seminorm_excess);
    summary["slope_crit_deficit"] = num(sl.crit_deficit);
    summary["slope_mass"] = num(sl.mass);
    summary["expected_seminorm_excess"] = c.dim - 2.0 * c.s;
    summary["expected_crit_deficit"] = c.dim;
    summary["expected_mass"] = c.dim < 4.0 * c.s ? c.dim - 2.0 * c.s : 2.0 * c.s;
  }
  write_json(c.out / "bubble.json", summary);
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_profile_text(const fs::path& path, const Field& f) {
  auto out = open_out(path);
  const SpectralGrid& g = f.grid();
  const auto x = g.coordinates();
  std::string line;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto idx = g.index(i);
    line.clear();
    for (int a = 0; a < g.dim(); ++a) {
      line += format_number(x[idx[a]]);
      line += ' ';
    }
    line += format_number(f[i]);
    line += '\n';
    out << line;
  }
  if (!out) throw Error(ErrorKind::IoFailure, "write failed: " + path.string());
}

RunConfig parse_args(int argc, const char* const* argv) {
  RunConfig c;
  CLI::App app{"Ground states of a fractional system with one critical component"};
  app.set_config("--config", "", "flat key = value configuration file");
  app.allow_config_extras(false);
  std::string out = c.out.string();
  app.add_option("--task", c.task, "scalar | constants | thresholds | system | scan | bubble")
      ->check(CLI::IsMember(kTasks));
  app.add_option("--out", out, "output directory");
  app.add_option("--threads", c.threads, "worker threads for scans")->check(CLI::PositiveNumber);
  app.add_option("--seed", c.seed, "seed of the random seed pair");
  app.add_option("--dim", c.dim);
  app.add_option("--s", c.s);
  app.add_option("--p", c.p);
  app.add_option("--mu", c.mu);
  app.add_option("--nu", c.nu);
  app.add_option("--lambda", c.lambda);
  app.add_option("--beta", c.beta);
  app.add_option("--gamma", c.gamma);
  app.add_option("--n", c.n, "grid points per axis");
  app.add_option("--half_width", c.half_width, "box half-width L");
  app.add_option("--tol", c.tol);
  app.add_option("--max_iter", c.max_iter);
  app.add_option("--flow_steps", c.flow_steps);
  app.add_option("--flow_tol", c.flow_tol);
  app.add_option("--metric", c.metric)->check(CLI::IsMember({"sobolev", "l2"}));
  app.add_option("--delta", c.delta);
  app.add_option("--bisect_steps", c.bisect_steps);
  app.add_option("--ss_n", c.ss_n);
  app.add_option("--ss_half_width", c.ss_half_width);
  app.add_option("--cp_n", c.cp_n);
  app.add_option("--cp_half_width", c.cp_half_width);
  app.add_option("--s_s", c.s_s);
  app.add_option("--c_p1", c.c_p1);
  app.add_option("--mu_grid", c.mu_grid)->delimiter(',');
  app.add_option("--lambda_grid", c.lambda_grid)->delimiter(',');
  app.add_option("--eps_list", c.eps_list)->delimiter(',');
  app.add_option("--cutoff_radius", c.cutoff_radius);
  app.add_flag("--write_profiles", c.write_profiles);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    throw;
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorKind::ConfigParse, e.what());
  }
  c.out = out;
  return c;
}

void run(const RunConfig& c) {
  std::error_code ec;
  fs::create_directories(c.out, ec);
  if (ec) throw Error(ErrorKind::IoFailure, "cannot create " + c.out.string() + ": " + ec.message());

  const auto t0 = std::chrono::steady_clock::now();
  const std::string started = utc_now();
  json summary;
  if (c.task == "scalar") task_scalar(c, summary);
  else if (c.task == "constants") task_constants(c, summary);
  else if (c.task == "thresholds") task_thresholds(c, summary);
  else if (c.task == "system") task_system(c, summary);
  else if (c.task == "scan") task_scan(c, summary);
  else if (c.task == "bubble") task_bubble(c, summary);
  else throw Error(ErrorKind::ConfigParse, "unknown task " + c.task);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  write_json(c.out / "manifest.json", json{{"version", FRACGS_VERSION},
                                           {"started_at", started},
                                           {"wall_time_s", wall},
                                           {"seed", c.seed},
                                           {"inputs", config_json(c)},
                                           {"solver", solver_json(c)},
                                           {"summary", summary}});
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ConfigParse:
    case ErrorKind::ConstraintViolation:
    case ErrorKind::ScaleClash:
      return 2;
    case ErrorKind::IoFailure:
      return 4;
    default:
      return 3;
  }
}

int main_entry(int argc, const char* const* argv) {
  try {
    run(parse_args(argc, argv));
    return 0;
  } catch (const CLI::CallForHelp&) {
    return 0;
  } catch (const Error& e) {
    std::cerr << "fracgs: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "fracgs: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace fracgs::cli
