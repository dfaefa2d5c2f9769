#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracgs/grid.hpp"
#include "fracgs/params.hpp"
#include "fracgs/thresholds.hpp"

namespace fracgs {

enum class Verdict { Exists, NoGroundState, Inconclusive };
enum class GradientMetric { L2, Sobolev };

const char* to_string(Verdict v) noexcept;
const char* to_string(GradientMetric m) noexcept;

/// Returns (t u, t v) with t the unique root of phi. Throws ZeroPair.
FieldPair nehari_project(const ProblemParams& pr, const FieldPair& pair, double* t_out = nullptr);

struct FlowOptions {
  int flow_steps = 1200;
  double tol = 1e-6;  ///< target for the Euler-Lagrange residual (L2 norm)
  GradientMetric metric = GradientMetric::Sobolev;
  int modulus_every = 50;
  double tau_floor = 1e-8;
  double symmetry_tol = 1e-12;
  int stall_window = 200;
  double stall_rtol = 1e-12;  ///< relative energy decrease per window counted as a stall
  double delta = 0.02;        ///< verdict margin
  bool keep_history = false;
};

struct SeedPair {
  std::string id;
  FieldPair pair;
};

struct SeedResult {
  std::string id;
  double energy = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  bool diverged = false;
  std::string stop;  ///< converged, max_steps, stalled, line_search, diverged
  std::vector<double> history;
};

/// Data the verdict rule needs beyond the flow itself.
struct LevelContext {
  double critical_level = 0.0;
  double mu0 = 0.0;
  double lambda_tilde = 0.0;  ///< NaN when mu <= mu0
  double a0_bound = 0.0;      ///< NaN when mu <= mu0
};

LevelContext level_context(const ThresholdReport& report);

struct GroundStateRun {
  ProblemParams params;
  FieldPair pair;
  double a_level = 0.0;
  double critical_level = 0.0;
  double a0_bound = 0.0;
  double lambda_tilde = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  double residual = 0.0;
  std::string seed_id;
  int iterations = 0;
  std::vector<SeedResult> seeds;
};

/// Euler-Lagrange residual of the system, sqrt(|R_u|_2^2 + |R_v|_2^2).
double system_residual(const ProblemParams& pr, const FieldPair& pair);

/// Projected-gradient descent on the Nehari manifold from each seed; the
/// lowest-energy end state is reported with the verdict of the margin rule.
/// Throws AllSeedsDiverged when no seed produced a finite level.
GroundStateRun minimize_on_nehari(const ProblemParams& pr, const std::vector<SeedPair>& seeds,
                                  const LevelContext& ctx, const FlowOptions& opts = {});

Verdict classify(const ProblemParams& pr, const LevelContext& ctx, double a_level, double residual,
                 int seed_count, const FlowOptions& opts);

/// A_0 at a_{mu,nu}; throws NotSuperThreshold when mu <= mu0.
double ansatz_bound_a0(const ProblemParams& pr, const ThresholdReport& report);

/// Ansatz coefficients beta = (mu + nu a^2 - 2 lambda a)/(1+a^2), gamma = 1/(1+a^2).
struct AnsatzCoefficients {
  double a = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};
AnsatzCoefficients ansatz_coefficients(const ProblemParams& pr, double a);
/// Minimizer of a -> A_0(a) over a > 0 (used as the ansatz scale below mu0).
double argmin_a0(const ProblemParams& pr);
/// (w_{beta,gamma}, a w_{beta,gamma}) on the given grid.
FieldPair ansatz_pair(const ProblemParams& pr, const GridPtr& grid, double a);

struct BubbleFamily {
  double epsilon = 0.0;
  double cutoff_radius = 0.0;
  Field v;
  double seminorm_sq = 0.0;  ///< |v|_{D^s}^2
  double l2_sq = 0.0;        ///< |v|_2^2
  double crit_norm = 0.0;    ///< |v|_{2*}
  double crit_power = 0.0;   ///< |v|_{2*}^{2*}
};

/// Normalization kappa making kappa (1+|x|^2)^{-(N-2s)/2} solve (-Delta)^s V = V^{2*-1}.
double bubble_kappa(int dim, double s);
/// Smooth cutoff: 1 on [0, r], 0 on [2r, inf).
double cutoff(double rad, double r);

/// v = eta(x) eps^{-(N-2s)/2} V(x/eps). Throws ScaleClash unless 2r < L and eps <= r/4.
BubbleFamily build_bubble(const GridPtr& grid, double eps, double r);

/// Observed exponents of the three estimates over a geometric family of scales.
struct BubbleSlopes {
  double seminorm_excess = 0.0;  ///< |v|_{D^s}^2 - S^{N/(2s)} ~ eps^{N-2s}
  double crit_deficit = 0.0;     ///< S^{N/(2s)} - |v|_{2*}^{2*} ~ eps^N
  double mass = 0.0;             ///< |v|_2^2 ~ eps^{N-2s} when N < 4s
};

/// Exponents from the last three scales by the three-point rule
/// q = log((D1 - D2)/(D2 - D3)) / log(eps1/eps2), which needs no value of S;
/// the mass exponent is the least-squares log-log slope over all scales.
/// Needs at least three scales with a common ratio.
BubbleSlopes bubble_slopes(const std::vector<BubbleFamily>& family);

/// Seeds (w_mu, 0), (0, v_eps) for eps in {r/4, r/8} with r = L/3, the ansatz
/// pair and one random positive radial pair.
std::vector<SeedPair> standard_seeds(const ProblemParams& pr, const GridPtr& grid,
                                     const ThresholdReport& report, std::uint64_t rng_seed);

/// Radial sum of three Gaussians with random amplitudes and widths, for u and v.
FieldPair random_radial_pair(const GridPtr& grid, std::uint64_t rng_seed);

struct BoundaryEstimate {
  double lower = 0.0;     ///< largest lambda with NoGroundState (NaN if none)
  double upper = 0.0;     ///< smallest lambda with Exists (NaN if none)
  double estimate = 0.0;  ///< midpoint, NaN unless both sides are present
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  bool inside_bracket = false;
};

struct ScanRow {
  double mu = 0.0;
  ThresholdReport report;
  std::vector<GroundStateRun> runs;  ///< sorted by lambda
  BoundaryEstimate boundary;
  bool level_monotone = true;
};

struct ScanOptions {
  FlowOptions flow;
  int bisect_steps = 2;
  double boundary_tol = 0.02;
  double level_rtol = 0.02;
  int threads = 1;
  std::uint64_t rng_seed = 1;
};

/// Runs every (mu, lambda) point, bisects each row between its largest
/// NoGroundState and smallest Exists lambda and checks monotonicity.
/// Throws NonMonotoneVerdicts when Exists precedes NoGroundState in a row.
std::vector<ScanRow> dichotomy_scan(const Exponents& e, const std::vector<double>& mu_grid, double nu,
                                    const std::vector<double>& lambda_grid, int n, double half_width,
                                    const SharpConstants& constants, const ScanOptions& opts = {});

/// Applies the ordering checks to a finished row.
void check_row(ScanRow& row, const ScanOptions& opts);

}  // namespace fracgs
