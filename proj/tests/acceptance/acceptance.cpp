// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed below.
// Usage: acceptance [scratch_dir]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fracgs/cli.hpp"
#include "fracgs/error.hpp"
#include "fracgs/model.hpp"
#include "fracgs/scalar_gs.hpp"
#include "fracgs/spectral.hpp"
#include "fracgs/system_gs.hpp"
#include "fracgs/thresholds.hpp"

using namespace fracgs;
namespace fs = std::filesystem;

namespace {

// Tolerances.
constexpr double kSolitonLinf = 1e-3;
constexpr double kSolitonOracle = 1e-4;
constexpr double kSolitonSeconds = 30.0;
constexpr double kScalingRel = 1e-2;
constexpr double kScalingSeconds = 600.0;
constexpr double kSpreadMax = 0.02;
constexpr double kSpectralIdentity = 1e-11;
constexpr double kCrossingBracket = 0.05;
constexpr double kLambdaTildeOracle = 1e-8;
constexpr double kNehariT = 1e-10;
constexpr double kNehariClosedForm = 1e-10;
constexpr double kEnergyIdentity = 1e-6;
constexpr double kFlowResidual = 1e-6;
constexpr double kVerdictMargin = 0.02;
constexpr double kBoundaryTol = 0.02;
constexpr double kDichotomySeconds = 1800.0;
constexpr double kSlopeTol = 0.2;

// Reference exponents and grids.
constexpr int kDim = 3;
constexpr double kS = 0.75;
constexpr double kP = 2.0;
constexpr int kSystemN = 64;
constexpr double kSystemL = 20.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double rel_diff(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b)); }

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::string fmt(const char* f, auto... xs) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, xs...);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const Error& e) {
    o = {false, std::string("error: ") + e.what()};
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("criterion %d: %s  [%.1f s] %s\n", id, o.pass ? "PASS" : "FAIL", seconds_since(t0), o.detail.c_str());
  std::fflush(stdout);
}

Field random_radial(const GridPtr& g, std::mt19937_64& rng, bool positive) {
  const double L = g->half_width();
  double amp[3], wid[3];
  for (int b = 0; b < 3; ++b) {
    amp[b] = positive ? uniform(rng, 0.2, 1.5) : uniform(rng, -1.5, 1.5);
    wid[b] = uniform(rng, L / 20.0, L / 5.0);
  }
  return Field::from_radial(g, [&](double r) {
    double s = 0.0;
    for (int b = 0; b < 3; ++b) s += amp[b] * std::exp(-0.5 * r * r / (wid[b] * wid[b]));
    return s;
  });
}

Field random_field(const GridPtr& g, std::mt19937_64& rng) {
  Field f(g);
  const double L = g->half_width();
  const auto xs = g->coordinates();
  for (int b = 0; b < 4; ++b) {
    const double amp = uniform(rng, -1.5, 1.5), w = uniform(rng, L / 20.0, L / 5.0);
    double c[3];
    for (double& x : c) x = uniform(rng, -L / 3.0, L / 3.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const auto idx = g->index(i);
      double r2 = 0.0;
      for (int d = 0; d < g->dim(); ++d) r2 += (xs[idx[d]] - c[d]) * (xs[idx[d]] - c[d]);
      f[i] += amp * std::exp(-0.5 * r2 / (w * w));
    }
  }
  return f;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "fracgs");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli::main_entry(static_cast<int>(argv.size()), argv.data());
}

// Runs the CLI twice into separate directories and compares every CSV byte for byte.
bool identical_reruns(const fs::path& root, const std::string& name, const std::vector<std::string>& args,
                      int* csv_count) {
  const fs::path a = root / (name + "_a"), b = root / (name + "_b");
  fs::remove_all(a);
  fs::remove_all(b);
  std::vector<std::string> aa = args, bb = args;
  aa.insert(aa.end(), {"--out", a.string()});
  bb.insert(bb.end(), {"--out", b.string()});
  if (run_cli(aa) != 0 || run_cli(bb) != 0) return false;
  bool same = true;
  for (const auto& e : fs::directory_iterator(a)) {
    if (e.path().extension() != ".csv") continue;
    ++*csv_count;
    same = same && slurp(e.path()) == slurp(b / e.path().filename());
  }
  return same;
}

double sharp_sobolev_closed_form(int dim, double s) {
  const double N = dim;
  const double c = std::pow(2.0, 2.0 * s) * std::tgamma(0.5 * (N + 2.0 * s)) / std::tgamma(0.5 * (N - 2.0 * s));
  const double mass = std::pow(std::numbers::pi, 0.5 * N) * std::tgamma(0.5 * N) / std::tgamma(N);
  return c * std::pow(mass, 2.0 * s / N);
}

bool rows_monotone(const std::vector<ScanRow>& rows) {
  for (const ScanRow& row : rows) {
    if (!row.level_monotone) return false;
    bool seen_exists = false;
    for (const GroundStateRun& r : row.runs) {
      if (r.verdict == Verdict::Exists) seen_exists = true;
      if (seen_exists && r.verdict == Verdict::NoGroundState) return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path scratch = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "fracgs_acceptance";
  fs::create_directories(scratch);
  const Exponents ex = validate_exponents(kDim, kS, kP);

  std::printf("computing sharp constants at (N, s, p) = (%d, %g, %g)\n", kDim, kS, kP);
  const auto tc = Clock::now();
  const SharpConstants K = compute_sharp_constants(ex);
  const double mu0 = compute_mu0(ex, K.s_s, K.c_p1);
  const double crit = ex.critical_level(K.s_s);
  std::printf("S_s = %.6f (spread %.4f), C_p+1 = %.6f, mu0 = %.6f, critical level = %.6f  [%.1f s]\n", K.s_s,
              K.s_s_spread, K.c_p1, mu0, crit, seconds_since(tc));

  report(1, [] {
    const GridPtr g = SpectralGrid::create(1, 4096, 100.0, 0.5);
    const auto t0 = Clock::now();
    const ScalarGroundState w = solve_scalar(g, 1.0, 1.0, 2.0);
    const double secs = seconds_since(t0);
    const Field exact = Field::from_radial(g, [](double r) { return 2.0 / (1.0 + r * r); });
    const double err = (w.profile - exact).max_abs() / exact.max_abs();
    // Residual of the closed form over |x| <= L/2, away from the periodic seam.
    Field res = frac_laplacian(exact, 0.5);
    res += exact;
    double bulk = 0.0;
    for (std::size_t i = 0; i < res.size(); ++i) {
      res[i] -= exact[i] * exact[i];
      if (g->radius_sq(i) <= 2500.0) bulk = std::max(bulk, std::fabs(res[i]));
    }
    bulk /= exact.max_abs();
    const double full = res.max_abs() / exact.max_abs();
    return Outcome{err <= kSolitonLinf && secs <= kSolitonSeconds && bulk <= kSolitonOracle,
                   fmt("rel Linf %.2e, solve %.2f s, oracle residual %.2e (full box %.2e)", err, secs, bulk, full)};
  });

  report(2, [] {
    const auto t0 = Clock::now();
    const GridPtr g = SpectralGrid::create(kDim, 64, 5.0, kS);
    const double base = solve_scalar(g, 1.0, 1.0, kP).energy;
    double worst = 0.0;
    std::string d;
    for (auto [beta, gamma] : {std::pair{4.0, 1.0}, {1.0, 2.0}, {4.0, 2.0}}) {
      const double direct = solve_scalar(g, beta, gamma, kP).energy;
      const double e = rel_diff(direct, scaled_energy(kDim, kS, kP, beta, gamma, base));
      worst = std::max(worst, e);
      d += fmt("(%g,%g) %.1e ", beta, gamma, e);
    }
    const double secs = seconds_since(t0);
    return Outcome{worst <= kScalingRel && secs <= kScalingSeconds, d + fmt("total %.1f s", secs)};
  });

  report(3, [&] {
    std::mt19937_64 rng(3);
    double parseval = 0.0, adjoint = 0.0;
    for (int dim = 1; dim <= 3; ++dim) {
      const GridPtr g = SpectralGrid::create(dim, dim == 3 ? 32 : 128, 10.0, kS);
      for (int k = 0; k < 5; ++k) {
        const Field u = random_field(g, rng), v = random_field(g, rng);
        parseval = std::max(parseval, rel_diff(l2_norm_sq(u), l2_norm_sq_spectral(u)));
        const double a = inner(frac_laplacian(u, kS), v), b = inner(u, frac_laplacian(v, kS));
        const double scale = std::sqrt(ds_seminorm_sq(u) * ds_seminorm_sq(v));
        adjoint = std::max(adjoint, std::fabs(a - b) / scale);
      }
    }
    return Outcome{K.s_s_spread <= kSpreadMax && parseval <= kSpectralIdentity && adjoint <= kSpectralIdentity,
                   fmt("S_s spread %.4f, Parseval %.1e, self-adjointness %.1e", K.s_s_spread, parseval, adjoint)};
  });

  report(4, [&] {
    // w_mu is solved directly on a grid wide enough for its decay length.
    const GridPtr g = SpectralGrid::create(kDim, 128, 20.0, kS);
    const double below = solve_scalar(g, (1.0 - kCrossingBracket) * mu0, 1.0, kP).energy - crit;
    const double above = solve_scalar(g, (1.0 + kCrossingBracket) * mu0, 1.0, kP).energy - crit;
    const double bar = compute_mu0_bar(ex);
    const bool ok = below < 0.0 && above > 0.0 && mu0 < bar && bar < 1.0 && std::fabs(bar - 2.0 / 9.0) <= 1e-15;
    return Outcome{ok, fmt("f(w) - c* at 0.95 mu0: %+.4f, at 1.05 mu0: %+.4f; mu0 %.5f < mu0_bar %.17g < 1", below,
                           above, mu0, bar)};
  });

  report(5, [&] {
    std::mt19937_64 rng(5);
    double worst = 0.0;
    bool inside = true;
    for (int k = 0; k < 10; ++k) {
      const double nu = uniform(rng, 0.3, 3.0), mu = mu0 * uniform(rng, 1.2, 8.0);
      const LambdaTilde lt = compute_lambda_tilde(ex, mu, nu, mu0);
      const double top = std::sqrt(mu / nu);
      const int n = 400000;
      double best = std::numeric_limits<double>::infinity(), best_a = top;
      for (int i = 1; i <= n; ++i) {
        const double a = top * i / n, h = h_function(ex, mu, nu, mu0, a);
        if (h < best) best = h, best_a = a;
      }
      const double da = top / n;
      const double hm = h_function(ex, mu, nu, mu0, best_a - da), hp = h_function(ex, mu, nu, mu0, best_a + da);
      const double a_ref = best_a + 0.5 * da * (hm - hp) / (hm - 2.0 * best + hp);
      worst = std::max(worst, rel_diff(lt.value, h_function(ex, mu, nu, mu0, a_ref)));
      inside = inside && lt.value > std::sqrt((mu - mu0) * nu) && lt.value < std::sqrt(mu * nu);
    }
    return Outcome{worst <= kLambdaTildeOracle && inside,
                   fmt("10 points, oracle agreement %.1e, strictly bracketed: %s", worst, inside ? "yes" : "no")};
  });

  report(6, [] {
    std::mt19937_64 rng(6);
    const GridPtr g = SpectralGrid::create(kDim, 32, 10.0, kS);
    const Field zero(g);
    double idem = 0.0, closed = 0.0, ident = 0.0;
    for (int k = 0; k < 100; ++k) {
      const double mu = uniform(rng, 0.1, 2.0), nu = uniform(rng, 0.1, 2.0);
      const ProblemParams pr =
          validate_params(RawParams{kDim, kS, kP, mu, nu, uniform(rng, 0.05, 0.95) * std::sqrt(mu * nu)});
      const Field u = random_radial(g, rng, false), v = random_radial(g, rng, false);
      const FieldPair on = nehari_project(pr, {u, v});
      double t = 0.0;
      (void)nehari_project(pr, on, &t);
      idem = std::max(idem, std::fabs(t - 1.0));

      const double c = pr.crit_exp();
      double tu = 0.0, tv = 0.0;
      (void)nehari_project(pr, {u, zero}, &tu);
      (void)nehari_project(pr, {zero, v}, &tv);
      const double qu = (ds_seminorm_sq(u) + mu * l2_norm_sq(u)) / lp_power(u, kP + 1.0);
      const double qv = (ds_seminorm_sq(v) + nu * l2_norm_sq(v)) / lp_power(v, c);
      closed = std::max({closed, rel_diff(tu, std::pow(qu, 1.0 / (kP - 1.0))), rel_diff(tv, std::pow(qv, 1.0 / (c - 2.0)))});

      const double reduced = (0.5 - 1.0 / (kP + 1.0)) * lp_power(on.u, kP + 1.0) + (0.5 - 1.0 / c) * lp_power(on.v, c);
      ident = std::max(ident, rel_diff(energy_system(pr, on).total, reduced));
    }
    return Outcome{idem <= kNehariT && closed <= kNehariClosedForm && ident <= kEnergyIdentity,
                   fmt("100 pairs: |t*-1| %.1e, closed-form t* %.1e, energy identity %.1e", idem, closed, ident)};
  });

  std::vector<ScanRow> dichotomy_rows;
  report(7, [&] {
    const auto t0 = Clock::now();
    const GridPtr g = SpectralGrid::create(kDim, kSystemN, kSystemL, kS);
    FlowOptions fo;
    fo.delta = kVerdictMargin;
    auto solve = [&](double mu, double lambda) {
      const ProblemParams pr = validate_params(RawParams{kDim, kS, kP, mu, 1.0, lambda});
      const ThresholdReport rep = make_threshold_report(pr, K);
      return std::pair{minimize_on_nehari(pr, standard_seeds(pr, g, rep, 7), level_context(rep), fo), rep};
    };
    std::string d;

    // (a) below mu0 the coupled level sits under the critical level.
    const double mu_a = 0.5 * mu0;
    const auto [ra, repa] = solve(mu_a, 0.5 * std::sqrt(mu_a));
    const bool a_ok = ra.verdict == Verdict::Exists && ra.residual <= kFlowResidual;
    d += fmt("(a) %s a/c* %.4f res %.1e; ", to_string(ra.verdict), ra.a_level / crit, ra.residual);

    // (b) strong coupling above twice mu0_bar.
    const double mu = 2.0 * compute_mu0_bar(ex);
    const auto [rb, repb] = solve(mu, 0.9 * std::sqrt(mu));
    const bool b_ok = rb.verdict == Verdict::Exists;
    d += fmt("(b) %s a/c* %.4f, lambda %.4f vs lambda_tilde %.4f; ", to_string(rb.verdict), rb.a_level / crit,
             0.9 * std::sqrt(mu), repb.lambda_tilde);

    // (c) weak coupling: every restart stays at or above the margin.
    const auto [rc, repc] = solve(mu, 0.5 * std::sqrt(mu - mu0));
    double lowest = std::numeric_limits<double>::infinity();
    for (const SeedResult& s : rc.seeds) lowest = std::min(lowest, s.energy);
    const bool c_ok = rc.verdict == Verdict::NoGroundState && rc.seeds.size() >= 5 &&
                      lowest >= (1.0 - kVerdictMargin) * crit;
    d += fmt("(c) %s lowest seed/c* %.4f; ", to_string(rc.verdict), lowest / crit);

    // Empirical boundary along the mu = 2 mu0_bar row.
    ScanOptions so;
    so.flow = fo;
    so.boundary_tol = kBoundaryTol;
    so.rng_seed = 7;
    dichotomy_rows = dichotomy_scan(ex, {mu}, 1.0, {0.55, 0.58, 0.61, 0.64}, kSystemN, kSystemL, K, so);
    const BoundaryEstimate& bd = dichotomy_rows.front().boundary;
    const bool bd_ok = std::isfinite(bd.estimate) && bd.estimate >= std::sqrt(mu - mu0) &&
                       bd.estimate <= repb.lambda_tilde + kBoundaryTol;
    d += fmt("boundary %.4f in [%.4f, %.4f]", bd.estimate, std::sqrt(mu - mu0), repb.lambda_tilde + kBoundaryTol);

    const double secs = seconds_since(t0);
    d += fmt("; %.0f s", secs);
    return Outcome{a_ok && b_ok && c_ok && bd_ok && secs <= kDichotomySeconds, d};
  });

  report(8, [] {
    const int dim = 2;
    const double s = 0.75, r = 8.0;
    const GridPtr g = SpectralGrid::create(dim, 512, 20.0, s);
    std::vector<BubbleFamily> fam;
    for (double eps : {r / 4.0, r / 8.0, r / 16.0}) fam.push_back(build_bubble(g, eps, r));
    const BubbleSlopes sl = bubble_slopes(fam);
    const double excess = dim - 2.0 * s, deficit = dim, mass = dim - 2.0 * s;
    const bool ok = std::fabs(sl.seminorm_excess - excess) <= kSlopeTol &&
                    std::fabs(sl.crit_deficit - deficit) <= kSlopeTol && std::fabs(sl.mass - mass) <= kSlopeTol;
    return Outcome{ok, fmt("N=2, s=0.75: excess %.3f (%.2f), deficit %.3f (%.2f), mass %.3f (%.2f)", sl.seminorm_excess,
                           excess, sl.crit_deficit, deficit, sl.mass, mass)};
  });

  report(9, [&] {
    std::string d;
    const bool mono = !dichotomy_rows.empty() && rows_monotone(dichotomy_rows);
    d += fmt("scan rows monotone: %s; ", mono ? "yes" : "no");

    std::mt19937_64 rng(9);
    const GridPtr g = SpectralGrid::create(kDim, 32, 10.0, kS);
    double worst = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < 100; ++k) {
      const double mu = uniform(rng, 0.2, 2.0), nu = uniform(rng, 0.2, 2.0);
      const ProblemParams pr =
          validate_params(RawParams{kDim, kS, kP, mu, nu, uniform(rng, 0.05, 0.95) * std::sqrt(mu * nu)});
      const Field u = random_radial(g, rng, false), v = random_radial(g, rng, false);
      const double beta = mu - pr.lambda * pr.lambda / nu;
      for (double t : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        const Field a = t * u, b = t * v;
        const double lhs = energy_system(pr, {a, b}).total;
        const double rhs = energy_scalar(beta, 1.0, kP, a) + energy_crit(b, pr.crit_exp());
        worst = std::max(worst, (rhs - lhs) / std::max(1.0, std::fabs(rhs)));
      }
    }
    const bool comparison = worst <= 1e-12;
    d += fmt("comparison inequality on 100 pairs: %s; ", comparison ? "holds" : "violated");

    int csvs = 0;
    const double s1 = 0.35;
    const GridPtr line = SpectralGrid::create(1, 2048, 100.0, s1);
    const double c_line = solve_scalar(line, 1.0, 1.0, kP).c_p1;
    const bool same =
        identical_reruns(scratch, "scan", {"--task", "scan", "--dim", "1", "--s", fmt("%.17g", s1), "--n", "2048",
                                           "--half_width", "100", "--s_s", fmt("%.17g", sharp_sobolev_closed_form(1, s1)),
                                           "--c_p1", fmt("%.17g", c_line), "--mu_grid", "0.3,0.8", "--lambda_grid",
                                           "0.1,0.3,0.5", "--bisect_steps", "0"},
                         &csvs) &&
        identical_reruns(scratch, "bubble", {"--task", "bubble", "--dim", "2", "--n", "512", "--half_width", "20",
                                             "--cutoff_radius", "8"},
                         &csvs);
    d += fmt("%d CSVs byte-identical across reruns: %s", csvs, same ? "yes" : "no");
    return Outcome{mono && comparison && same && csvs >= 3, d};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
