#include "fracgs/system_gs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

#include "fracgs/error.hpp"
#include "fracgs/model.hpp"
#include "fracgs/scalar_gs.hpp"
#include "fracgs/spectral.hpp"

namespace fracgs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Physical-space integrals of a trial pair whose (-Delta)^s images are known,
// so the line search needs no transforms.
PairIntegrals integrals_from_images(const ProblemParams& pr, const Field& u, const Field& v, const Field& ku,
                                    const Field& kv) {
  PairIntegrals r;
  r.seminorm_u = inner(u, ku);
  r.seminorm_v = inner(v, kv);
  r.mass_u = l2_norm_sq(u);
  r.mass_v = l2_norm_sq(v);
  r.cross = inner(u, v);
  r.sub_power = lp_power(u, pr.p() + 1.0);
  r.crit_power = lp_power(v, pr.crit_exp());
  return r;
}

// Flow state on the manifold: the pair, its (-Delta)^s images and its energy.
struct FlowState {
  Field u, v, ku, kv;
  double energy = 0.0;
};

FlowState make_state(const ProblemParams& pr, Field u, Field v) {
  Field ku = frac_laplacian(u, pr.s());
  Field kv = frac_laplacian(v, pr.s());
  const PairIntegrals in = integrals_from_images(pr, u, v, ku, kv);
  const double t = nehari_root(pr, in);
  u *= t; v *= t; ku *= t; kv *= t;
  return {std::move(u), std::move(v), std::move(ku), std::move(kv), in.energy(pr, t)};
}

struct Direction {
  Field gu, gv, kgu, kgv;
};

// L2: g = R. Sobolev: g = ((-Delta)^s + mass)^{-1} R = field - (K + mass)^{-1} F.
void component_direction(const Field& x, const Field& kx, const Field& force, const Field& res, double mass,
                         GradientMetric metric, Field& g, Field& kg) {
  const auto m = x.grid().multiplier();
  const GridPtr& grid = x.grid_ptr();
  if (metric == GradientMetric::L2) {
    g = res;
    kg = frac_laplacian(res, grid->s());
    return;
  }
  const Spectrum fh = transform(force);
  Spectrum a(fh.size()), b(fh.size());
  for (std::size_t i = 0; i < fh.size(); ++i) {
    const std::complex<double> z = fh[i] / (m[i] + mass);
    a[i] = z;
    b[i] = m[i] * z;
  }
  g = x - inverse_transform(grid, a);
  kg = kx - inverse_transform(grid, b);
}

SeedResult run_flow(const ProblemParams& pr, const SeedPair& seed, const FlowOptions& opts, FieldPair& out) {
  SeedResult res;
  res.id = seed.id;
  const double p = pr.p();
  const double c = pr.crit_exp();
  const double mmax = *std::max_element(seed.pair.u.grid().multiplier().begin(),
                                        seed.pair.u.grid().multiplier().end());
  const double tau_max =
      opts.metric == GradientMetric::Sobolev ? 1.0 : 2.0 / (mmax + std::min(pr.mu, pr.nu));

  FlowState st = make_state(pr, seed.pair.u, seed.pair.v);
  const GridPtr& grid = st.u.grid_ptr();
  Field fu(grid), fv(grid), ru(grid), rv(grid);
  Direction d{Field(grid), Field(grid), Field(grid), Field(grid)};
  Field tu(grid), tv(grid), tku(grid), tkv(grid);
  double tau = tau_max;
  std::vector<double> energies{st.energy};
  res.stop = "max_steps";

  auto finish = [&](const char* why) { res.stop = why; };

  int it = 0;
  for (;; ++it) {
    if (!std::isfinite(st.energy) || !st.u.all_finite() || !st.v.all_finite()) {
      res.diverged = true;
      finish("diverged");
      break;
    }
    if (symmetry_defect(st.u) > opts.symmetry_tol || symmetry_defect(st.v) > opts.symmetry_tol)
      throw Error(ErrorKind::SymmetryBroken, "flow iterate lost radial symmetry (seed " + seed.id + ")");

    for (std::size_t i = 0; i < grid->size(); ++i) {
      const double ui = st.u[i], vi = st.v[i];
      fu[i] = abs_pow(ui, p - 1.0) * ui + pr.lambda * vi;
      fv[i] = abs_pow(vi, c - 2.0) * vi + pr.lambda * ui;
      ru[i] = st.ku[i] + pr.mu * ui - fu[i];
      rv[i] = st.kv[i] + pr.nu * vi - fv[i];
    }
    res.residual = std::sqrt(l2_norm_sq(ru) + l2_norm_sq(rv));
    if (res.residual <= opts.tol) {
      res.converged = true;
      finish("converged");
      break;
    }
    if (it >= opts.flow_steps) break;
    if (it >= opts.stall_window) {
      const double before = energies[energies.size() - 1 - opts.stall_window];
      if (before - st.energy <= opts.stall_rtol * std::fabs(st.energy)) {
        finish("stalled");
        break;
      }
    }

    component_direction(st.u, st.ku, fu, ru, pr.mu, opts.metric, d.gu, d.kgu);
    component_direction(st.v, st.kv, fv, rv, pr.nu, opts.metric, d.gv, d.kgv);

    tau = std::min(2.0 * tau, tau_max);
    bool accepted = false;
    double t_new = 1.0, e_new = st.energy;
    while (tau >= opts.tau_floor) {
      for (std::size_t i = 0; i < grid->size(); ++i) {
        tu[i] = st.u[i] - tau * d.gu[i];
        tv[i] = st.v[i] - tau * d.gv[i];
        tku[i] = st.ku[i] - tau * d.kgu[i];
        tkv[i] = st.kv[i] - tau * d.kgv[i];
      }
      const PairIntegrals in = integrals_from_images(pr, tu, tv, tku, tkv);
      if (in.sub_power > 0.0 || in.crit_power > 0.0) {
        t_new = nehari_root(pr, in);
        e_new = in.energy(pr, t_new);
        if (e_new < st.energy) {
          accepted = true;
          break;
        }
      }
      tau *= 0.5;
    }
    if (!accepted) {
      finish("line_search");
      break;
    }
    tu *= t_new; tv *= t_new; tku *= t_new; tkv *= t_new;
    std::swap(st.u, tu); std::swap(st.v, tv); std::swap(st.ku, tku); std::swap(st.kv, tkv);
    st.energy = e_new;

    if (opts.modulus_every > 0 && (it + 1) % opts.modulus_every == 0) {
      // Fresh images remove drift from the linear updates of K u, K v, and the
      // symmetrization removes roundoff in the non-radial directions, which
      // the flow amplifies.
      const Field su = symmetrize(st.u), sv = symmetrize(st.v);
      FlowState fresh = make_state(pr, su, sv);
      FlowState mod = make_state(pr, su.abs(), sv.abs());
      st = mod.energy <= fresh.energy ? std::move(mod) : std::move(fresh);
    }
    energies.push_back(st.energy);
  }

  res.iterations = it;
  res.energy = st.energy;
  if (opts.keep_history) res.history = std::move(energies);
  out = FieldPair{std::move(st.u), std::move(st.v)};
  return res;
}

}  // namespace

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Exists: return "Exists";
    case Verdict::NoGroundState: return "NoGroundState";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Unknown";
}

const char* to_string(GradientMetric m) noexcept { return m == GradientMetric::L2 ? "L2" : "Sobolev"; }

FieldPair nehari_project(const ProblemParams& pr, const FieldPair& pair, double* t_out) {
  require_same_grid(pair.u, pair.v);
  if (pair.u.is_zero() && pair.v.is_zero()) throw Error(ErrorKind::ZeroPair, "cannot project (0, 0)");
  const double t = nehari_root(pr, PairIntegrals::compute(pr, pair));
  if (t_out) *t_out = t;
  return {t * pair.u, t * pair.v};
}

double system_residual(const ProblemParams& pr, const FieldPair& pair) {
  const Field ku = frac_laplacian(pair.u, pr.s());
  const Field kv = frac_laplacian(pair.v, pr.s());
  double su = 0.0, sv = 0.0;
  Field ru(pair.u.grid_ptr()), rv(pair.u.grid_ptr());
  for (std::size_t i = 0; i < ru.size(); ++i) {
    const double u = pair.u[i], v = pair.v[i];
    ru[i] = ku[i] + pr.mu * u - abs_pow(u, pr.p() - 1.0) * u - pr.lambda * v;
    rv[i] = kv[i] + pr.nu * v - abs_pow(v, pr.crit_exp() - 2.0) * v - pr.lambda * u;
  }
  su = l2_norm_sq(ru);
  sv = l2_norm_sq(rv);
  return std::sqrt(su + sv);
}

LevelContext level_context(const ThresholdReport& r) {
  return {r.critical_level, r.mu0, r.lambda_tilde, r.a0_bound};
}

Verdict classify(const ProblemParams& pr, const LevelContext& ctx, double a_level, double residual,
                 int seed_count, const FlowOptions& opts) {
  const double cstar = ctx.critical_level;
  if (a_level <= cstar * (1.0 - 2.0 * opts.delta) && residual <= opts.tol) return Verdict::Exists;
  const bool super = pr.mu > ctx.mu0 && std::isfinite(ctx.lambda_tilde);
  if (a_level >= cstar * (1.0 - opts.delta) && seed_count >= 5 && super && pr.lambda < ctx.lambda_tilde)
    return Verdict::NoGroundState;
  return Verdict::Inconclusive;
}

GroundStateRun minimize_on_nehari(const ProblemParams& pr, const std::vector<SeedPair>& seeds,
                                  const LevelContext& ctx, const FlowOptions& opts) {
  if (seeds.empty()) throw Error(ErrorKind::ConstraintViolation, "at least one seed is required");
  GroundStateRun run{pr, FieldPair{seeds.front().pair.u, seeds.front().pair.v}, 0.0, 0.0, 0.0, 0.0,
                     Verdict::Inconclusive, 0.0, "", 0, {}};
  run.critical_level = ctx.critical_level;
  run.a0_bound = ctx.a0_bound;
  run.lambda_tilde = ctx.lambda_tilde;
  double best = std::numeric_limits<double>::infinity();
  int finite = 0;
  for (const SeedPair& seed : seeds) {
    FieldPair end{seed.pair.u, seed.pair.v};
    SeedResult r;
    try {
      r = run_flow(pr, seed, opts, end);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ZeroPair) throw;
      r.id = seed.id;
      r.diverged = true;
      r.stop = "zero_pair";
    }
    if (!r.diverged && std::isfinite(r.energy)) {
      ++finite;
      if (r.energy < best) {
        best = r.energy;
        run.pair = std::move(end);
        run.seed_id = r.id;
        run.iterations = r.iterations;
        run.residual = r.residual;
      }
    }
    run.seeds.push_back(std::move(r));
  }
  if (finite == 0) throw Error(ErrorKind::AllSeedsDiverged, "every seed diverged");
  run.a_level = best;
  run.verdict = classify(pr, ctx, run.a_level, run.residual, finite, opts);
  return run;
}

double ansatz_bound_a0(const ProblemParams& pr, const ThresholdReport& report) {
  if (!(pr.mu > report.mu0)) throw Error(ErrorKind::NotSuperThreshold, "A_0 needs mu > mu0");
  return a0_value(pr, report.c_p1, report.a_star);
}

AnsatzCoefficients ansatz_coefficients(const ProblemParams& pr, double a) {
  const double q = 1.0 + a * a;
  return {a, (pr.mu + pr.nu * a * a - 2.0 * pr.lambda * a) / q, 1.0 / q};
}

double argmin_a0(const ProblemParams& pr) {
  // log A_0 up to constants; the constant C_{p+1} does not move the minimizer.
  const double E = pr.exps.energy_exponent();
  const double k = pr.dim() / (2.0 * pr.s());
  auto f = [&](double a) {
    return k * std::log1p(a * a) + E * std::log(pr.mu + pr.nu * a * a - 2.0 * pr.lambda * a);
  };
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = 1e-6, b = 10.0 * std::sqrt(pr.mu / pr.nu) + 10.0;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > 1e-10 * (1.0 + b)) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

FieldPair ansatz_pair(const ProblemParams& pr, const GridPtr& grid, double a) {
  const AnsatzCoefficients co = ansatz_coefficients(pr, a);
  const ScalarGroundState w = solve_scalar(grid, co.beta, co.gamma, pr.p());
  return {w.profile, a * w.profile};
}

double bubble_kappa(int dim, double s) {
  const double c = std::pow(2.0, 2.0 * s) * std::exp(std::lgamma(0.5 * (dim + 2.0 * s)) -
                                                      std::lgamma(0.5 * (dim - 2.0 * s)));
  return std::pow(c, (dim - 2.0 * s) / (4.0 * s));
}

double cutoff(double rad, double r) {
  if (rad <= r) return 1.0;
  if (rad >= 2.0 * r) return 0.0;
  const double x = (rad - r) / r;
  auto bump = [](double y) { return y > 0.0 ? std::exp(-1.0 / y) : 0.0; };
  const double a = bump(1.0 - x);
  return a / (a + bump(x));
}

BubbleFamily build_bubble(const GridPtr& grid, double eps, double r) {
  if (!(2.0 * r < grid->half_width())) throw Error(ErrorKind::ScaleClash, "2r < L fails");
  if (!(eps > 0.0) || !(eps <= 0.25 * r)) throw Error(ErrorKind::ScaleClash, "0 < eps <= r/4 fails");
  const int dim = grid->dim();
  const double s = grid->s();
  const double kappa = bubble_kappa(dim, s);
  const double decay = 0.5 * (dim - 2.0 * s);
  const double amp = kappa * std::pow(eps, -decay);
  BubbleFamily b{eps, r, Field::from_radial(grid, [&](double rad) {
                   const double y = rad / eps;
                   return cutoff(rad, r) * amp * std::pow(1.0 + y * y, -decay);
                 })};
  const double crit = 2.0 * dim / (dim - 2.0 * s);
  b.seminorm_sq = ds_seminorm_sq(b.v);
  b.l2_sq = l2_norm_sq(b.v);
  b.crit_power = lp_power(b.v, crit);
  b.crit_norm = std::pow(b.crit_power, 1.0 / crit);
  return b;
}

BubbleSlopes bubble_slopes(const std::vector<BubbleFamily>& fam) {
  const std::size_t k = fam.size();
  if (k < 3) throw Error(ErrorKind::ConstraintViolation, "three bubble scales are needed");
  const double ratio = fam[k - 3].epsilon / fam[k - 2].epsilon;
  if (std::fabs(fam[k - 2].epsilon / fam[k - 1].epsilon - ratio) > 1e-9 * ratio)
    throw Error(ErrorKind::ConstraintViolation, "bubble scales must form a geometric sequence");
  auto three_point = [&](double a, double b, double c) { return std::log((a - b) / (b - c)) / std::log(ratio); };
  BubbleSlopes out;
  out.seminorm_excess = three_point(fam[k - 3].seminorm_sq, fam[k - 2].seminorm_sq, fam[k - 1].seminorm_sq);
  // The deficit S - C(eps) has the same increments as -C(eps).
  out.crit_deficit = three_point(-fam[k - 3].crit_power, -fam[k - 2].crit_power, -fam[k - 1].crit_power);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const BubbleFamily& b : fam) {
    const double x = std::log(b.epsilon), y = std::log(b.l2_sq);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double m = static_cast<double>(k);
  out.mass = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return out;
}

FieldPair random_radial_pair(const GridPtr& grid, std::uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  const double L = grid->half_width();
  auto make = [&]() {
    double amp[3], width[3];
    for (int k = 0; k < 3; ++k) {
      amp[k] = 0.5 + uniform01(rng);
      width[k] = L / 20.0 + uniform01(rng) * (L / 5.0 - L / 20.0);
    }
    return Field::from_radial(grid, [&](double r) {
      double sum = 0.0;
      for (int k = 0; k < 3; ++k) sum += amp[k] * std::exp(-0.5 * r * r / (width[k] * width[k]));
      return sum;
    });
  };
  Field u = make();
  Field v = make();
  return {std::move(u), std::move(v)};
}

std::vector<SeedPair> standard_seeds(const ProblemParams& pr, const GridPtr& grid, const ThresholdReport& report,
                                     std::uint64_t rng_seed) {
  std::vector<SeedPair> seeds;
  const Field zero(grid);
  const ScalarGroundState wmu = solve_scalar(grid, pr.mu, 1.0, pr.p());
  seeds.push_back({"w_mu", {wmu.profile, zero}});
  const double r = grid->half_width() / 3.0;
  seeds.push_back({"bubble_r/4", {zero, build_bubble(grid, r / 4.0, r).v}});
  seeds.push_back({"bubble_r/8", {zero, build_bubble(grid, r / 8.0, r).v}});
  const double a = pr.mu > report.mu0 && std::isfinite(report.a_star) ? report.a_star : argmin_a0(pr);
  seeds.push_back({"ansatz", ansatz_pair(pr, grid, a)});
  seeds.push_back({"random", random_radial_pair(grid, rng_seed)});
  return seeds;
}

void check_row(ScanRow& row, const ScanOptions& opts) {
  std::sort(row.runs.begin(), row.runs.end(),
            [](const GroundStateRun& a, const GroundStateRun& b) { return a.params.lambda < b.params.lambda; });
  bool seen_exists = false;
  for (const GroundStateRun& r : row.runs) {
    if (r.verdict == Verdict::Exists) seen_exists = true;
    if (r.verdict == Verdict::NoGroundState && seen_exists)
      throw Error(ErrorKind::NonMonotoneVerdicts,
                  "Exists precedes NoGroundState along lambda at mu = " + std::to_string(row.mu));
  }
  row.level_monotone = true;
  for (std::size_t i = 1; i < row.runs.size(); ++i)
    if (row.runs[i].a_level > row.runs[i - 1].a_level * (1.0 + opts.level_rtol)) row.level_monotone = false;

  BoundaryEstimate& b = row.boundary;
  b.lower = b.upper = b.estimate = kNaN;
  for (const GroundStateRun& r : row.runs) {
    if (r.verdict == Verdict::NoGroundState) b.lower = r.params.lambda;
    if (r.verdict == Verdict::Exists && std::isnan(b.upper)) b.upper = r.params.lambda;
  }
  b.bracket_lo = row.report.lower_bound;
  b.bracket_hi = row.report.lambda_tilde;
  if (!std::isnan(b.lower) && !std::isnan(b.upper)) {
    b.estimate = 0.5 * (b.lower + b.upper);
    b.inside_bracket = b.estimate >= b.bracket_lo - opts.boundary_tol && b.estimate <= b.bracket_hi + opts.boundary_tol;
  } else {
    b.inside_bracket = false;
  }
}

namespace {

template <class Fn>
void parallel_for(std::size_t count, int threads, Fn fn) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(count, threads > 0 ? threads : 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i, 0);
    return;
  }
  std::mutex m;
  std::size_t next = 0;
  std::exception_ptr failure;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (;;) {
        std::size_t i;
        {
          std::lock_guard<std::mutex> lock(m);
          if (next >= count || failure) return;
          i = next++;
        }
        try {
          fn(i, w);
        } catch (...) {
          std::lock_guard<std::mutex> lock(m);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::vector<ScanRow> dichotomy_scan(const Exponents& e, const std::vector<double>& mu_grid, double nu,
                                    const std::vector<double>& lambda_grid, int n, double half_width,
                                    const SharpConstants& constants, const ScanOptions& opts) {
  if (mu_grid.empty() || lambda_grid.empty()) throw Error(ErrorKind::ConstraintViolation, "scan grids are empty");
  const int workers = std::max(1, opts.threads);
  // One grid per worker: transforms on a shared grid are serialized.
  std::vector<GridPtr> grids;
  for (int w = 0; w < workers; ++w) grids.push_back(SpectralGrid::create(e.dim, n, half_width, e.s));

  std::vector<ScanRow> rows(mu_grid.size());
  std::vector<ProblemParams> points;
  for (std::size_t i = 0; i < mu_grid.size(); ++i) {
    rows[i].mu = mu_grid[i];
    ProblemParams base = validate_params({e.dim, e.s, e.p, mu_grid[i], nu, lambda_grid.front()});
    rows[i].report = make_threshold_report(base, constants);
    for (double lam : lambda_grid) points.push_back(validate_params({e.dim, e.s, e.p, mu_grid[i], nu, lam}));
  }

  auto solve_point = [&](const ProblemParams& pr, const ScanRow& row, std::size_t w) {
    ThresholdReport rep = make_threshold_report(pr, constants);
    (void)row;
    auto seeds = standard_seeds(pr, grids[w], rep, opts.rng_seed);
    return minimize_on_nehari(pr, seeds, level_context(rep), opts.flow);
  };

  std::vector<std::vector<GroundStateRun>> results(points.size());
  parallel_for(points.size(), workers, [&](std::size_t i, std::size_t w) {
    const std::size_t row = i / lambda_grid.size();
    results[i].push_back(solve_point(points[i], rows[row], w));
  });
  for (std::size_t i = 0; i < points.size(); ++i)
    rows[i / lambda_grid.size()].runs.push_back(std::move(results[i].front()));

  parallel_for(rows.size(), workers, [&](std::size_t ri, std::size_t w) {
    ScanRow& row = rows[ri];
    check_row(row, opts);
    for (int step = 0; step < opts.bisect_steps; ++step) {
      const BoundaryEstimate& b = row.boundary;
      if (std::isnan(b.lower) || std::isnan(b.upper) || !(b.lower < b.upper)) break;
      const double mid = 0.5 * (b.lower + b.upper);
      const ProblemParams pr = validate_params({e.dim, e.s, e.p, row.mu, nu, mid});
      GroundStateRun r = solve_point(pr, row, w);
      const Verdict v = r.verdict;
      row.runs.push_back(std::move(r));
      check_row(row, opts);
      if (v == Verdict::Inconclusive) break;
    }
  });
  return rows;
}

}  // namespace fracgs
