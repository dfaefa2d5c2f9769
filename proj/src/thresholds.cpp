#include "fracgs/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fracgs/error.hpp"
#include "fracgs/scalar_gs.hpp"
#include "fracgs/spectral.hpp"

namespace fracgs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kMaxSpread = 0.02;

double require_exponent(const Exponents& e) {
  const double E = e.energy_exponent();
  if (!(std::fabs(E) > 1e-12))
    throw Error(ErrorKind::ExponentDegenerate, "(p+1)/(p-1) = N/(2s)");
  return E;
}

}  // namespace

double talenti_quotient(const GridPtr& grid, double eps) {
  const double expo = -0.5 * (grid->dim() - 2.0 * grid->s());
  const double e2 = eps * eps;
  const Field u = Field::from_radial(grid, [&](double r) { return std::pow(e2 + r * r, expo); });
  const double crit = 2.0 * grid->dim() / (grid->dim() - 2.0 * grid->s());
  return ds_seminorm_sq(u) / std::pow(lp_power(u, crit), 2.0 / crit);
}

SsEstimate compute_s_s(const GridPtr& fine) {
  const int dim = fine->dim();
  const double s = fine->s();
  const double L = fine->half_width();
  const double order = dim - 2.0 * s;
  const double gain = std::pow(2.0, order);
  const GridPtr coarse = SpectralGrid::create(dim, fine->points_per_axis() / 2, L, s);

  SsEstimate out;
  for (const GridPtr& g : {coarse, fine}) {
    double prev = kNaN;
    for (double div : {8.0, 16.0, 32.0}) {
      const double eps = L / div;
      if (eps < 2.0 * g->spacing()) break;
      const double q = talenti_quotient(g, eps);
      out.samples.push_back({g->points_per_axis(), eps, q});
      if (!std::isnan(prev)) out.extrapolants.push_back((gain * q - prev) / (gain - 1.0));
      prev = q;
    }
  }
  if (out.extrapolants.size() < 2)
    throw Error(ErrorKind::NonConverged, "grid too coarse: fewer than two usable bubble scales");
  out.value = out.extrapolants.back();
  const auto [lo, hi] = std::minmax_element(out.extrapolants.begin(), out.extrapolants.end());
  out.spread = (*hi - *lo) / out.value;
  if (out.spread > kMaxSpread) {
    std::ostringstream msg;
    msg << "S_s spread " << out.spread << " exceeds " << kMaxSpread;
    throw Error(ErrorKind::NonConverged, msg.str());
  }
  return out;
}

SharpConstants compute_sharp_constants(const Exponents& e, const ConstantsOptions& opts) {
  SharpConstants c;
  c.options = opts;
  const SsEstimate ss = compute_s_s(SpectralGrid::create(e.dim, opts.ss_n, opts.ss_half_width, e.s));
  c.s_s = ss.value;
  c.s_s_spread = ss.spread;

  const auto fine = SpectralGrid::create(e.dim, opts.cp_n, opts.cp_half_width, e.s);
  const auto coarse = SpectralGrid::create(e.dim, opts.cp_n / 2, opts.cp_half_width, e.s);
  const ScalarGroundState w = solve_scalar(fine, 1.0, 1.0, e.p);
  const ScalarGroundState wc = solve_scalar(coarse, 1.0, 1.0, e.p);
  c.c_p1 = extract_c_p1(w).value();
  c.c_p1_spread = std::fabs(c.c_p1 - extract_c_p1(wc).value()) / c.c_p1;
  c.scalar_iterations = w.iterations;
  c.scalar_residual = w.residual_norm;
  c.c0 = c0_bound(e, c.s_s);

  std::ostringstream m;
  m << "S_s: Talenti quotients, n in {" << opts.ss_n / 2 << "," << opts.ss_n << "}, L = " << opts.ss_half_width
    << ", Richardson order N-2s; C_p+1: Petviashvili ground state, n = " << opts.cp_n
    << ", L = " << opts.cp_half_width;
  c.method = m.str();
  return c;
}

double c0_bound(const Exponents& e, double s_s) {
  const double s = e.s;
  const double a = e.alpha;
  const double r = (s - a) / s;
  return std::pow(s_s, r) * std::pow(s / (s - a), r) * std::pow(s / a, a / s);
}

double compute_mu0(const Exponents& e, double s_s, double c_p1) {
  const double E = require_exponent(e);
  const double p = e.p;
  const double base = (2.0 * e.s * (p + 1.0) / (e.dim * (p - 1.0))) * std::pow(s_s, e.dim / (2.0 * e.s)) *
                      std::pow(c_p1, -(p + 1.0) / (p - 1.0));
  return std::pow(base, 1.0 / E);
}

double compute_mu0_bar(const Exponents& e) {
  const double E = require_exponent(e);
  const double s = e.s;
  const double a = e.alpha;
  return (a / s) * std::pow((s - a) / s, ((e.dim - 2.0 * s) / (2.0 * s)) / E);
}

double h_function(const Exponents& e, double mu, double nu, double mu0, double a) {
  if (!(a > 0.0)) throw Error(ErrorKind::NonpositiveA, "a > 0 fails");
  const double E = require_exponent(e);
  const double q = (e.dim / (2.0 * e.s)) / E;
  return (mu + nu * a * a) / (2.0 * a) - (mu0 / (2.0 * a)) * std::pow(1.0 + a * a, -q);
}

LambdaTilde compute_lambda_tilde(const Exponents& e, double mu, double nu, double mu0) {
  if (!(mu > mu0)) throw Error(ErrorKind::ConstraintViolation, "mu > mu0 fails");
  const double lo0 = 1e-6;
  const double hi0 = std::sqrt(mu / nu);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo0, b = hi0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = h_function(e, mu, nu, mu0, c), fd = h_function(e, mu, nu, mu0, d);
  while (b - a > 1e-10) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - g * (b - a);
      fc = h_function(e, mu, nu, mu0, c);
    } else {
      a = c; c = d; fc = fd;
      d = a + g * (b - a);
      fd = h_function(e, mu, nu, mu0, d);
    }
  }
  const double x = 0.5 * (a + b);
  if (x - lo0 < 1e-8 || hi0 - x < 1e-8)
    throw Error(ErrorKind::NoInteriorMinimum, "minimizer of h sits on the search bracket");
  return {h_function(e, mu, nu, mu0, x), x};
}

double a0_value(const ProblemParams& pr, double c_p1, double a) {
  const Exponents& e = pr.exps;
  const double E = require_exponent(e);
  const double p = e.p;
  const double core = pr.mu + pr.nu * a * a - 2.0 * pr.lambda * a;
  return std::pow(1.0 + a * a, e.dim / (2.0 * e.s)) * std::pow(core, E) * (0.5 - 1.0 / (p + 1.0)) *
         std::pow(c_p1, (p + 1.0) / (p - 1.0));
}

const char* to_string(Regime r) noexcept {
  return r == Regime::SubThreshold ? "SubThreshold" : "SuperThreshold";
}

const char* to_string(Prediction p) noexcept {
  switch (p) {
    case Prediction::Exists: return "Exists";
    case Prediction::NoGroundState: return "NoGroundState";
    case Prediction::Undetermined: return "Undetermined";
  }
  return "Unknown";
}

ThresholdReport make_threshold_report(const ProblemParams& pr, const SharpConstants& c) {
  const Exponents& e = pr.exps;
  ThresholdReport r;
  r.dim = e.dim;
  r.s = e.s;
  r.p = e.p;
  r.mu = pr.mu;
  r.nu = pr.nu;
  r.lambda = pr.lambda;
  r.s_s = c.s_s;
  r.c_p1 = c.c_p1;
  r.c0 = c.c0;
  r.mu0 = compute_mu0(e, c.s_s, c.c_p1);
  const double E = e.energy_exponent();
  const double rel = std::fabs((e.dim / (2.0 * e.s)) / E) * c.s_s_spread +
                     std::fabs(((e.p + 1.0) / (e.p - 1.0)) / E) * c.c_p1_spread;
  r.mu0_error = rel * r.mu0;
  r.mu0_bar = compute_mu0_bar(e);
  r.critical_level = e.critical_level(c.s_s);
  r.upper_bound = std::sqrt(pr.mu * pr.nu);
  if (pr.mu > r.mu0) {
    r.regime = Regime::SuperThreshold;
    const LambdaTilde lt = compute_lambda_tilde(e, pr.mu, pr.nu, r.mu0);
    r.lambda_tilde = lt.value;
    r.a_star = lt.a_star;
    r.lower_bound = std::sqrt((pr.mu - r.mu0) * pr.nu);
    r.a0_bound = a0_value(pr, c.c_p1, lt.a_star);
    if (pr.lambda > r.lambda_tilde)
      r.prediction = Prediction::Exists;
    else if (pr.lambda < r.lower_bound)
      r.prediction = Prediction::NoGroundState;
  } else {
    r.regime = Regime::SubThreshold;
    r.lambda_tilde = r.a_star = r.lower_bound = r.a0_bound = kNaN;
    r.prediction = Prediction::Exists;
  }
  return r;
}

}  // namespace fracgs
