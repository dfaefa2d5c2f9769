#include "fracgs/model.hpp"

#include <cmath>

#include "fracgs/error.hpp"
#include "fracgs/spectral.hpp"

namespace fracgs {

namespace {

constexpr double kTLow = 1e-8;
constexpr int kBisectSteps = 200;
constexpr double kPhiRelTol = 1e-12;

double tpow(double t, double q) {
  if (q == 1.0) return t;
  if (q == 2.0) return t * t;
  return std::pow(t, q);
}

}  // namespace

PairIntegrals PairIntegrals::compute(const ProblemParams& params, const FieldPair& pair) {
  require_same_grid(pair.u, pair.v);
  PairIntegrals r;
  r.seminorm_u = ds_seminorm_sq(pair.u);
  r.seminorm_v = ds_seminorm_sq(pair.v);
  r.mass_u = l2_norm_sq(pair.u);
  r.mass_v = l2_norm_sq(pair.v);
  r.cross = inner(pair.u, pair.v);
  r.sub_power = lp_power(pair.u, params.p() + 1.0);
  r.crit_power = lp_power(pair.v, params.crit_exp());
  return r;
}

double PairIntegrals::quadratic(const ProblemParams& pr) const {
  return seminorm_u + seminorm_v + pr.mu * mass_u + pr.nu * mass_v - 2.0 * pr.lambda * cross;
}

double PairIntegrals::phi(const ProblemParams& pr, double t) const {
  return quadratic(pr) - tpow(t, pr.p() - 1.0) * sub_power - tpow(t, pr.crit_exp() - 2.0) * crit_power;
}

double PairIntegrals::energy(const ProblemParams& pr, double t) const {
  const double p1 = pr.p() + 1.0;
  const double c = pr.crit_exp();
  return 0.5 * t * t * quadratic(pr) - tpow(t, p1) * sub_power / p1 - tpow(t, c) * crit_power / c;
}

double PairIntegrals::reduced_energy(const ProblemParams& pr, double t) const {
  const double p1 = pr.p() + 1.0;
  const double c = pr.crit_exp();
  return (0.5 - 1.0 / p1) * tpow(t, p1) * sub_power + (0.5 - 1.0 / c) * tpow(t, c) * crit_power;
}

EnergyBreakdown energy_system(const ProblemParams& pr, const FieldPair& pair) {
  const PairIntegrals in = PairIntegrals::compute(pr, pair);
  EnergyBreakdown e;
  e.kinetic_u = 0.5 * in.seminorm_u;
  e.kinetic_v = 0.5 * in.seminorm_v;
  e.mass_u = 0.5 * pr.mu * in.mass_u;
  e.mass_v = 0.5 * pr.nu * in.mass_v;
  e.pot_sub = in.sub_power / (pr.p() + 1.0);
  e.pot_crit = in.crit_power / pr.crit_exp();
  e.coupling = pr.lambda * in.cross;
  e.total = e.kinetic_u + e.kinetic_v + e.mass_u + e.mass_v - e.pot_sub - e.pot_crit - e.coupling;
  return e;
}

double energy_scalar(double beta, double gamma, double p, const Field& u) {
  return 0.5 * ds_seminorm_sq(u) + 0.5 * beta * l2_norm_sq(u) -
         gamma * lp_power(u, p + 1.0) / (p + 1.0);
}

double energy_crit(const Field& v, double crit_exp) {
  return 0.5 * ds_seminorm_sq(v) - lp_power(v, crit_exp) / crit_exp;
}

NehariResidual nehari_residual(const ProblemParams& pr, const FieldPair& pair, double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::NonpositiveT, "t > 0 fails");
  const PairIntegrals in = PairIntegrals::compute(pr, pair);
  return {in.phi(pr, t), t};
}

double nehari_root(const ProblemParams& pr, const PairIntegrals& in) {
  if (!(in.sub_power > 0.0) && !(in.crit_power > 0.0))
    throw Error(ErrorKind::ZeroPair, "pair has no power mass; no Nehari root");
  const double q = in.quadratic(pr);
  double lo = kTLow;
  double hi = 1.0;
  while (in.phi(pr, hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  // phi(lo) > 0 holds at t = 1e-8 for every admissible pair.
  double mid = 0.5 * (lo + hi);
  for (int k = 0; k < kBisectSteps; ++k) {
    mid = 0.5 * (lo + hi);
    const double f = in.phi(pr, mid);
    if (std::fabs(f) <= kPhiRelTol * q) break;
    if (f > 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-17 * hi) break;
  }
  return mid;
}

double fibering_max_crit(const Exponents& e, double a, double b) {
  return (e.s / e.dim) * std::pow(a / std::pow(b, 2.0 / e.crit_exp), e.dim / (2.0 * e.s));
}

double fibering_max_scalar(double p, double a, double gamma, double b) {
  return (0.5 - 1.0 / (p + 1.0)) * a * std::pow(a / (gamma * b), 2.0 / (p - 1.0));
}

}  // namespace fracgs
