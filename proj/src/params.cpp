#include "fracgs/params.hpp"

#include <cmath>
#include <string>

#include "fracgs/error.hpp"

namespace fracgs {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::ConstraintViolation, what);
}

}  // namespace

double Exponents::energy_exponent() const {
  return (p + 1.0) / (p - 1.0) - dim / (2.0 * s);
}

double Exponents::critical_level(double s_s) const {
  return (s / dim) * std::pow(s_s, dim / (2.0 * s));
}

void validate_scalar_power(int dim, double s, double p) {
  require(std::isfinite(s) && std::isfinite(p), "non-finite parameter");
  require(dim >= 1, "N >= 1 fails");
  require(s > 0.0 && s < 1.0, "0 < s < 1 fails");
  require(p > 1.0, "p > 1 fails");
  if (dim > 2.0 * s) {
    const double crit = 2.0 * dim / (dim - 2.0 * s);
    require(p < crit - 1.0, "p < 2*-1 fails");
  }
}

Exponents validate_exponents(int dim, double s, double p) {
  require(std::isfinite(s) && std::isfinite(p), "non-finite parameter");
  require(dim >= 1, "N >= 1 fails");
  require(s > 0.0 && s < 1.0, "0 < s < 1 fails");
  require(dim > 2.0 * s, "N > 2s fails");
  Exponents e;
  e.dim = dim;
  e.s = s;
  e.p = p;
  e.crit_exp = 2.0 * dim / (dim - 2.0 * s);
  require(p > 1.0, "p > 1 fails");
  require(p < e.crit_exp - 1.0, "p < 2*-1 fails");
  e.alpha = dim * (1.0 / (p + 1.0) - 1.0 / e.crit_exp);
  return e;
}

ProblemParams validate_params(const RawParams& raw) {
  require(std::isfinite(raw.mu) && std::isfinite(raw.nu) && std::isfinite(raw.lambda),
          "non-finite parameter");
  ProblemParams out;
  out.exps = validate_exponents(raw.dim, raw.s, raw.p);
  require(raw.mu > 0.0, "mu > 0 fails");
  require(raw.nu > 0.0, "nu > 0 fails");
  require(raw.lambda > 0.0, "lambda > 0 fails");
  require(raw.lambda < std::sqrt(raw.mu * raw.nu), "lambda < sqrt(mu*nu) fails (lambda >= sqrt(mu*nu))");
  out.mu = raw.mu;
  out.nu = raw.nu;
  out.lambda = raw.lambda;
  return out;
}

}  // namespace fracgs
