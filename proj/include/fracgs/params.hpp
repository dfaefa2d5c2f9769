#pragma once

namespace fracgs {

/// Exponent data shared by every functional: dimension, fractional order,
/// subcritical power and the quantities derived from them.
struct Exponents {
  int dim = 3;
  double s = 0.75;
  double p = 2.0;
  double crit_exp = 4.0;  ///< 2* = 2N/(N - 2s)
  double alpha = 0.25;    ///< N(1/(p+1) - 1/2*), lies in (0, s)

  /// (p+1)/(p-1) - N/(2s); positive for every admissible p.
  double energy_exponent() const;
  /// Critical level (s/N) S^{N/(2s)} for a given sharp constant S.
  double critical_level(double s_s) const;
};

/// Full parameter tuple of the coupled system.
struct ProblemParams {
  Exponents exps;
  double mu = 1.0;
  double nu = 1.0;
  double lambda = 0.5;

  int dim() const { return exps.dim; }
  double s() const { return exps.s; }
  double p() const { return exps.p; }
  double crit_exp() const { return exps.crit_exp; }
};

struct RawParams {
  int dim = 3;
  double s = 0.75;
  double p = 2.0;
  double mu = 1.0;
  double nu = 1.0;
  double lambda = 0.5;
};

/// Checks N > 2s, 0 < s < 1 and 1 < p < 2* - 1 and fills in 2* and alpha.
/// Throws ConstraintViolation naming the first inequality that fails.
Exponents validate_exponents(int dim, double s, double p);

/// Adds the coefficient checks mu > 0, nu > 0, 0 < lambda < sqrt(mu nu).
ProblemParams validate_params(const RawParams& raw);

/// Scalar equations only need 0 < s < 1 and p > 1 (with p < 2* - 1 when N > 2s);
/// this admits e.g. N = 1, s = 1/2 where the system itself is not defined.
void validate_scalar_power(int dim, double s, double p);

}  // namespace fracgs
