#pragma once

#include "fracgs/grid.hpp"
#include "fracgs/params.hpp"

namespace fracgs {

/// Terms of the system energy; total = kinetic + mass - potentials - coupling.
struct EnergyBreakdown {
  double kinetic_u = 0.0;  ///< (1/2) |u|_{D^s}^2
  double kinetic_v = 0.0;
  double mass_u = 0.0;     ///< (mu/2) |u|_2^2
  double mass_v = 0.0;     ///< (nu/2) |v|_2^2
  double pot_sub = 0.0;    ///< |u|_{p+1}^{p+1} / (p+1)
  double pot_crit = 0.0;   ///< |v|_{2*}^{2*} / 2*
  double coupling = 0.0;   ///< lambda int uv
  double total = 0.0;
};

struct NehariResidual {
  double value = 0.0;
  double t = 1.0;
};

/// Every integral the fibering map t -> E(tu, tv) depends on. Once these are
/// known, the Nehari function, its root and the energy along the ray are
/// scalar computations.
struct PairIntegrals {
  double seminorm_u = 0.0;  ///< |u|_{D^s}^2
  double seminorm_v = 0.0;
  double mass_u = 0.0;      ///< |u|_2^2
  double mass_v = 0.0;
  double cross = 0.0;       ///< int uv
  double sub_power = 0.0;   ///< |u|_{p+1}^{p+1}
  double crit_power = 0.0;  ///< |v|_{2*}^{2*}

  static PairIntegrals compute(const ProblemParams& params, const FieldPair& pair);

  /// |(u,v)|_D^2 + int(mu u^2 + nu v^2) - 2 lambda int uv; positive unless (u,v) = 0.
  double quadratic(const ProblemParams& params) const;
  /// phi(t) = quadratic - t^{p-1} P - t^{2*-2} C
  double phi(const ProblemParams& params, double t) const;
  /// E(tu, tv)
  double energy(const ProblemParams& params, double t) const;
  /// Energy on the manifold at scale t, using the reduced form.
  double reduced_energy(const ProblemParams& params, double t) const;
};

EnergyBreakdown energy_system(const ProblemParams& params, const FieldPair& pair);

/// f_{beta,gamma}(u) = (1/2)|u|_{D^s}^2 + (beta/2)|u|_2^2 - gamma/(p+1) |u|_{p+1}^{p+1}.
double energy_scalar(double beta, double gamma, double p, const Field& u);

/// g(v) = (1/2)|v|_{D^s}^2 - (1/2*)|v|_{2*}^{2*}.
double energy_crit(const Field& v, double crit_exp);

NehariResidual nehari_residual(const ProblemParams& params, const FieldPair& pair, double t);

/// Unique positive root of phi by bracketed bisection. Throws ZeroPair when
/// both power integrals vanish.
double nehari_root(const ProblemParams& params, const PairIntegrals& ints);

/// max_t (t^2/2) a - (t^{2*}/2*) b = (s/N)(a / b^{2/2*})^{N/(2s)}.
double fibering_max_crit(const Exponents& e, double a, double b);
/// max_t (t^2/2) a - gamma (t^{p+1}/(p+1)) b.
double fibering_max_scalar(double p, double a, double gamma, double b);

}  // namespace fracgs
