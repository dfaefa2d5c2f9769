#pragma once

#include <optional>

#include "fracgs/grid.hpp"

namespace fracgs {

struct ScalarSolveOptions {
  double tol = 1e-10;       ///< relative update between iterates
  double residual_cap = 1e-9;
  int max_iter = 2000;
  /// Seed profile; the default is a unit Gaussian of width L/10.
  std::optional<Field> seed;
};

/// Positive radial solution of (-Delta)^s w + beta w = gamma w^p.
struct ScalarGroundState {
  Field profile;
  double beta = 1.0;
  double gamma = 1.0;
  double p = 2.0;
  double energy = 0.0;         ///< f_{beta,gamma}(profile)
  double residual_norm = 0.0;  ///< |(-Delta)^s w + beta w - gamma w^p|_2 / |w|_2
  double update_norm = 0.0;    ///< last relative update
  int iterations = 0;
  double c_p1 = 0.0;           ///< filled for beta = gamma = 1 only
};

/// Petviashvili iteration u <- M^{p/(p-1)} ((-Delta)^s + beta)^{-1}(gamma |u|^{p-1} u),
/// M = <((-Delta)^s + beta) u, u> / <gamma |u|^{p-1} u, u>.
/// Throws NonpositiveProfile for a zero or sign-changing seed or iterate,
/// NoConvergence when max_iter is exhausted.
ScalarGroundState solve_scalar(const GridPtr& grid, double beta, double gamma, double p,
                               const ScalarSolveOptions& opts = {});

struct CpEstimates {
  double rayleigh = 0.0;           ///< |w|_{H^s}^2 / |w|_{p+1}^2
  double energy_inversion = 0.0;   ///< [f_1(w) / (1/2 - 1/(p+1))]^{(p-1)/(p+1)}
  double value() const { return rayleigh; }
};

/// Both estimates of C_{p+1} from a beta = gamma = 1 ground state.
/// Throws InconsistentEstimate if they differ by more than 1e-3 relative.
CpEstimates extract_c_p1(const ScalarGroundState& state);

/// gamma^{-2/(p-1)} beta^{(p+1)/(p-1) - N/(2s)} base.
double scaled_energy(int dim, double s, double p, double beta, double gamma, double base);

/// f_1(w) = (1/2 - 1/(p+1)) C_{p+1}^{(p+1)/(p-1)}
double f1_from_c_p1(double p, double c_p1);

/// H^s Rayleigh quotient |u|_{H^s}^2 / |u|_{p+1}^2 of an arbitrary field.
double subcritical_quotient(const Field& u, double p);

}  // namespace fracgs
