#pragma once

#include <string>
#include <vector>

#include "fracgs/grid.hpp"
#include "fracgs/params.hpp"

namespace fracgs {

/// Rayleigh quotient |U|_{D^s}^2 / |U|_{2*}^2 of U = (eps^2 + |x|^2)^{-(N-2s)/2}.
double talenti_quotient(const GridPtr& grid, double eps);

struct SsSample {
  int n = 0;
  double eps = 0.0;
  double quotient = 0.0;
};

struct SsEstimate {
  double value = 0.0;
  double spread = 0.0;  ///< (max - min) / value over all extrapolants
  std::vector<SsSample> samples;
  std::vector<double> extrapolants;
};

/// S_s from Talenti quotients at eps in {L/8, L/16, L/32} on the given grid
/// and on the grid with half the points per axis. Only scales with eps >= 2h
/// are used; consecutive pairs are Richardson-extrapolated with the
/// truncation order N - 2s. The value is the extrapolant from the finest grid
/// and the smallest usable pair.
/// Throws NonConverged when the spread exceeds 2% or fewer than two
/// extrapolants are available.
SsEstimate compute_s_s(const GridPtr& fine);

struct ConstantsOptions {
  int ss_n = 128;
  double ss_half_width = 20.0;
  int cp_n = 128;
  double cp_half_width = 10.0;
};

struct SharpConstants {
  double s_s = 0.0;
  double s_s_spread = 0.0;
  double c_p1 = 0.0;
  double c_p1_spread = 0.0;  ///< relative change against the half-resolution solve
  double c0 = 0.0;
  std::string method;        ///< human-readable provenance
  ConstantsOptions options;
  int scalar_iterations = 0;
  double scalar_residual = 0.0;
};

SharpConstants compute_sharp_constants(const Exponents& e, const ConstantsOptions& opts = {});

/// C_0 = S^{(s-a)/s} (s/(s-a))^{(s-a)/s} (s/a)^{a/s}
double c0_bound(const Exponents& e, double s_s);

/// mu_0 = [(2s(p+1)/(N(p-1))) S^{N/(2s)} C^{-(p+1)/(p-1)}]^{1/E}, E = (p+1)/(p-1) - N/(2s).
/// Throws ExponentDegenerate when E vanishes.
double compute_mu0(const Exponents& e, double s_s, double c_p1);

/// mu0_bar = (a/s) ((s-a)/s)^{((N-2s)/(2s))/E}
double compute_mu0_bar(const Exponents& e);

/// h(a) = (mu + nu a^2)/(2a) - (mu0/(2a)) (1 + a^2)^{-(N/(2s))/E}; throws NonpositiveA.
double h_function(const Exponents& e, double mu, double nu, double mu0, double a);

struct LambdaTilde {
  double value = 0.0;
  double a_star = 0.0;
};

/// Golden-section minimization of h over (1e-6, sqrt(mu/nu)).
/// Throws NoInteriorMinimum if the search ends on the bracket.
LambdaTilde compute_lambda_tilde(const Exponents& e, double mu, double nu, double mu0);

/// A_0(a) = (1+a^2)^{N/(2s)} (mu + nu a^2 - 2 lambda a)^E (1/2 - 1/(p+1)) C^{(p+1)/(p-1)}.
double a0_value(const ProblemParams& pr, double c_p1, double a);

enum class Regime { SubThreshold, SuperThreshold };
enum class Prediction { Exists, NoGroundState, Undetermined };

const char* to_string(Regime r) noexcept;
const char* to_string(Prediction p) noexcept;

struct ThresholdReport {
  int dim = 0;
  double s = 0.0;
  double p = 0.0;
  double mu = 0.0;
  double nu = 0.0;
  double lambda = 0.0;
  double s_s = 0.0;
  double c_p1 = 0.0;
  double c0 = 0.0;
  double mu0 = 0.0;
  double mu0_error = 0.0;  ///< first-order propagation of the constants' spreads
  double mu0_bar = 0.0;
  double critical_level = 0.0;
  double lambda_tilde = 0.0;  ///< NaN unless mu > mu0
  double a_star = 0.0;        ///< NaN unless mu > mu0
  double lower_bound = 0.0;   ///< sqrt((mu - mu0) nu), NaN unless mu > mu0
  double upper_bound = 0.0;   ///< sqrt(mu nu)
  double a0_bound = 0.0;      ///< A_0(a_star), NaN unless mu > mu0
  Regime regime = Regime::SubThreshold;
  Prediction prediction = Prediction::Undetermined;
};

ThresholdReport make_threshold_report(const ProblemParams& pr, const SharpConstants& c);

}  // namespace fracgs
