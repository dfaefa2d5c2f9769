#pragma once

#include <complex>
#include <span>
#include <vector>

#include "fracgs/grid.hpp"

namespace fracgs {

using Spectrum = std::vector<std::complex<double>>;

Spectrum transform(const Field& u);
Field inverse_transform(const GridPtr& grid, const Spectrum& spec);

/// (-Delta)^order u via the multiplier |k|^{2 order}. order = s gives the
/// operator of the equations, order = s/2 its square root.
Field frac_laplacian(const Field& u, double order);

/// ((-Delta)^s + shift)^{-1} f; shift must be positive.
Field resolvent(const Field& f, double shift);

/// int |(-Delta)^{s/2} u|^2, evaluated as a weighted Parseval sum.
double ds_seminorm_sq(const Field& u);
/// int (-Delta)^{s/2} u (-Delta)^{s/2} v
double ds_inner(const Field& u, const Field& v);

double integral(const Field& u);
double inner(const Field& u, const Field& v);
double l2_norm_sq(const Field& u);
/// Same quantity from the half spectrum; agrees with l2_norm_sq by Parseval.
double l2_norm_sq_spectral(const Field& u);

/// sum |u|^q h^N (compensated summation).
double lp_power(const Field& u, double q);
double lp_norm(const Field& u, double q);

/// |x|^q with integer fast paths for the exponents that occur in practice.
double abs_pow(double x, double q);

/// Largest deviation of u from its images under axis reflections and axis
/// swaps, relative to max |u|. Zero for fields sampled from radial profiles.
double symmetry_defect(const Field& u);

/// Average of u over all axis reflections and axis permutations, the
/// projection onto the symmetry class of radial fields.
Field symmetrize(const Field& u);

}  // namespace fracgs
