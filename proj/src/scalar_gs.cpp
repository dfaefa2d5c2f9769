#include "fracgs/scalar_gs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "fracgs/error.hpp"
#include "fracgs/model.hpp"
#include "fracgs/params.hpp"
#include "fracgs/spectral.hpp"

namespace fracgs {

namespace {

Field power_term(const Field& u, double gamma, double p) {
  Field out(u.grid_ptr());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = gamma * abs_pow(u[i], p - 1.0) * u[i];
  return out;
}

Field default_seed(const GridPtr& grid) {
  const double width = grid->half_width() / 10.0;
  return Field::from_radial(grid, [width](double r) { return std::exp(-0.5 * r * r / (width * width)); });
}

// Bulk positivity. Coarse grids leave Gibbs ripples of relative size ~1e-4
// in the far field, so the check allows dips below 1e-3 max |u|.
constexpr double kRippleTol = 1e-3;

void require_positive(const Field& u) {
  const double top = u.max();
  if (!(top > 0.0)) throw Error(ErrorKind::NonpositiveProfile, "iterate has no positive part");
  const SpectralGrid& g = u.grid();
  const double r2max = 0.25 * g.half_width() * g.half_width();
  for (std::size_t i = 0; i < u.size(); ++i)
    if (g.radius_sq(i) <= r2max && !(u[i] > -kRippleTol * top))
      throw Error(ErrorKind::NonpositiveProfile, "iterate left the positive cone");
}

// Petviashvili fixes the shape; the amplitude is exact once M = 1.
Field rescaled(const Field& u, double beta, double gamma, double p) {
  const double lhs = ds_seminorm_sq(u) + beta * l2_norm_sq(u);
  const double rhs = inner(power_term(u, gamma, p), u);
  return std::pow(lhs / rhs, 1.0 / (p - 1.0)) * u;
}

double relative_residual(const Field& u, double beta, double gamma, double p) {
  Field res = frac_laplacian(u, u.grid().s());
  res.axpy(beta, u);
  res -= power_term(u, gamma, p);
  return std::sqrt(l2_norm_sq(res) / l2_norm_sq(u));
}

}  // namespace

ScalarGroundState solve_scalar(const GridPtr& grid, double beta, double gamma, double p,
                               const ScalarSolveOptions& opts) {
  validate_scalar_power(grid->dim(), grid->s(), p);
  if (!(beta > 0.0)) throw Error(ErrorKind::ConstraintViolation, "beta > 0 fails");
  if (!(gamma > 0.0)) throw Error(ErrorKind::ConstraintViolation, "gamma > 0 fails");

  Field u = opts.seed ? *opts.seed : default_seed(grid);
  require_same_grid(u, Field(grid));
  if (u.is_zero()) throw Error(ErrorKind::NonpositiveProfile, "zero seed is a fixed point");

  const double theta = p / (p - 1.0);
  const auto m = grid->multiplier();
  const auto w = grid->parseval_weights();
  const double norm = grid->cell_volume() / static_cast<double>(grid->size());

  const double cap = std::max(opts.residual_cap, 10.0 * opts.tol);
  ScalarGroundState out{Field(grid), beta, gamma, p};
  for (int it = 1; it <= opts.max_iter; ++it) {
    const Field nl = power_term(u, gamma, p);
    const Spectrum uh = transform(u);
    Spectrum nh = transform(nl);
    double lhs = 0.0;
    for (std::size_t i = 0; i < uh.size(); ++i) lhs += w[i] * (m[i] + beta) * std::norm(uh[i]);
    lhs *= norm;
    const double rhs = inner(nl, u);
    if (!(rhs > 0.0) || !(lhs > 0.0))
      throw Error(ErrorKind::NonpositiveProfile, "stabilizing factor undefined");
    const double factor = std::pow(lhs / rhs, theta);
    for (std::size_t i = 0; i < nh.size(); ++i) nh[i] *= factor / (m[i] + beta);
    Field next = inverse_transform(grid, nh);
    if (!next.all_finite()) throw Error(ErrorKind::NoConvergence, "iterate became non-finite");

    const double unorm = std::sqrt(l2_norm_sq(next));
    const double update = std::sqrt(l2_norm_sq(next - u)) / unorm;
    u = std::move(next);
    out.iterations = it;
    out.update_norm = update;
    // The residual is checked only once the update is small; it costs one
    // extra transform.
    if (update <= opts.tol && relative_residual(rescaled(u, beta, gamma, p), beta, gamma, p) <= cap) break;
  }
  require_positive(u);

  u = rescaled(u, beta, gamma, p);
  out.residual_norm = relative_residual(u, beta, gamma, p);
  out.energy = energy_scalar(beta, gamma, p, u);
  out.profile = std::move(u);

  if (out.update_norm > opts.tol || out.residual_norm > cap) {
    std::ostringstream msg;
    msg << "no convergence after " << out.iterations << " iterations (update " << out.update_norm
        << ", residual " << out.residual_norm << ")";
    throw Error(ErrorKind::NoConvergence, msg.str());
  }

  if (beta == 1.0 && gamma == 1.0) out.c_p1 = subcritical_quotient(out.profile, p);
  return out;
}

double subcritical_quotient(const Field& u, double p) {
  const double h = ds_seminorm_sq(u) + l2_norm_sq(u);
  return h / std::pow(lp_power(u, p + 1.0), 2.0 / (p + 1.0));
}

CpEstimates extract_c_p1(const ScalarGroundState& st) {
  if (st.beta != 1.0 || st.gamma != 1.0)
    throw Error(ErrorKind::ConstraintViolation, "C_{p+1} needs beta = gamma = 1");
  CpEstimates e;
  e.rayleigh = subcritical_quotient(st.profile, st.p);
  const double c = 0.5 - 1.0 / (st.p + 1.0);
  e.energy_inversion = std::pow(st.energy / c, (st.p - 1.0) / (st.p + 1.0));
  const double rel = std::fabs(e.rayleigh - e.energy_inversion) / e.rayleigh;
  if (!(rel <= 1e-3))
    throw Error(ErrorKind::InconsistentEstimate,
                "Rayleigh and energy estimates of C_{p+1} differ by " + std::to_string(rel));
  return e;
}

double scaled_energy(int dim, double s, double p, double beta, double gamma, double base) {
  const double expo = (p + 1.0) / (p - 1.0) - dim / (2.0 * s);
  return std::pow(gamma, -2.0 / (p - 1.0)) * std::pow(beta, expo) * base;
}

double f1_from_c_p1(double p, double c_p1) {
  return (0.5 - 1.0 / (p + 1.0)) * std::pow(c_p1, (p + 1.0) / (p - 1.0));
}

}  // namespace fracgs
