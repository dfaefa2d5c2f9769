#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fracgs/error.hpp"
#include "fracgs/model.hpp"
#include "fracgs/scalar_gs.hpp"
#include "fracgs/spectral.hpp"
#include "support.hpp"

using namespace fracgs;
using fracgs::test::rel_diff;

namespace {

GridPtr soliton_grid() {
  static const GridPtr g = SpectralGrid::create(1, 4096, 100.0, 0.5);
  return g;
}

double rel_linf(const Field& a, const Field& b) { return (a - b).max_abs() / b.max_abs(); }

}  // namespace

TEST_CASE("the Benjamin-Ono soliton is recovered") {
  const GridPtr g = soliton_grid();
  const ScalarGroundState w = solve_scalar(g, 1.0, 1.0, 2.0);
  const Field exact = Field::from_radial(g, [](double r) { return 2.0 / (1.0 + r * r); });
  CHECK(rel_linf(w.profile, exact) <= 1e-3);
  CHECK(w.residual_norm <= 1e-9);
  CHECK(w.iterations > 1);

  // The closed form is a near-solution of the discrete equation. Its periodic
  // images shift the residual by about 1.6e-4 and the kink at the box edge adds
  // more, so the check runs over the bulk |x| <= L/2.
  Field res = frac_laplacian(exact, 0.5);
  res += exact;
  double bulk = 0.0;
  for (std::size_t i = 0; i < res.size(); ++i) {
    res[i] -= exact[i] * exact[i];
    if (g->radius_sq(i) <= 2500.0) bulk = std::max(bulk, std::fabs(res[i]));
  }
  CHECK(bulk / exact.max_abs() <= 1e-4);
  CHECK(res.max_abs() / exact.max_abs() <= 2e-4);
}

TEST_CASE("periodized Lorentzian is an exact eigen-relation of the discrete operator") {
  // Summing the images turns the whole-line identity into a periodic one that
  // the spectral operator should reproduce to roundoff and truncation.
  const GridPtr g = soliton_grid();
  const double L = g->half_width();
  auto images = [L](double x, auto term) {
    double acc = 0.0;
    for (int j = -2000; j <= 2000; ++j) acc += term(x + 2.0 * L * j);
    return acc;
  };
  const auto xs = g->coordinates();
  Field u(g), ku_exact(g);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = xs[i];
    u[i] = images(x, [](double y) { return 2.0 / (1.0 + y * y); });
    ku_exact[i] = images(x, [](double y) { return 2.0 * (1.0 - y * y) / ((1.0 + y * y) * (1.0 + y * y)); });
  }
  CHECK((frac_laplacian(u, 0.5) - ku_exact).max_abs() <= 1e-7);
}

TEST_CASE("beta scaling of the soliton") {
  // w_beta(x) = beta w(beta x) for N = 1, s = 1/2, p = 2.
  const GridPtr g = soliton_grid();
  const ScalarGroundState w1 = solve_scalar(g, 1.0, 1.0, 2.0);
  const ScalarGroundState w4 = solve_scalar(g, 4.0, 1.0, 2.0);
  const Field exact = Field::from_radial(g, [](double r) { return 8.0 / (1.0 + 16.0 * r * r); });
  CHECK(rel_linf(w4.profile, exact) <= 1e-3);
  CHECK(rel_diff(w4.energy, scaled_energy(1, 0.5, 2.0, 4.0, 1.0, w1.energy)) <= 1e-3);
}

TEST_CASE("gamma scaling is exact on the grid") {
  const GridPtr g = SpectralGrid::create(2, 64, 12.0, 0.6);
  const ScalarGroundState w = solve_scalar(g, 1.0, 1.0, 2.0);
  const ScalarGroundState w2 = solve_scalar(g, 1.0, 2.0, 2.0);
  CHECK(rel_linf(2.0 * w2.profile, w.profile) <= 1e-8);
  CHECK(rel_diff(w2.energy, scaled_energy(2, 0.6, 2.0, 1.0, 2.0, w.energy)) <= 1e-8);
}

TEST_CASE("ground state satisfies the Nehari and Pohozaev identities") {
  const double s = 0.75, p = 2.5, beta = 1.3;
  const GridPtr g = SpectralGrid::create(1, 2048, 60.0, s);
  const ScalarGroundState w = solve_scalar(g, beta, 1.0, p);
  const double d = ds_seminorm_sq(w.profile), m = l2_norm_sq(w.profile), q = lp_power(w.profile, p + 1.0);
  CHECK(rel_diff(d + beta * m, q) <= 1e-8);
  // (N-2s)/2 |w|_D^2 + N beta/2 |w|_2^2 = N/(p+1) |w|_{p+1}^{p+1}
  CHECK(rel_diff(0.5 * (1.0 - 2.0 * s) * d + 0.5 * beta * m, q / (p + 1.0)) <= 1e-3);
  CHECK(w.profile.min() > 0.0);
}

TEST_CASE("both estimates of C_{p+1} agree") {
  const GridPtr g = SpectralGrid::create(1, 1024, 40.0, 0.6);
  const ScalarGroundState w = solve_scalar(g, 1.0, 1.0, 2.0);
  const CpEstimates cp = extract_c_p1(w);
  CHECK(rel_diff(cp.rayleigh, cp.energy_inversion) <= 1e-6);
  CHECK(w.c_p1 == cp.value());
  CHECK(rel_diff(f1_from_c_p1(2.0, cp.value()), w.energy) <= 1e-6);
  // The ground state minimizes the quotient among nearby positive profiles.
  const Field wider = Field::from_radial(g, [](double r) { return std::exp(-0.3 * r * r); });
  CHECK(subcritical_quotient(wider, 2.0) > cp.rayleigh);

  const ScalarGroundState w2 = solve_scalar(g, 2.0, 1.0, 2.0);
  CHECK_THROWS_AS(extract_c_p1(w2), Error);
}

TEST_CASE("scaled energy formula") {
  CHECK(scaled_energy(3, 0.75, 2.0, 1.0, 1.0, 7.0) == doctest::Approx(7.0));
  CHECK(scaled_energy(3, 0.75, 2.0, 4.0, 1.0, 1.0) == doctest::Approx(4.0));
  CHECK(scaled_energy(3, 0.75, 2.0, 1.0, 2.0, 1.0) == doctest::Approx(0.25));
  CHECK(f1_from_c_p1(2.0, 2.0) == doctest::Approx(8.0 / 6.0));
}

TEST_CASE("solver failure modes") {
  const GridPtr g = SpectralGrid::create(1, 256, 20.0, 0.5);
  ScalarSolveOptions o;
  o.seed = Field(g);
  try {
    (void)solve_scalar(g, 1.0, 1.0, 2.0, o);
    FAIL("expected NonpositiveProfile");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonpositiveProfile);
  }
  ScalarSolveOptions few;
  few.max_iter = 3;
  try {
    (void)solve_scalar(g, 1.0, 1.0, 2.0, few);
    FAIL("expected NoConvergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoConvergence);
  }
  CHECK_THROWS_AS(solve_scalar(g, 0.0, 1.0, 2.0), Error);
  CHECK_THROWS_AS(solve_scalar(g, 1.0, -1.0, 2.0), Error);
  CHECK_THROWS_AS(solve_scalar(g, 1.0, 1.0, 1.0), Error);
}
