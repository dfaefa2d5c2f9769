#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "fracgs/grid.hpp"

namespace fracgs::test {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Generic smooth field: a few shifted Gaussians with random signs. Not
// radially symmetric, which the spectral identities do not need.
inline Field random_field(const GridPtr& g, std::mt19937_64& rng) {
  Field f(g);
  const double L = g->half_width();
  for (int b = 0; b < 4; ++b) {
    const double amp = uniform(rng, -1.5, 1.5);
    const double w = uniform(rng, L / 20.0, L / 5.0);
    double c[3];
    for (double& x : c) x = uniform(rng, -L / 3.0, L / 3.0);
    const auto xs = g->coordinates();
    for (std::size_t i = 0; i < f.size(); ++i) {
      const auto idx = g->index(i);
      double r2 = 0.0;
      for (int d = 0; d < g->dim(); ++d) {
        const double dx = xs[idx[d]] - c[d];
        r2 += dx * dx;
      }
      f[i] += amp * std::exp(-0.5 * r2 / (w * w));
    }
  }
  return f;
}

// Radial field with random sign structure, nonzero almost surely.
inline Field random_radial(const GridPtr& g, std::mt19937_64& rng, bool positive) {
  const double L = g->half_width();
  double amp[3], wid[3];
  for (int b = 0; b < 3; ++b) {
    amp[b] = positive ? uniform(rng, 0.2, 1.5) : uniform(rng, -1.5, 1.5);
    wid[b] = uniform(rng, L / 20.0, L / 5.0);
  }
  return Field::from_radial(g, [&](double r) {
    double s = 0.0;
    for (int b = 0; b < 3; ++b) s += amp[b] * std::exp(-0.5 * r * r / (wid[b] * wid[b]));
    return s;
  });
}

inline double rel_diff(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b)); }

}  // namespace fracgs::test
