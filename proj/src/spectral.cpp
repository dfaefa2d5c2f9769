#include "fracgs/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "fracgs/error.hpp"

namespace fracgs {

namespace {

// Plain sums over short blocks, Neumaier-compensated across blocks: close to
// full compensation in accuracy, deterministic, and cheap enough for the
// inner loops of the flows.
class Accumulator {
 public:
  void add(double x) {
    block_ += x;
    if (++count_ == kBlock) flush();
  }
  double value() {
    flush();
    return sum_ + comp_;
  }

 private:
  static constexpr int kBlock = 64;
  void flush() {
    const double x = block_;
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
    block_ = 0.0;
    count_ = 0;
  }
  double sum_ = 0.0;
  double comp_ = 0.0;
  double block_ = 0.0;
  int count_ = 0;
};

Field apply_multiplier(const Field& u, std::span<const double> mult) {
  Spectrum spec = transform(u);
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= mult[i];
  return inverse_transform(u.grid_ptr(), spec);
}

double weighted_spectral_sum(const SpectralGrid& g, const Spectrum& a, const Spectrum& b,
                             std::span<const double> mult) {
  const auto w = g.parseval_weights();
  Accumulator acc;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double re = a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    acc.add(w[i] * (mult.empty() ? 1.0 : mult[i]) * re);
  }
  return acc.value() * g.cell_volume() / static_cast<double>(g.size());
}

}  // namespace

double abs_pow(double x, double q) {
  const double a = std::fabs(x);
  if (q == 2.0) return a * a;
  if (q == 3.0) return a * a * a;
  if (q == 4.0) { const double b = a * a; return b * b; }
  if (q == 1.0) return a;
  return std::pow(a, q);
}

Spectrum transform(const Field& u) {
  Spectrum out(u.grid().spectral_size());
  u.grid().forward(u.values(), out);
  return out;
}

Field inverse_transform(const GridPtr& grid, const Spectrum& spec) {
  if (spec.size() != grid->spectral_size())
    throw Error(ErrorKind::GridMismatch, "spectrum does not match grid");
  Field out(grid);
  grid->backward(spec, out.values());
  return out;
}

Field frac_laplacian(const Field& u, double order) {
  const SpectralGrid& g = u.grid();
  if (order == g.s()) return apply_multiplier(u, g.multiplier());
  if (order == 0.5 * g.s()) return apply_multiplier(u, g.half_multiplier());
  const auto mult = g.multiplier_for(order);
  return apply_multiplier(u, mult);
}

Field resolvent(const Field& f, double shift) {
  if (!(shift > 0.0)) throw Error(ErrorKind::ConstraintViolation, "resolvent shift > 0 fails");
  const auto m = f.grid().multiplier();
  Spectrum spec = transform(f);
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] /= (m[i] + shift);
  return inverse_transform(f.grid_ptr(), spec);
}

double ds_seminorm_sq(const Field& u) {
  const Spectrum a = transform(u);
  return weighted_spectral_sum(u.grid(), a, a, u.grid().multiplier());
}

double ds_inner(const Field& u, const Field& v) {
  require_same_grid(u, v);
  return weighted_spectral_sum(u.grid(), transform(u), transform(v), u.grid().multiplier());
}

double l2_norm_sq_spectral(const Field& u) {
  const Spectrum a = transform(u);
  return weighted_spectral_sum(u.grid(), a, a, {});
}

double integral(const Field& u) {
  Accumulator acc;
  for (double x : u.values()) acc.add(x);
  return acc.value() * u.grid().cell_volume();
}

double inner(const Field& u, const Field& v) {
  require_same_grid(u, v);
  Accumulator acc;
  const auto a = u.values();
  const auto b = v.values();
  for (std::size_t i = 0; i < a.size(); ++i) acc.add(a[i] * b[i]);
  return acc.value() * u.grid().cell_volume();
}

double l2_norm_sq(const Field& u) { return lp_power(u, 2.0); }

double lp_power(const Field& u, double q) {
  if (!(q >= 1.0)) throw Error(ErrorKind::ConstraintViolation, "q >= 1 fails");
  Accumulator acc;
  for (double x : u.values()) acc.add(abs_pow(x, q));
  return acc.value() * u.grid().cell_volume();
}

double lp_norm(const Field& u, double q) { return std::pow(lp_power(u, q), 1.0 / q); }

double symmetry_defect(const Field& u) {
  const SpectralGrid& g = u.grid();
  const int n = g.points_per_axis();
  const int dim = g.dim();
  const double scale = u.max_abs();
  if (scale == 0.0) return 0.0;
  const std::size_t sn = static_cast<std::size_t>(n);
  // Strides of the row-major layout; axis dim-1 is contiguous.
  std::array<std::size_t, 3> stride{1, 1, 1};
  for (int a = dim - 2; a >= 0; --a) stride[a] = stride[a + 1] * sn;
  std::array<int, 3> idx{0, 0, 0};
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (int a = 0; a < dim; ++a) {
      const int r = (n - idx[a]) % n;
      const std::size_t j = i + (static_cast<std::size_t>(r) - static_cast<std::size_t>(idx[a])) * stride[a];
      worst = std::max(worst, std::fabs(u[i] - u[j]));
    }
    for (int a = 0; a + 1 < dim; ++a) {
      const std::size_t j = i - idx[a] * stride[a] - idx[a + 1] * stride[a + 1] + idx[a + 1] * stride[a] +
                            idx[a] * stride[a + 1];
      worst = std::max(worst, std::fabs(u[i] - u[j]));
    }
    for (int a = dim - 1; a >= 0; --a) {
      if (++idx[a] < n) break;
      idx[a] = 0;
    }
  }
  return worst / scale;
}

Field symmetrize(const Field& u) {
  const SpectralGrid& g = u.grid();
  const int n = g.points_per_axis();
  const int dim = g.dim();
  std::array<int, 3> perm{0, 1, 2};
  std::vector<std::array<int, 3>> perms;
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.begin() + dim));
  const int flips = 1 << dim;
  const double weight = 1.0 / static_cast<double>(perms.size() * flips);

  Field out(u.grid_ptr());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const std::array<int, 3> idx = g.index(i);
    double acc = 0.0;
    for (const auto& pm : perms) {
      for (int f = 0; f < flips; ++f) {
        std::array<int, 3> j{0, 0, 0};
        for (int a = 0; a < dim; ++a) {
          const int k = idx[pm[a]];
          j[a] = (f >> a) & 1 ? (n - k) % n : k;
        }
        acc += u[g.flat(j)];
      }
    }
    out[i] = acc * weight;
  }
  return out;
}

}  // namespace fracgs
