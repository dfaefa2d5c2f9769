#include "fracgs/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>
#include <string>

#include "fracgs/error.hpp"

namespace fracgs {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

struct SpectralGrid::Fft {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  std::size_t real_size = 0;
  std::size_t spec_size = 0;
  std::mutex mtx;

  Fft(int dim, int n, std::size_t rs, std::size_t ss) : real_size(rs), spec_size(ss) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    real = fftw_alloc_real(rs);
    spec = fftw_alloc_complex(ss);
    std::array<int, 3> dims{n, n, n};
    fwd = fftw_plan_dft_r2c(dim, dims.data(), real, spec, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r(dim, dims.data(), spec, real, FFTW_ESTIMATE);
  }

  ~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(real);
    fftw_free(spec);
  }
};

GridPtr SpectralGrid::create(int dim, int n, double half_width, double s) {
  if (dim < 1 || dim > 3) throw Error(ErrorKind::ConstraintViolation, "N in {1,2,3} fails");
  if (!is_power_of_two(n) || n < 16)
    throw Error(ErrorKind::ConstraintViolation, "n must be a power of two >= 16");
  if (dim == 3 && n > 128) throw Error(ErrorKind::ConstraintViolation, "n <= 128 for N = 3");
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw Error(ErrorKind::ConstraintViolation, "L > 0 fails");
  if (!(s > 0.0 && s < 1.0)) throw Error(ErrorKind::ConstraintViolation, "0 < s < 1 fails");
  return GridPtr(new SpectralGrid(dim, n, half_width, s));
}

SpectralGrid::SpectralGrid(int dim, int n, double half_width, double s)
    : dim_(dim), n_(n), half_width_(half_width), spacing_(2.0 * half_width / n), s_(s) {
  size_ = 1;
  for (int a = 0; a < dim; ++a) size_ *= static_cast<std::size_t>(n);
  const std::size_t half = static_cast<std::size_t>(n / 2 + 1);
  spectral_size_ = size_ / static_cast<std::size_t>(n) * half;
  cell_volume_ = std::pow(spacing_, dim);

  coords_.resize(n);
  wavenumbers_.resize(n);
  const double dk = std::numbers::pi / half_width;
  for (int j = 0; j < n; ++j) {
    coords_[j] = -half_width + j * spacing_;
    const int m = j <= n / 2 - 1 ? j : j - n;
    wavenumbers_[j] = dk * m;
  }

  k_sq_.resize(spectral_size_);
  weights_.resize(spectral_size_);
  const std::size_t outer = spectral_size_ / half;
  for (std::size_t o = 0; o < outer; ++o) {
    double base = 0.0;
    std::size_t rest = o;
    for (int a = dim - 2; a >= 0; --a) {
      const std::size_t i = rest % static_cast<std::size_t>(n);
      rest /= static_cast<std::size_t>(n);
      base += wavenumbers_[i] * wavenumbers_[i];
    }
    for (std::size_t j = 0; j < half; ++j) {
      // Last-axis index j of the half spectrum; j = n/2 is the Nyquist plane.
      const double kj = dk * static_cast<double>(j);
      k_sq_[o * half + j] = base + kj * kj;
      weights_[o * half + j] = (j == 0 || j == half - 1) ? 1.0 : 2.0;
    }
  }
  multiplier_ = multiplier_for(s);
  half_multiplier_ = multiplier_for(0.5 * s);
  fft_ = std::make_unique<Fft>(dim, n, size_, spectral_size_);
}

SpectralGrid::~SpectralGrid() = default;

std::vector<double> SpectralGrid::multiplier_for(double order) const {
  std::vector<double> out(k_sq_.size());
  for (std::size_t i = 0; i < k_sq_.size(); ++i)
    out[i] = k_sq_[i] > 0.0 ? std::pow(k_sq_[i], order) : 0.0;
  return out;
}

std::array<int, 3> SpectralGrid::index(std::size_t flat) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % static_cast<std::size_t>(n_));
    flat /= static_cast<std::size_t>(n_);
  }
  return idx;
}

std::size_t SpectralGrid::flat(const std::array<int, 3>& idx) const {
  std::size_t f = 0;
  for (int a = 0; a < dim_; ++a) f = f * static_cast<std::size_t>(n_) + static_cast<std::size_t>(idx[a]);
  return f;
}

double SpectralGrid::radius_sq(std::size_t flat_index) const {
  const auto idx = index(flat_index);
  double r2 = 0.0;
  for (int a = 0; a < dim_; ++a) r2 += coords_[idx[a]] * coords_[idx[a]];
  return r2;
}

bool SpectralGrid::same_geometry(const SpectralGrid& other) const {
  return dim_ == other.dim_ && n_ == other.n_ && half_width_ == other.half_width_ && s_ == other.s_;
}

void SpectralGrid::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
  std::lock_guard<std::mutex> lock(fft_->mtx);
  std::memcpy(fft_->real, in.data(), size_ * sizeof(double));
  fftw_execute(fft_->fwd);
  std::memcpy(static_cast<void*>(out.data()), fft_->spec, spectral_size_ * sizeof(fftw_complex));
}

void SpectralGrid::backward(std::span<const std::complex<double>> in, std::span<double> out) const {
  std::lock_guard<std::mutex> lock(fft_->mtx);
  std::memcpy(fft_->spec, in.data(), spectral_size_ * sizeof(fftw_complex));
  fftw_execute(fft_->bwd);
  const double scale = 1.0 / static_cast<double>(size_);
  for (std::size_t i = 0; i < size_; ++i) out[i] = fft_->real[i] * scale;
}

// ---------------------------------------------------------------------------

Field::Field(GridPtr grid) : grid_(std::move(grid)), values_(grid_->size(), 0.0) {}

Field::Field(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->size())
    throw Error(ErrorKind::GridMismatch, "value array does not match grid size");
}

Field Field::from_radial(GridPtr grid, const std::function<double(double)>& f) {
  Field out(grid);
  for (std::size_t i = 0; i < out.size(); ++i) out.values_[i] = f(std::sqrt(grid->radius_sq(i)));
  return out;
}

void require_same_grid(const Field& a, const Field& b) {
  if (a.grid_ptr() == b.grid_ptr()) return;
  if (!a.grid().same_geometry(b.grid()))
    throw Error(ErrorKind::GridMismatch, "fields live on different grids");
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(double c) {
  for (double& x : values_) x *= c;
  return *this;
}

Field& Field::axpy(double c, const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += c * other.values_[i];
  return *this;
}

Field Field::abs() const {
  Field out(*this);
  for (double& x : out.values_) x = std::fabs(x);
  return out;
}

double Field::max_abs() const {
  double m = 0.0;
  for (double x : values_) m = std::max(m, std::fabs(x));
  return m;
}

double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }
double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

bool Field::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return x == 0.0; });
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double c, Field a) { return a *= c; }

}  // namespace fracgs
