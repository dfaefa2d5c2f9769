#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace fracgs {

class SpectralGrid;
using GridPtr = std::shared_ptr<const SpectralGrid>;

/// Uniform periodic grid on [-L, L)^N with the Fourier multiplier |xi|^{2s}.
///
/// Points sit at x_j = -L + j h, h = 2L/n, so the origin is the grid point
/// j = n/2 and the grid is mapped onto itself by every axis reflection
/// x -> -x and every axis permutation. Fields are stored in row-major order
/// (last axis fastest), the layout FFTW expects for r2c transforms; spectra
/// are the half spectra of those transforms.
///
/// A grid owns an FFT workspace guarded by a mutex, so a shared grid may be
/// used from several threads, but transforms on it are serialized.
class SpectralGrid {
 public:
  static GridPtr create(int dim, int n, double half_width, double s);

  ~SpectralGrid();
  SpectralGrid(const SpectralGrid&) = delete;
  SpectralGrid& operator=(const SpectralGrid&) = delete;

  int dim() const { return dim_; }
  int points_per_axis() const { return n_; }
  double half_width() const { return half_width_; }
  double spacing() const { return spacing_; }
  double s() const { return s_; }
  std::size_t size() const { return size_; }
  std::size_t spectral_size() const { return spectral_size_; }
  double cell_volume() const { return cell_volume_; }

  std::span<const double> coordinates() const { return coords_; }
  std::span<const double> wavenumbers() const { return wavenumbers_; }
  /// |k|^{2s} on the half spectrum.
  std::span<const double> multiplier() const { return multiplier_; }
  /// |k|^{s} on the half spectrum.
  std::span<const double> half_multiplier() const { return half_multiplier_; }
  /// Multiplicity of each half-spectrum entry in the full spectrum (1 or 2).
  std::span<const double> parseval_weights() const { return weights_; }
  /// |k|^2 on the half spectrum.
  std::span<const double> wavenumber_sq() const { return k_sq_; }

  /// |k|^{2 order} on the half spectrum; order = s and s/2 are cached.
  std::vector<double> multiplier_for(double order) const;

  std::array<int, 3> index(std::size_t flat) const;
  std::size_t flat(const std::array<int, 3>& idx) const;
  double radius_sq(std::size_t flat) const;

  bool same_geometry(const SpectralGrid& other) const;

  /// Unnormalized forward DFT of a real field into the half spectrum.
  void forward(std::span<const double> in, std::span<std::complex<double>> out) const;
  /// Inverse of forward (includes the 1/n^N factor).
  void backward(std::span<const std::complex<double>> in, std::span<double> out) const;

 private:
  SpectralGrid(int dim, int n, double half_width, double s);

  struct Fft;

  int dim_;
  int n_;
  double half_width_;
  double spacing_;
  double s_;
  std::size_t size_;
  std::size_t spectral_size_;
  double cell_volume_;
  std::vector<double> coords_;
  std::vector<double> wavenumbers_;
  std::vector<double> k_sq_;
  std::vector<double> multiplier_;
  std::vector<double> half_multiplier_;
  std::vector<double> weights_;
  std::unique_ptr<Fft> fft_;
};

/// Real grid function. Copies are deep; the grid itself is shared.
class Field {
 public:
  explicit Field(GridPtr grid);
  Field(GridPtr grid, std::vector<double> values);

  /// Samples f(|x|) at every grid point.
  static Field from_radial(GridPtr grid, const std::function<double(double)>& f);

  const SpectralGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double c);
  /// this += c * other
  Field& axpy(double c, const Field& other);

  Field abs() const;
  double max_abs() const;
  double min() const;
  double max() const;
  bool all_finite() const;
  bool is_zero() const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double c, Field a);

struct FieldPair {
  Field u;
  Field v;
};

/// Throws GridMismatch unless both fields live on grids of identical geometry.
void require_same_grid(const Field& a, const Field& b);

}  // namespace fracgs
