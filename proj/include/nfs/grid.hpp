#pragma once

// Periodic-box discretization of R^d and the spectral machinery built on it.
//
// The box is [-L, L)^d sampled at x_j = -L + j*dx, dx = 2L/n. Fourier
// coefficients follow the unitary continuum convention
//
//   coeff(k) = dx^d (2 pi)^(-d/2) sum_x f(x) exp(-i p_k . x),  p_k = (pi/L) k,
//
// with the inverse f(x) = (2 pi)^(-d/2) (pi/L)^d sum_k coeff(k) exp(i p_k . x),
// so closed-form spectral constants carry over without rescaling.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace nfs {

using Complex = std::complex<double>;

/// Memory budget for one grid allocation, in bytes. Read from the
/// NFS_MEMORY_BUDGET_MB environment variable (default 1024 MiB).
std::size_t memory_budget_bytes();

class GridSpec {
 public:
  /// Throws InvalidGrid unless d >= 1, n is a power of two >= 4, L > 0 and
  /// n^d complex samples fit in memory_budget_bytes().
  GridSpec(int dimension, int n, double half_width);

  int dimension() const noexcept { return dimension_; }
  int n() const noexcept { return n_; }
  double half_width() const noexcept { return half_width_; }
  double spacing() const noexcept { return 2.0 * half_width_ / n_; }
  std::size_t size() const noexcept { return size_; }

  /// dx^d, the rectangle-rule weight of one sample.
  double cell_volume() const noexcept;
  /// pi / L, spacing of the dual lattice.
  double dual_spacing() const noexcept;
  /// (pi/L)^d, the weight of one lattice frequency.
  double dual_cell_volume() const noexcept;

  double coordinate(int index) const noexcept { return -half_width_ + index * spacing(); }

  /// Maps a storage index along one axis (FFT order) to k in [-n/2, n/2).
  int wavenumber(int index) const noexcept { return index < n_ / 2 ? index : index - n_; }
  /// Inverse of wavenumber(); accepts any integer k and wraps it periodically.
  int storage_index(int k) const noexcept { return ((k % n_) + n_) % n_; }

  /// Row-major multi-index of a flat offset.
  void unravel(std::size_t flat, std::span<int> index) const;
  std::size_t ravel(std::span<const int> index) const;

  /// |p_k|^2 for the spectral sample stored at `flat`.
  double frequency_norm_squared(std::size_t flat) const;
  /// Flat offset of -k given the flat offset of k.
  std::size_t negated(std::size_t flat) const;

  friend bool operator==(const GridSpec& a, const GridSpec& b) noexcept {
    return a.dimension_ == b.dimension_ && a.n_ == b.n_ && a.half_width_ == b.half_width_;
  }

 private:
  int dimension_;
  int n_;
  double half_width_;
  std::size_t size_;
};

enum class FieldRole { Generic, Source, Kernel, Iterate, Solution, Composition };

class RealField {
 public:
  /// Zero field.
  explicit RealField(GridSpec spec, FieldRole role = FieldRole::Generic);
  /// Throws InvalidField on a length mismatch or non-finite sample.
  RealField(GridSpec spec, std::vector<double> values, FieldRole role = FieldRole::Generic);

  /// Samples fn at every grid point. fn receives the point's coordinates.
  static RealField sample(const GridSpec& spec,
                          const std::function<double(std::span<const double>)>& fn,
                          FieldRole role = FieldRole::Generic);

  const GridSpec& spec() const noexcept { return spec_; }
  FieldRole role() const noexcept { return role_; }
  void set_role(FieldRole role) noexcept { role_ = role; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }

  RealField& operator+=(const RealField& other);
  RealField& operator-=(const RealField& other);
  RealField& operator*=(double scale) noexcept;

 private:
  GridSpec spec_;
  std::vector<double> values_;
  FieldRole role_;
};

RealField operator+(RealField a, const RealField& b);
RealField operator-(RealField a, const RealField& b);
RealField operator*(double scale, RealField a);

/// Fourier coefficients on the dual lattice, stored in FFT order per axis
/// (storage index i holds wavenumber GridSpec::wavenumber(i)).
class SpectralField {
 public:
  explicit SpectralField(GridSpec spec);
  SpectralField(GridSpec spec, std::vector<Complex> coeffs);

  const GridSpec& spec() const noexcept { return spec_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  std::span<Complex> coeffs() noexcept { return coeffs_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  Complex operator[](std::size_t i) const noexcept { return coeffs_[i]; }
  Complex& operator[](std::size_t i) noexcept { return coeffs_[i]; }

  /// Coefficient at lattice wavenumber k (wrapped periodically).
  Complex at(std::span<const int> k) const;

  /// max_k |coeff(k) - conj(coeff(-k))| / max_k |coeff(k)|; 0 for a zero spectrum.
  double hermitian_defect() const;

 private:
  GridSpec spec_;
  std::vector<Complex> coeffs_;
};

/// Tolerance on hermitian_defect() below which a spectrum is accepted as
/// the transform of a real field.
inline constexpr double kHermitianTolerance = 1e-12;

SpectralField forward_transform(const RealField& f);

/// Throws NonHermitianInput when F is not the spectrum of a real field.
RealField inverse_transform(const SpectralField& F, FieldRole role = FieldRole::Generic);

enum class Symbol {
  Laplacian,    // -|p|^2
  Bilaplacian,  // |p|^4
  LSymbol,      // |p|^2 + |p|^4, the operator -Laplacian + bi-Laplacian
  H4Weight,     // |p|^8
};

double symbol_value(Symbol symbol, double p_squared) noexcept;
SpectralField apply_symbol(SpectralField F, Symbol symbol);

/// Periodic quadrature dx^d sum_y k(x - y) g(y), evaluated spectrally.
/// Throws GridMismatch.
RealField convolve(const RealField& k, const RealField& g);

double norm_l1(const RealField& f);
double norm_l2(const RealField& f);
double norm_linf(const RealField& f);
/// (||u||_2^2 + ||Delta^2 u||_2^2)^(1/2), the bi-Laplacian part via Parseval.
double norm_h4(const RealField& f);
double norm_h4(const SpectralField& F);
/// L2 norm of the field whose spectrum is F (Parseval).
double norm_l2(const SpectralField& F);

/// Quadrature mean, (2L)^-d integral of f.
double mean(const RealField& f);

/// Fraction of the L1 mass sitting where max_i |x_i| >= (1 - shell) L.
double outer_shell_mass_fraction(const RealField& f, double shell = 0.1);

}  // namespace nfs
