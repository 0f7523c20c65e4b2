#include "nfs/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <numbers>
#include <string>

#include "nfs/error.hpp"

namespace nfs {

namespace {

constexpr double kImaginaryResidueTolerance = 1e-10;

// FFTW's planner is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Unnormalized in-place n-dimensional DFT, sign -1 (forward) or +1.
// Buffers are fftw-allocated so alignment, and with it the chosen codelets,
// is identical on every call: results are bit-reproducible.
void execute_dft(const GridSpec& spec, std::vector<Complex>& data, int sign) {
  const std::size_t total = spec.size();
  fftw_complex* buffer = fftw_alloc_complex(total);
  if (buffer == nullptr) throw Error(ErrorKind::InvalidGrid, "FFT buffer allocation failed");
  std::memcpy(buffer, data.data(), total * sizeof(fftw_complex));
  std::vector<int> dims(static_cast<std::size_t>(spec.dimension()), spec.n());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft(spec.dimension(), dims.data(), buffer, buffer, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  std::memcpy(static_cast<void*>(data.data()), buffer, total * sizeof(fftw_complex));
  fftw_free(buffer);
}

// Parity of the sum of per-axis storage indices; equals the parity of the
// sum of wavenumbers because n is even.
std::vector<signed char> checkerboard(const GridSpec& spec) {
  std::vector<signed char> sign(spec.size());
  std::vector<int> index(static_cast<std::size_t>(spec.dimension()), 0);
  for (std::size_t flat = 0; flat < spec.size(); ++flat) {
    int total = 0;
    for (int i : index) total += i;
    sign[flat] = (total % 2 == 0) ? 1 : -1;
    for (int axis = spec.dimension() - 1; axis >= 0; --axis) {
      if (++index[static_cast<std::size_t>(axis)] < spec.n()) break;
      index[static_cast<std::size_t>(axis)] = 0;
    }
  }
  return sign;
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) throw Error(ErrorKind::GridMismatch, what);
}

}  // namespace

std::size_t memory_budget_bytes() {
  constexpr std::size_t kDefaultMb = 1024;
  std::size_t mb = kDefaultMb;
  if (const char* env = std::getenv("NFS_MEMORY_BUDGET_MB"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long parsed = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && parsed > 0) mb = static_cast<std::size_t>(parsed);
  }
  return mb * 1024 * 1024;
}

GridSpec::GridSpec(int dimension, int n, double half_width)
    : dimension_(dimension), n_(n), half_width_(half_width), size_(1) {
  if (dimension < 1) throw Error(ErrorKind::InvalidGrid, "dimension must be >= 1");
  if (n < 4 || (n & (n - 1)) != 0)
    throw Error(ErrorKind::InvalidGrid, "n must be a power of two >= 4, got " + std::to_string(n));
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw Error(ErrorKind::InvalidGrid, "half_width must be positive and finite");
  const std::size_t budget = memory_budget_bytes() / sizeof(Complex);
  for (int i = 0; i < dimension; ++i) {
    if (size_ > budget / static_cast<std::size_t>(n))
      throw Error(ErrorKind::InvalidGrid, "n^d exceeds the memory budget (NFS_MEMORY_BUDGET_MB)");
    size_ *= static_cast<std::size_t>(n);
  }
}

double GridSpec::cell_volume() const noexcept { return std::pow(spacing(), dimension_); }

double GridSpec::dual_spacing() const noexcept { return std::numbers::pi / half_width_; }

double GridSpec::dual_cell_volume() const noexcept { return std::pow(dual_spacing(), dimension_); }

void GridSpec::unravel(std::size_t flat, std::span<int> index) const {
  for (int axis = dimension_ - 1; axis >= 0; --axis) {
    index[static_cast<std::size_t>(axis)] = static_cast<int>(flat % static_cast<std::size_t>(n_));
    flat /= static_cast<std::size_t>(n_);
  }
}

std::size_t GridSpec::ravel(std::span<const int> index) const {
  std::size_t flat = 0;
  for (int axis = 0; axis < dimension_; ++axis)
    flat = flat * static_cast<std::size_t>(n_) + static_cast<std::size_t>(index[static_cast<std::size_t>(axis)]);
  return flat;
}

double GridSpec::frequency_norm_squared(std::size_t flat) const {
  const double dp = dual_spacing();
  double p2 = 0.0;
  for (int axis = 0; axis < dimension_; ++axis) {
    const double p = dp * wavenumber(static_cast<int>(flat % static_cast<std::size_t>(n_)));
    p2 += p * p;
    flat /= static_cast<std::size_t>(n_);
  }
  return p2;
}

std::size_t GridSpec::negated(std::size_t flat) const {
  std::size_t result = 0;
  std::size_t stride = 1;
  for (int axis = 0; axis < dimension_; ++axis) {
    const int i = static_cast<int>(flat % static_cast<std::size_t>(n_));
    result += static_cast<std::size_t>(storage_index(-i)) * stride;
    stride *= static_cast<std::size_t>(n_);
    flat /= static_cast<std::size_t>(n_);
  }
  return result;
}

RealField::RealField(GridSpec spec, FieldRole role)
    : spec_(spec), values_(spec.size(), 0.0), role_(role) {}

RealField::RealField(GridSpec spec, std::vector<double> values, FieldRole role)
    : spec_(spec), values_(std::move(values)), role_(role) {
  if (values_.size() != spec_.size())
    throw Error(ErrorKind::InvalidField, "expected " + std::to_string(spec_.size()) + " samples, got " +
                                             std::to_string(values_.size()));
  for (double v : values_)
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidField, "non-finite sample");
}

RealField RealField::sample(const GridSpec& spec,
                            const std::function<double(std::span<const double>)>& fn, FieldRole role) {
  const auto d = static_cast<std::size_t>(spec.dimension());
  std::vector<double> values(spec.size());
  std::vector<int> index(d, 0);
  std::vector<double> x(d);
  for (std::size_t flat = 0; flat < spec.size(); ++flat) {
    for (std::size_t a = 0; a < d; ++a) x[a] = spec.coordinate(index[a]);
    values[flat] = fn(x);
    for (int axis = static_cast<int>(d) - 1; axis >= 0; --axis) {
      if (++index[static_cast<std::size_t>(axis)] < spec.n()) break;
      index[static_cast<std::size_t>(axis)] = 0;
    }
  }
  return RealField(spec, std::move(values), role);
}

RealField& RealField::operator+=(const RealField& other) {
  require_same_grid(spec_, other.spec_, "field addition");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

RealField& RealField::operator-=(const RealField& other) {
  require_same_grid(spec_, other.spec_, "field subtraction");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

RealField& RealField::operator*=(double scale) noexcept {
  for (double& v : values_) v *= scale;
  return *this;
}

RealField operator+(RealField a, const RealField& b) { return a += b; }
RealField operator-(RealField a, const RealField& b) { return a -= b; }
RealField operator*(double scale, RealField a) { return a *= scale; }

SpectralField::SpectralField(GridSpec spec) : spec_(spec), coeffs_(spec.size()) {}

SpectralField::SpectralField(GridSpec spec, std::vector<Complex> coeffs)
    : spec_(spec), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != spec_.size()) throw Error(ErrorKind::InvalidField, "spectral length mismatch");
}

Complex SpectralField::at(std::span<const int> k) const {
  std::vector<int> index(k.size());
  for (std::size_t a = 0; a < k.size(); ++a) index[a] = spec_.storage_index(k[a]);
  return coeffs_[spec_.ravel(index)];
}

double SpectralField::hermitian_defect() const {
  double scale = 0.0;
  for (const Complex& c : coeffs_) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return 0.0;
  double defect = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    defect = std::max(defect, std::abs(coeffs_[i] - std::conj(coeffs_[spec_.negated(i)])));
  return defect / scale;
}

SpectralField forward_transform(const RealField& f) {
  const GridSpec& spec = f.spec();
  std::vector<Complex> data(f.values().begin(), f.values().end());
  execute_dft(spec, data, FFTW_FORWARD);
  const double scale = spec.cell_volume() * std::pow(2.0 * std::numbers::pi, -0.5 * spec.dimension());
  const auto sign = checkerboard(spec);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= scale * sign[i];
  return SpectralField(spec, std::move(data));
}

RealField inverse_transform(const SpectralField& F, FieldRole role) {
  const GridSpec& spec = F.spec();
  if (const double defect = F.hermitian_defect(); defect > kHermitianTolerance)
    throw Error(ErrorKind::NonHermitianInput,
                "spectrum is not Hermitian (relative defect " + std::to_string(defect) + ")");
  const double scale = spec.dual_cell_volume() * std::pow(2.0 * std::numbers::pi, -0.5 * spec.dimension());
  const auto sign = checkerboard(spec);
  std::vector<Complex> data(F.coeffs().begin(), F.coeffs().end());
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= scale * sign[i];
  execute_dft(spec, data, FFTW_BACKWARD);

  std::vector<double> values(data.size());
  double max_real = 0.0;
  double max_imag = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    values[i] = data[i].real();
    max_real = std::max(max_real, std::abs(data[i].real()));
    max_imag = std::max(max_imag, std::abs(data[i].imag()));
  }
  if (max_imag > kImaginaryResidueTolerance * std::max(max_real, 1e-300))
    throw Error(ErrorKind::NonHermitianInput, "imaginary residue too large after inversion");
  return RealField(spec, std::move(values), role);
}

double symbol_value(Symbol symbol, double p2) noexcept {
  switch (symbol) {
    case Symbol::Laplacian: return -p2;
    case Symbol::Bilaplacian: return p2 * p2;
    case Symbol::LSymbol: return p2 + p2 * p2;
    case Symbol::H4Weight: return (p2 * p2) * (p2 * p2);
  }
  return 0.0;
}

SpectralField apply_symbol(SpectralField F, Symbol symbol) {
  const GridSpec& spec = F.spec();
  for (std::size_t i = 0; i < F.size(); ++i) F[i] *= symbol_value(symbol, spec.frequency_norm_squared(i));
  return F;
}

RealField convolve(const RealField& k, const RealField& g) {
  require_same_grid(k.spec(), g.spec(), "convolve: kernel and integrand grids differ");
  SpectralField K = forward_transform(k);
  const SpectralField G = forward_transform(g);
  const double factor = std::pow(2.0 * std::numbers::pi, 0.5 * k.spec().dimension());
  for (std::size_t i = 0; i < K.size(); ++i) K[i] *= factor * G[i];
  return inverse_transform(K);
}

double norm_l1(const RealField& f) {
  double sum = 0.0;
  for (double v : f.values()) sum += std::abs(v);
  return sum * f.spec().cell_volume();
}

double norm_l2(const RealField& f) {
  double sum = 0.0;
  for (double v : f.values()) sum += v * v;
  return std::sqrt(sum * f.spec().cell_volume());
}

double norm_linf(const RealField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double norm_l2(const SpectralField& F) {
  double sum = 0.0;
  for (const Complex& c : F.coeffs()) sum += std::norm(c);
  return std::sqrt(sum * F.spec().dual_cell_volume());
}

double norm_h4(const SpectralField& F) {
  const GridSpec& spec = F.spec();
  double l2 = 0.0;
  double bilap = 0.0;
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double power = std::norm(F[i]);
    l2 += power;
    bilap += symbol_value(Symbol::H4Weight, spec.frequency_norm_squared(i)) * power;
  }
  return std::sqrt((l2 + bilap) * spec.dual_cell_volume());
}

double norm_h4(const RealField& f) {
  // The L2 part uses the physical-space quadrature so the two-term
  // definition matches norm_l2 exactly; Parseval makes the two routes agree.
  const SpectralField F = forward_transform(f);
  const GridSpec& spec = f.spec();
  double bilap = 0.0;
  for (std::size_t i = 0; i < F.size(); ++i)
    bilap += symbol_value(Symbol::H4Weight, spec.frequency_norm_squared(i)) * std::norm(F[i]);
  const double l2 = norm_l2(f);
  return std::sqrt(l2 * l2 + bilap * spec.dual_cell_volume());
}

double mean(const RealField& f) {
  double sum = 0.0;
  for (double v : f.values()) sum += v;
  return sum / static_cast<double>(f.size());
}

double outer_shell_mass_fraction(const RealField& f, double shell) {
  const GridSpec& spec = f.spec();
  const double threshold = (1.0 - shell) * spec.half_width();
  const auto d = static_cast<std::size_t>(spec.dimension());
  std::vector<int> index(d);
  double total = 0.0;
  double outer = 0.0;
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    const double a = std::abs(f[flat]);
    total += a;
    spec.unravel(flat, index);
    bool in_shell = false;
    for (int i : index) in_shell = in_shell || std::abs(spec.coordinate(i)) >= threshold;
    if (in_shell) outer += a;
  }
  return total > 0.0 ? outer / total : 0.0;
}

}  // namespace nfs
