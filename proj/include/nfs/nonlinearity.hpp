#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nfs/grid.hpp"

namespace nfs {

/// Symmetric interval [-c_e (||u0||_{H^4} + 1), c_e (||u0||_{H^4} + 1)] that
/// contains every pointwise value of u0 + v for v in the unit ball.
struct IntervalI {
  double lower = 0.0;
  double upper = 0.0;

  double length() const noexcept { return upper - lower; }
};

IntervalI build_interval(double u0_h4, double c_e);

/// A nonlinearity g with g(0) = g'(0) = 0, evaluable with two derivatives.
class Nonlinearity {
 public:
  using Fn = std::function<double(double)>;

  /// g(z) = sum_{j>=2} a_j z^j with coeffs = {a_2, a_3, ...}.
  static Nonlinearity polynomial(std::vector<double> coeffs);

  /// Arbitrary g with user-supplied derivatives. Throws NonconformingG if
  /// |g(0)| or |g'(0)| exceeds 1e-14.
  static Nonlinearity callable(Fn g, Fn dg, Fn d2g, std::string name = "callable");

  bool is_polynomial() const noexcept { return callable_ == nullptr; }
  /// {a_2, a_3, ...}; empty for callables.
  const std::vector<double>& coefficients() const noexcept { return coeffs_; }
  const std::string& name() const noexcept { return name_; }

  double value(double z) const;
  double first_derivative(double z) const;
  double second_derivative(double z) const;

  Nonlinearity scaled(double lambda) const;
  friend Nonlinearity operator-(const Nonlinearity& a, const Nonlinearity& b);

 private:
  struct Callable {
    Fn g, dg, d2g;
  };

  Nonlinearity() = default;

  std::vector<double> coeffs_;
  std::shared_ptr<const Callable> callable_;
  std::string name_;
};

std::string describe(const Nonlinearity& g);

struct C2Report {
  double sup_g = 0.0;
  double sup_g1 = 0.0;
  double sup_g2 = 0.0;
  double c2_norm = 0.0;
  double big_m = 0.0;
};

inline constexpr int kMinC2Samples = 1001;

/// sup|g| + sup|g'| + sup|g''| over I. Polynomials are handled exactly
/// (critical points from companion-matrix eigenvalues plus endpoints);
/// callables by dense sampling with at least max(samples, 1e4 |I|) points.
/// `samples` must be odd and >= 1001. big_m is set to c2_norm.
C2Report c2_norm(const Nonlinearity& g, const IntervalI& interval, int samples = kMinC2Samples);

/// True iff g lies in the closed C2(I) ball of radius big_m.
bool check_dm_membership(const C2Report& report, double big_m);

/// Pointwise G(x) = g(u0(x) + v(x)). Throws IntervalExceeded if some
/// u0 + v leaves the interval by more than 1e-9.
RealField compose(const Nonlinearity& g, const RealField& u0, const RealField& v, const IntervalI& interval);

/// ||g1 - g2||_{C2(I)}.
double c2_distance(const Nonlinearity& g1, const Nonlinearity& g2, const IntervalI& interval,
                   int samples = kMinC2Samples);

}  // namespace nfs
