#include "nfs/nonlinearity.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nfs/error.hpp"

namespace nfs {

namespace {

constexpr double kConformanceTolerance = 1e-14;
constexpr double kIntervalSlack = 1e-9;

// Full coefficient vector c_0..c_J of a polynomial.
using Poly = std::vector<double>;

Poly derivative(const Poly& p) {
  if (p.size() <= 1) return {};
  Poly q(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) q[i - 1] = static_cast<double>(i) * p[i];
  return q;
}

double evaluate(const Poly& p, double z) {
  double acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Poly trimmed(Poly p) {
  while (!p.empty() && p.back() == 0.0) p.pop_back();
  return p;
}

// Real parts of all complex roots; spurious candidates only add points at
// which |p| is evaluated, so near-real pairs are never lost.
std::vector<double> root_candidates(const Poly& raw) {
  const Poly p = trimmed(raw);
  if (p.size() <= 1) return {};
  const auto degree = static_cast<Eigen::Index>(p.size() - 1);
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
  for (Eigen::Index i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < degree; ++i) companion(i, degree - 1) = -p[static_cast<std::size_t>(i)] / p.back();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  std::vector<double> roots;
  for (Eigen::Index i = 0; i < degree; ++i) roots.push_back(solver.eigenvalues()[i].real());
  return roots;
}

double sup_abs_polynomial(const Poly& p, const IntervalI& interval) {
  std::vector<double> candidates = {interval.lower, interval.upper, 0.0};
  for (double r : root_candidates(derivative(p)))
    if (r > interval.lower && r < interval.upper) candidates.push_back(r);
  double best = 0.0;
  for (double z : candidates)
    if (z >= interval.lower && z <= interval.upper) best = std::max(best, std::abs(evaluate(p, z)));
  return best;
}

Poly full_coefficients(const std::vector<double>& from_degree_two) {
  Poly p(2, 0.0);
  p.insert(p.end(), from_degree_two.begin(), from_degree_two.end());
  return p;
}

}  // namespace

IntervalI build_interval(double u0_h4, double c_e) {
  if (!(u0_h4 >= 0.0) || !(c_e > 0.0)) throw Error(ErrorKind::NonPositiveInput, "interval needs u0_h4 >= 0 and c_e > 0");
  const double half = c_e * u0_h4 + c_e;
  return {-half, half};
}

Nonlinearity Nonlinearity::polynomial(std::vector<double> coeffs) {
  for (double a : coeffs)
    if (!std::isfinite(a)) throw Error(ErrorKind::NonconformingG, "non-finite polynomial coefficient");
  Nonlinearity g;
  g.coeffs_ = std::move(coeffs);
  g.name_ = "polynomial";
  return g;
}

Nonlinearity Nonlinearity::callable(Fn g, Fn dg, Fn d2g, std::string name) {
  if (!g || !dg || !d2g) throw Error(ErrorKind::InvalidArgument, "callable nonlinearity needs g, g', g''");
  if (std::abs(g(0.0)) > kConformanceTolerance || std::abs(dg(0.0)) > kConformanceTolerance)
    throw Error(ErrorKind::NonconformingG, "g(0) and g'(0) must vanish");
  Nonlinearity result;
  result.callable_ = std::make_shared<const Callable>(Callable{std::move(g), std::move(dg), std::move(d2g)});
  result.name_ = std::move(name);
  return result;
}

double Nonlinearity::value(double z) const {
  if (callable_) return callable_->g(z);
  return evaluate(full_coefficients(coeffs_), z);
}

double Nonlinearity::first_derivative(double z) const {
  if (callable_) return callable_->dg(z);
  return evaluate(derivative(full_coefficients(coeffs_)), z);
}

double Nonlinearity::second_derivative(double z) const {
  if (callable_) return callable_->d2g(z);
  return evaluate(derivative(derivative(full_coefficients(coeffs_))), z);
}

Nonlinearity Nonlinearity::scaled(double lambda) const {
  if (is_polynomial()) {
    std::vector<double> c = coeffs_;
    for (double& a : c) a *= lambda;
    return polynomial(std::move(c));
  }
  auto self = callable_;
  return callable([self, lambda](double z) { return lambda * self->g(z); },
                  [self, lambda](double z) { return lambda * self->dg(z); },
                  [self, lambda](double z) { return lambda * self->d2g(z); }, name_ + " (scaled)");
}

Nonlinearity operator-(const Nonlinearity& a, const Nonlinearity& b) {
  if (a.is_polynomial() && b.is_polynomial()) {
    std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] -= b.coeffs_[i];
    return Nonlinearity::polynomial(std::move(c));
  }
  return Nonlinearity::callable([a, b](double z) { return a.value(z) - b.value(z); },
                                [a, b](double z) { return a.first_derivative(z) - b.first_derivative(z); },
                                [a, b](double z) { return a.second_derivative(z) - b.second_derivative(z); },
                                a.name() + " - " + b.name());
}

std::string describe(const Nonlinearity& g) {
  if (!g.is_polynomial()) return g.name();
  std::ostringstream out;
  out.precision(17);
  bool first = true;
  for (std::size_t i = 0; i < g.coefficients().size(); ++i) {
    if (!first) out << " + ";
    out << g.coefficients()[i] << "*z^" << (i + 2);
    first = false;
  }
  if (first) out << "0";
  return out.str();
}

C2Report c2_norm(const Nonlinearity& g, const IntervalI& interval, int samples) {
  if (samples < kMinC2Samples || samples % 2 == 0)
    throw Error(ErrorKind::InvalidArgument, "samples must be odd and >= 1001");
  if (!(interval.upper > interval.lower)) throw Error(ErrorKind::InvalidArgument, "empty interval");
  C2Report report;
  if (g.is_polynomial()) {
    const Poly p = full_coefficients(g.coefficients());
    const Poly p1 = derivative(p);
    report.sup_g = sup_abs_polynomial(p, interval);
    report.sup_g1 = sup_abs_polynomial(p1, interval);
    report.sup_g2 = sup_abs_polynomial(derivative(p1), interval);
  } else {
    if (std::abs(g.value(0.0)) > kConformanceTolerance || std::abs(g.first_derivative(0.0)) > kConformanceTolerance)
      throw Error(ErrorKind::NonconformingG, "g(0) and g'(0) must vanish");
    long count = std::max<long>(samples, static_cast<long>(std::ceil(1e4 * interval.length())));
    if (count % 2 == 0) ++count;
    const double h = interval.length() / static_cast<double>(count - 1);
    auto visit = [&](double z) {
      report.sup_g = std::max(report.sup_g, std::abs(g.value(z)));
      report.sup_g1 = std::max(report.sup_g1, std::abs(g.first_derivative(z)));
      report.sup_g2 = std::max(report.sup_g2, std::abs(g.second_derivative(z)));
    };
    for (long i = 0; i < count - 1; ++i) visit(interval.lower + static_cast<double>(i) * h);
    visit(interval.upper);
    if (interval.lower < 0.0 && interval.upper > 0.0) visit(0.0);
  }
  report.c2_norm = report.sup_g + report.sup_g1 + report.sup_g2;
  report.big_m = report.c2_norm;
  return report;
}

bool check_dm_membership(const C2Report& report, double big_m) { return report.c2_norm <= big_m; }

RealField compose(const Nonlinearity& g, const RealField& u0, const RealField& v, const IntervalI& interval) {
  if (!(u0.spec() == v.spec())) throw Error(ErrorKind::GridMismatch, "compose: u0 and v grids differ");
  std::vector<double> out(u0.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double z = u0[i] + v[i];
    if (z < interval.lower - kIntervalSlack || z > interval.upper + kIntervalSlack) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "u0 + v = " << z << " leaves I = [" << interval.lower << ", " << interval.upper << "]";
      throw Error(ErrorKind::IntervalExceeded, msg.str());
    }
    out[i] = g.value(z);
  }
  return RealField(u0.spec(), std::move(out), FieldRole::Composition);
}

double c2_distance(const Nonlinearity& g1, const Nonlinearity& g2, const IntervalI& interval, int samples) {
  return c2_norm(g1 - g2, interval, samples).c2_norm;
}

}  // namespace nfs
