#include "nfs/bounds.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nfs/error.hpp"

namespace nfs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_high_dimension(int d) {
  if (d <= 4) throw Error(ErrorKind::BadDimension, "formula requires d >= 5, got d = " + std::to_string(d));
}

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw Error(ErrorKind::NonPositiveInput, std::string(name) + " must be positive and finite");
}

// Shared by the threshold and the continuity bound:
// ||K||_1^2 (u+1)^{8/d-2} |S|^{4/d} / (16^{4/d} (2 pi)^4) * d/(d-4) + ||K||_2^2 / 4.
double threshold_bracket(double u0_h4, double k_l1, double k_l2, int d, double sphere) {
  const double dd = d;
  const double low = k_l1 * k_l1 * std::pow(u0_h4 + 1.0, 8.0 / dd - 2.0) * dd /
                     (std::pow(kTwoPi, 4) * (dd - 4.0)) * std::pow(sphere / 16.0, 4.0 / dd);
  return low + k_l2 * k_l2 / 4.0;
}

}  // namespace

double sphere_measure(int d, SphereConvention convention) {
  if (d < 1) throw Error(ErrorKind::BadDimension, "sphere measure needs d >= 1");
  const double m = convention == SphereConvention::SurfaceInRd ? d : d + 1;
  return 2.0 * std::pow(std::numbers::pi, m / 2.0) / std::tgamma(m / 2.0);
}

double phi(double alpha, int d, double r) { return alpha * std::pow(r, d - 4) + 1.0 / std::pow(r, 4); }

PhiResult minimize_phi(double alpha, int d) {
  require_high_dimension(d);
  require_positive(alpha, "alpha");
  const double dd = d;
  PhiResult result{alpha, d, 0.0, 0.0};
  result.r_star = std::pow(4.0 / (alpha * (dd - 4.0)), 1.0 / dd);
  result.phi_min = std::pow(alpha / 4.0, 4.0 / dd) * dd / std::pow(dd - 4.0, (dd - 4.0) / dd);
  return result;
}

double radial_embedding_integral(int d, int quad_points) {
  if (d < 1 || d >= 8) throw Error(ErrorKind::BadDimension, "radial integral diverges unless 1 <= d < 8");
  if (quad_points < 2) throw Error(ErrorKind::InvalidArgument, "quad_points must be >= 2");
  const int panels = quad_points + (quad_points % 2);
  auto integrand = [d](double t) {
    if (t >= 1.0) return d == 7 ? 1.0 : 0.0;  // limit of r^{d-7} (1+r)^2/r^2 as r -> inf
    const double s = 1.0 - t;
    const double r = t / s;
    const double r4 = r * r * r * r;
    return std::pow(r, d - 1) / ((1.0 + r4) * (1.0 + r4)) / (s * s);
  };
  const double h = 1.0 / panels;
  double sum = integrand(0.0) + integrand(1.0);
  for (int i = 1; i < panels; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * integrand(i * h);
  return sum * h / 3.0;
}

double embedding_constant(int d, int quad_points, SphereConvention convention) {
  if (d < 5 || d > 7) throw Error(ErrorKind::BadDimension, "embedding constant is provided for 5 <= d <= 7");
  const double radial = radial_embedding_integral(d, quad_points);
  return std::sqrt(2.0) * std::pow(kTwoPi, -0.5 * d) * std::sqrt(sphere_measure(d, convention) * radial);
}

DimensionParams dimension_params(int d, SphereConvention convention) {
  return {d, sphere_measure(d, convention), embedding_constant(d, kDefaultQuadPoints, convention)};
}

double epsilon_max(double rho, double big_m, double u0_h4, double k_l1, double k_l2, int d,
                   SphereConvention convention) {
  require_high_dimension(d);
  require_positive(rho, "rho");
  require_positive(big_m, "M");
  require_positive(k_l1, "||K||_L1");
  require_positive(k_l2, "||K||_L2");
  if (!(u0_h4 >= 0.0) || !std::isfinite(u0_h4))
    throw Error(ErrorKind::NonPositiveInput, "||u0||_H4 must be nonnegative");
  if (rho > 1.0) throw Error(ErrorKind::NonPositiveInput, "rho must not exceed 1");
  const double u1 = u0_h4 + 1.0;
  const double bracket = threshold_bracket(u0_h4, k_l1, k_l2, d, sphere_measure(d, convention));
  return rho / (2.0 * big_m * u1 * u1 * std::sqrt(bracket));
}

double sigma(double big_m, double u0_h4, double k_l1, double k_l2, int d, SphereConvention convention) {
  require_high_dimension(d);
  require_positive(big_m, "M");
  require_positive(k_l1, "||K||_L1");
  require_positive(k_l2, "||K||_L2");
  if (!(u0_h4 >= 0.0) || !std::isfinite(u0_h4))
    throw Error(ErrorKind::NonPositiveInput, "||u0||_H4 must be nonnegative");
  const double dd = d;
  const double u1 = u0_h4 + 1.0;
  const double sphere = sphere_measure(d, convention);
  const double low = k_l1 * k_l1 * std::pow(sphere, 4.0 / dd) * std::pow(u1, 8.0 / dd - 2.0) /
                     (std::pow(kTwoPi, 4) * std::pow(4.0, 4.0 / dd)) * dd / (dd - 4.0);
  return big_m * u1 * std::sqrt(low + k_l2 * k_l2);
}

BoundsSnapshot make_bounds_snapshot(int d, double rho, double big_m, double u0_h4, double k_l1, double k_l2,
                                    SphereConvention convention) {
  BoundsSnapshot s;
  s.d = d;
  s.rho = rho;
  s.big_m = big_m;
  s.u0_h4 = u0_h4;
  s.k_l1 = k_l1;
  s.k_l2 = k_l2;
  s.epsilon_max = epsilon_max(rho, big_m, u0_h4, k_l1, k_l2, d, convention);
  s.sigma = sigma(big_m, u0_h4, k_l1, k_l2, d, convention);
  s.sphere_measure = sphere_measure(d, convention);
  s.embedding_constant = embedding_constant(d, kDefaultQuadPoints, convention);
  return s;
}

double continuity_bound(double epsilon, const BoundsSnapshot& snapshot, double g_diff_c2) {
  require_high_dimension(snapshot.d);
  if (!(epsilon >= 0.0)) throw Error(ErrorKind::NonPositiveInput, "epsilon must be nonnegative");
  if (!(g_diff_c2 >= 0.0)) throw Error(ErrorKind::NonPositiveInput, "C2 distance must be nonnegative");
  if (epsilon * snapshot.sigma >= 1.0)
    throw Error(ErrorKind::ContractionViolated, "epsilon * sigma = " + std::to_string(epsilon * snapshot.sigma));
  const double u1 = snapshot.u0_h4 + 1.0;
  const double bracket =
      threshold_bracket(snapshot.u0_h4, snapshot.k_l1, snapshot.k_l2, snapshot.d, snapshot.sphere_measure);
  return epsilon / (1.0 - epsilon * snapshot.sigma) * u1 * u1 * std::sqrt(bracket) * g_diff_c2;
}

}  // namespace nfs
