#pragma once

// Closed-form constants of the contraction construction: sphere measure,
// an explicit Sobolev embedding constant, the radius minimization used in
// the split-frequency estimate, the admissible range of epsilon, the
// contraction constant sigma and the continuity bound in g.

namespace nfs {

/// Which sphere |S^d| denotes. The default is the unit sphere S^{d-1}
/// sitting in R^d, i.e. the angular factor of a d-dimensional radial
/// integral. The alternative reading (S^d in R^{d+1}) is kept so every
/// dependent constant can be recomputed under it.
enum class SphereConvention { SurfaceInRd, SphereInRdPlus1 };

/// 2 pi^{d/2} / Gamma(d/2).
double sphere_measure(int d, SphereConvention convention = SphereConvention::SurfaceInRd);

struct DimensionParams {
  int d;
  double sphere_measure;
  double embedding_constant;
};

struct PhiResult {
  double alpha;
  int d;
  double r_star;
  double phi_min;
};

/// phi(R) = alpha R^{d-4} + R^{-4}.
double phi(double alpha, int d, double r);

/// Exact minimizer of phi over R > 0. Throws BadDimension for d <= 4 and
/// NonPositiveInput for alpha <= 0.
PhiResult minimize_phi(double alpha, int d);

inline constexpr int kDefaultQuadPoints = 20000;

/// int_0^inf r^{d-1} (1 + r^4)^{-2} dr by composite Simpson on the map
/// r = t / (1 - t), with `quad_points` panels.
double radial_embedding_integral(int d, int quad_points = kDefaultQuadPoints);

/// Admissible constant with ||u||_inf <= c_e ||u||_{H^4}:
/// c_e = sqrt(2) (2 pi)^{-d/2} (|S^d| int_0^inf r^{d-1} (1 + r^4)^{-2} dr)^{1/2},
/// using (1 + |p|^4)^2 <= 2 (1 + |p|^8). Throws BadDimension outside [5, 7].
double embedding_constant(int d, int quad_points = kDefaultQuadPoints,
                          SphereConvention convention = SphereConvention::SurfaceInRd);

DimensionParams dimension_params(int d, SphereConvention convention = SphereConvention::SurfaceInRd);

/// Largest epsilon for which the auxiliary map is a strict contraction of
/// the ball B_rho into itself.
double epsilon_max(double rho, double big_m, double u0_h4, double k_l1, double k_l2, int d,
                   SphereConvention convention = SphereConvention::SurfaceInRd);

/// Lipschitz constant per unit epsilon: ||t_g v1 - t_g v2|| <= eps sigma ||v1 - v2||.
double sigma(double big_m, double u0_h4, double k_l1, double k_l2, int d,
             SphereConvention convention = SphereConvention::SurfaceInRd);

struct BoundsSnapshot {
  int d = 0;
  double rho = 0.0;
  double big_m = 0.0;
  double u0_h4 = 0.0;
  double k_l1 = 0.0;
  double k_l2 = 0.0;
  double sphere_measure = 0.0;
  double embedding_constant = 0.0;
  double epsilon_max = 0.0;
  double sigma = 0.0;
};

/// Validates the inputs and fills in the derived constants.
BoundsSnapshot make_bounds_snapshot(int d, double rho, double big_m, double u0_h4, double k_l1,
                                    double k_l2,
                                    SphereConvention convention = SphereConvention::SurfaceInRd);

/// Upper bound on ||u_1 - u_2||_{H^4} for fixed points built from two
/// nonlinearities at C2(I) distance g_diff_c2. Throws ContractionViolated
/// if epsilon * sigma >= 1.
double continuity_bound(double epsilon, const BoundsSnapshot& snapshot, double g_diff_c2);

}  // namespace nfs
