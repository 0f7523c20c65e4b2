#pragma once

#include <vector>

#include "nfs/config.hpp"
#include "nfs/grid.hpp"

namespace nfs {

/// Fraction of L1 mass allowed in the outer 10% shell of the box.
inline constexpr double kMassLeakageLimit = 1e-6;

GridSpec grid_from(const RunConfig& cfg);

/// A exp(-|x - c|^2 / (2 s^2)).
RealField gaussian(const GridSpec& grid, std::span<const double> center, double width, double amplitude,
                   FieldRole role = FieldRole::Generic);

/// A [G(x - c1; w1) - (m1 / m2) G(x - c2; w2)], with m_i the discrete masses
/// of the two Gaussians, so the quadrature mean vanishes up to rounding.
RealField gaussian_difference(const GridSpec& grid, std::span<const double> c1, double w1,
                              std::span<const double> c2, double w2, double amplitude,
                              FieldRole role = FieldRole::Generic);

/// Gaussian kernel, or an NFS1 file. Analytic kernels throw MassLeakage when
/// the outer-shell mass fraction reaches kMassLeakageLimit; file kernels only
/// warn on stderr. Throws TrivialField when the field vanishes.
RealField build_kernel(const RunConfig& cfg);
RealField build_source(const RunConfig& cfg);

/// Perturbations (1/k) h, k = 1..count, for a fixed mean-free bump h scaled
/// by sequences.amplitude.
std::vector<RealField> build_sequence_perturbations(const RunConfig& cfg);

}  // namespace nfs
