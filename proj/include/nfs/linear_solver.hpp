#pragma once

#include <string>
#include <vector>

#include "nfs/grid.hpp"

namespace nfs {

/// What to do with the p = 0 coefficient of the source, where the symbol
/// |p|^2 + |p|^4 vanishes on the discrete torus.
enum class MeanPolicy { Reject, Project };

struct LinearSolveOptions {
  /// Allowed |f^(0)| relative to ||f||_2 under MeanPolicy::Reject.
  double zero_mode_tol = 1e-10;
  MeanPolicy mean_policy = MeanPolicy::Reject;
};

struct LinearSolution {
  RealField u;
  /// Quadrature mean removed from the source before inversion (0 under Reject).
  double removed_mean = 0.0;
};

/// Solves [-Delta + Delta^2] u = f spectrally: u^(p) = f^(p) / (|p|^2 + |p|^4)
/// for p != 0 and u^(0) = 0. Throws TrivialSource for f == 0 and
/// NonDecayingSource when the zero mode is too large under Reject.
LinearSolution solve_linear_detailed(const RealField& f, const LinearSolveOptions& opts = {});
RealField solve_linear(const RealField& f, const LinearSolveOptions& opts = {});

/// Divides by the symbol of -Delta + Delta^2 and zeroes the p = 0 mode.
SpectralField invert_l_symbol(SpectralField F);

/// Applies a differential operator given by its symbol, in physical space.
RealField apply_operator(const RealField& u, Symbol symbol);

/// ||u||_{H^4} with the two-term norm used throughout.
double verify_h4(const RealField& u);

struct SequenceRow {
  int index = 0;
  double df_l1 = 0.0;
  double df_l2 = 0.0;
  double du_h4 = 0.0;
  double majorant = 0.0;
  bool ok = false;
};

struct SequenceReport {
  std::vector<SequenceRow> rows;
  bool verdict = true;
};

inline constexpr double kSequenceSlack = 0.01;

/// Majorant on ||u_n - u||_{H^4} from the split at |p| = 1:
/// sqrt(||df||_2^2 + (||df||_2 / 2 + (2 pi)^{-d/2} sqrt(|S^d| / (d - 4)) ||df||_1)^2).
double sequence_majorant(double df_l1, double df_l2, int d);

/// Solves for f and each f + perturbation, compares ||u_n - u||_{H^4}
/// against the majorant. Requires d >= 5.
SequenceReport sequence_experiment(const RealField& f, const std::vector<RealField>& perturbations,
                                   const LinearSolveOptions& opts = {});

/// Columns: n, df_l1, df_l2, du_h4, majorant, ok.
std::string to_csv(const SequenceReport& report);

}  // namespace nfs
