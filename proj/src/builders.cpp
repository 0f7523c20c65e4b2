#include "nfs/builders.hpp"

#include <cmath>
#include <iostream>

#include "nfs/error.hpp"
#include "nfs/field_io.hpp"

namespace nfs {

namespace {

std::vector<double> axis_point(int d, int axis, double offset) {
  std::vector<double> p(static_cast<std::size_t>(d), 0.0);
  p[static_cast<std::size_t>(axis)] = offset;
  return p;
}

double sum(const RealField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s;
}

void gate(const RealField& field, const char* what, bool strict) {
  if (norm_l2(field) == 0.0) throw Error(ErrorKind::TrivialField, std::string(what) + " vanishes identically");
  const double leakage = outer_shell_mass_fraction(field, 0.1);
  if (leakage >= kMassLeakageLimit) {
    const std::string msg = std::string(what) + ": outer-shell mass fraction " + std::to_string(leakage) +
                            " >= 1e-6; enlarge grid.half_width";
    if (strict) throw Error(ErrorKind::MassLeakage, msg);
    std::cerr << "warning: " << msg << '\n';
  }
}

RealField load_on_grid(const std::string& path, const GridSpec& grid, FieldRole role) {
  RealField f = read_nfs1(path, role);
  if (!(f.spec() == grid)) throw Error(ErrorKind::GridMismatch, path + " was written on a different grid");
  return f;
}

}  // namespace

GridSpec grid_from(const RunConfig& cfg) { return GridSpec(cfg.dimension, cfg.n, cfg.half_width); }

RealField gaussian(const GridSpec& grid, std::span<const double> center, double width, double amplitude,
                   FieldRole role) {
  const std::vector<double> c(center.begin(), center.end());
  const double inv = 1.0 / (2.0 * width * width);
  return RealField::sample(
      grid,
      [&](std::span<const double> x) {
        double r2 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) r2 += (x[i] - c[i]) * (x[i] - c[i]);
        return amplitude * std::exp(-r2 * inv);
      },
      role);
}

RealField gaussian_difference(const GridSpec& grid, std::span<const double> c1, double w1,
                              std::span<const double> c2, double w2, double amplitude, FieldRole role) {
  RealField first = gaussian(grid, c1, w1, amplitude, role);
  const RealField second = gaussian(grid, c2, w2, amplitude, role);
  const double m1 = sum(first);
  const double m2 = sum(second);
  if (m2 == 0.0) return first;
  first -= (m1 / m2) * second;
  return first;
}

RealField build_kernel(const RunConfig& cfg) {
  const GridSpec grid = grid_from(cfg);
  if (cfg.kernel.type == "file") {
    RealField k = load_on_grid(cfg.kernel.path, grid, FieldRole::Kernel);
    gate(k, "kernel", false);
    return k;
  }
  const std::vector<double> origin(static_cast<std::size_t>(cfg.dimension), 0.0);
  RealField k = gaussian(grid, origin, cfg.kernel.sigma, cfg.kernel.amplitude, FieldRole::Kernel);
  gate(k, "kernel", true);
  return k;
}

RealField build_source(const RunConfig& cfg) {
  const GridSpec grid = grid_from(cfg);
  const auto& s = cfg.source;
  if (s.type == "file") {
    RealField f = load_on_grid(s.path, grid, FieldRole::Source);
    gate(f, "source", false);
    return f;
  }
  std::vector<std::vector<double>> centers = s.centers;
  if (centers.empty()) centers = {axis_point(cfg.dimension, 0, 2.0), axis_point(cfg.dimension, 0, -2.0)};
  RealField f = s.type == "gaussian"
                    ? gaussian(grid, centers[0], s.widths[0], s.amplitude, FieldRole::Source)
                    : gaussian_difference(grid, centers[0], s.widths[0], centers[1], s.widths[1], s.amplitude,
                                          FieldRole::Source);
  gate(f, "source", true);
  return f;
}

std::vector<RealField> build_sequence_perturbations(const RunConfig& cfg) {
  const GridSpec grid = grid_from(cfg);
  const int axis = cfg.dimension > 1 ? 1 : 0;
  const auto c1 = axis_point(cfg.dimension, axis, 1.5);
  const auto c2 = axis_point(cfg.dimension, axis, -1.5);
  const RealField h = gaussian_difference(grid, c1, 1.0, c2, 1.0, cfg.sequence_amplitude);
  std::vector<RealField> out;
  for (int k = 1; k <= cfg.sequence_count; ++k) out.push_back((1.0 / k) * h);
  return out;
}

}  // namespace nfs
