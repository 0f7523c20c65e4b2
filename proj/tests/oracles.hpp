#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "nfs/grid.hpp"

namespace oracle {

using Complex = std::complex<double>;

inline std::vector<int> multi_index(const nfs::GridSpec& g, std::size_t flat) {
  std::vector<int> idx(g.dimension());
  for (int a = g.dimension() - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % g.n());
    flat /= g.n();
  }
  return idx;
}

// coeff(k) = dx^d (2 pi)^{-d/2} sum_x f(x) exp(-i p_k . x), O(N^2).
inline std::vector<Complex> dft(const nfs::RealField& f) {
  const auto& g = f.spec();
  const int d = g.dimension();
  const double p = std::numbers::pi / g.half_width();
  const double w = std::pow(g.spacing(), d) * std::pow(2.0 * std::numbers::pi, -0.5 * d);
  std::vector<Complex> out(g.size());
  for (std::size_t kf = 0; kf < g.size(); ++kf) {
    auto ki = multi_index(g, kf);
    Complex acc = 0.0;
    for (std::size_t xf = 0; xf < g.size(); ++xf) {
      auto xi = multi_index(g, xf);
      double phase = 0.0;
      for (int a = 0; a < d; ++a) phase += p * g.wavenumber(ki[a]) * g.coordinate(xi[a]);
      acc += f[xf] * std::polar(1.0, -phase);
    }
    out[kf] = w * acc;
  }
  return out;
}

// f(x) = (2 pi)^{-d/2} (pi/L)^d sum_k coeff(k) exp(i p_k . x), real part.
inline std::vector<double> idft(const nfs::GridSpec& g, const std::vector<Complex>& c) {
  const int d = g.dimension();
  const double p = std::numbers::pi / g.half_width();
  const double w = std::pow(p, d) * std::pow(2.0 * std::numbers::pi, -0.5 * d);
  std::vector<double> out(g.size());
  for (std::size_t xf = 0; xf < g.size(); ++xf) {
    auto xi = multi_index(g, xf);
    Complex acc = 0.0;
    for (std::size_t kf = 0; kf < g.size(); ++kf) {
      auto ki = multi_index(g, kf);
      double phase = 0.0;
      for (int a = 0; a < d; ++a) phase += p * g.wavenumber(ki[a]) * g.coordinate(xi[a]);
      acc += c[kf] * std::polar(1.0, phase);
    }
    out[xf] = (w * acc).real();
  }
  return out;
}

// dx^d sum_y k(x - y) g(y) with periodic wrap on indices.
inline std::vector<double> direct_convolution(const nfs::RealField& k, const nfs::RealField& f) {
  const auto& g = k.spec();
  const int d = g.dimension();
  const int n = g.n();
  const double w = std::pow(g.spacing(), d);
  std::vector<double> out(g.size());
  std::vector<int> diff(d);
  for (std::size_t xf = 0; xf < g.size(); ++xf) {
    auto xi = multi_index(g, xf);
    double acc = 0.0;
    for (std::size_t yf = 0; yf < g.size(); ++yf) {
      auto yi = multi_index(g, yf);
      // x - y in coordinates is (xi - yi) dx; the sample index of that offset
      // is (xi - yi) + n/2 since index j sits at -L + j dx.
      std::size_t flat = 0;
      for (int a = 0; a < d; ++a) flat = flat * n + (((xi[a] - yi[a] + n / 2) % n + n) % n);
      acc += k[flat] * f[yf];
    }
    out[xf] = w * acc;
  }
  return out;
}

inline nfs::RealField random_field(const nfs::GridSpec& g, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  std::vector<double> v(g.size());
  for (auto& x : v) x = normal(rng);
  return nfs::RealField(g, std::move(v));
}

inline double rel_l2(std::span<const double> a, std::span<const double> b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / (den > 0.0 ? den : 1.0));
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace oracle
