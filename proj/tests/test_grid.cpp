#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nfs/error.hpp"
#include "nfs/grid.hpp"
#include "oracles.hpp"

using namespace nfs;
using std::numbers::pi;

TEST_CASE("grid spec validation") {
  CHECK_NOTHROW(GridSpec(5, 8, 1.0));
  CHECK_THROWS_AS(GridSpec(0, 8, 1.0), Error);
  CHECK_THROWS_AS(GridSpec(2, 6, 1.0), Error);
  CHECK_THROWS_AS(GridSpec(2, 2, 1.0), Error);
  CHECK_THROWS_AS(GridSpec(2, 8, 0.0), Error);
  CHECK_THROWS_AS(GridSpec(2, 8, -1.0), Error);
  try {
    GridSpec(12, 64, 1.0);
    FAIL("expected InvalidGrid");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidGrid);
  }
}

TEST_CASE("grid geometry") {
  GridSpec g(3, 8, 2.0);
  CHECK(g.size() == 512);
  CHECK(g.spacing() == doctest::Approx(0.5));
  CHECK(g.coordinate(0) == -2.0);
  CHECK(g.coordinate(4) == doctest::Approx(0.0));
  CHECK(g.wavenumber(3) == 3);
  CHECK(g.wavenumber(4) == -4);
  CHECK(g.storage_index(-1) == 7);
  CHECK(g.storage_index(9) == 1);
  for (std::size_t f : {std::size_t{0}, std::size_t{17}, std::size_t{511}}) {
    int idx[3];
    g.unravel(f, idx);
    CHECK(g.ravel(idx) == f);
    CHECK(g.negated(g.negated(f)) == f);
  }
}

TEST_CASE("real field rejects non-finite and mismatched data") {
  GridSpec g(2, 4, 1.0);
  CHECK_THROWS_AS(RealField(g, std::vector<double>(15, 0.0)), Error);
  std::vector<double> v(16, 0.0);
  v[3] = std::nan("");
  CHECK_THROWS_AS(RealField(g, v), Error);
  v[3] = INFINITY;
  CHECK_THROWS_AS(RealField(g, v), Error);
}

TEST_CASE("forward transform matches a direct DFT") {
  std::mt19937_64 rng(7);
  for (int d : {1, 2}) {
    GridSpec g(d, 8, 1.7);
    auto f = oracle::random_field(g, rng);
    auto F = forward_transform(f);
    auto ref = oracle::dft(f);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      err = std::max(err, std::abs(F[i] - ref[i]));
      scale = std::max(scale, std::abs(ref[i]));
    }
    CHECK(err <= 1e-12 * scale);
  }
}

TEST_CASE("inverse transform matches a direct inverse DFT and round-trips") {
  std::mt19937_64 rng(11);
  GridSpec g(2, 8, 3.0);
  auto f = oracle::random_field(g, rng);
  auto F = forward_transform(f);
  std::vector<Complex> c(F.coeffs().begin(), F.coeffs().end());
  auto ref = oracle::idft(g, c);
  auto back = inverse_transform(F);
  CHECK(oracle::max_abs_diff(back.values(), ref) < 1e-12);
  CHECK(oracle::max_abs_diff(back.values(), f.values()) < 1e-12);
}

TEST_CASE("single Fourier mode lands on one coefficient") {
  GridSpec g(2, 8, pi);
  auto f = RealField::sample(g, [](std::span<const double> x) { return std::cos(2.0 * x[0]); });
  auto F = forward_transform(f);
  const int kp[2] = {2, 0};
  const int km[2] = {-2, 0};
  // cos has coefficient (2 pi)^{d/2} / (2 (pi/L)^d) at +-k.
  const double expected = std::pow(2.0 * pi, 1.0) / 2.0;
  CHECK(std::abs(F.at(kp) - Complex(expected, 0.0)) < 1e-12);
  CHECK(std::abs(F.at(km) - Complex(expected, 0.0)) < 1e-12);
  double others = 0.0;
  for (std::size_t i = 0; i < F.size(); ++i) others += std::abs(F[i]);
  CHECK(others == doctest::Approx(2.0 * expected).epsilon(1e-12));
}

TEST_CASE("non-hermitian spectra are rejected") {
  GridSpec g(1, 8, 1.0);
  SpectralField F(g);
  F[1] = Complex(1.0, 0.0);
  try {
    (void)inverse_transform(F);
    FAIL("expected NonHermitianInput");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonHermitianInput);
  }
  F[7] = Complex(1.0, 0.0);
  CHECK_NOTHROW((void)inverse_transform(F));
}

TEST_CASE("Laplacian symbol is exact on trigonometric fields") {
  GridSpec g(2, 16, pi);
  auto f = RealField::sample(g, [](std::span<const double> x) { return std::sin(x[0]) * std::cos(2.0 * x[1]); });
  auto lap = inverse_transform(apply_symbol(forward_transform(f), Symbol::Laplacian));
  auto expect = -5.0 * f;
  CHECK(oracle::max_abs_diff(lap.values(), expect.values()) < 1e-12);
  auto bil = inverse_transform(apply_symbol(forward_transform(f), Symbol::Bilaplacian));
  CHECK(oracle::max_abs_diff(bil.values(), (25.0 * f).values()) < 1e-11);
}

TEST_CASE("spectral Laplacian agrees with a second-order stencil on a smooth field") {
  GridSpec g(2, 64, pi);
  auto fn = [](std::span<const double> x) { return std::exp(std::sin(x[0]) + std::cos(x[1])); };
  auto f = RealField::sample(g, fn);
  auto lap = inverse_transform(apply_symbol(forward_transform(f), Symbol::Laplacian));
  const int n = g.n();
  const double h = g.spacing();
  double err = 0.0, scale = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      auto at = [&](int a, int b) { return f[static_cast<std::size_t>(((a + n) % n) * n + (b + n) % n)]; };
      const double fd = (at(i + 1, j) + at(i - 1, j) + at(i, j + 1) + at(i, j - 1) - 4.0 * at(i, j)) / (h * h);
      err = std::max(err, std::abs(fd - lap[static_cast<std::size_t>(i * n + j)]));
      scale = std::max(scale, std::abs(fd));
    }
  }
  CHECK(err / scale < 1e-2);
}

TEST_CASE("L symbol is Laplacian plus bi-Laplacian") {
  for (double p2 : {0.0, 0.3, 1.0, 7.5}) {
    CHECK(symbol_value(Symbol::LSymbol, p2) ==
          doctest::Approx(-symbol_value(Symbol::Laplacian, p2) + symbol_value(Symbol::Bilaplacian, p2)));
    CHECK(symbol_value(Symbol::H4Weight, p2) == doctest::Approx(p2 * p2 * p2 * p2));
  }
}

TEST_CASE("spectral convolution matches a direct double sum") {
  std::mt19937_64 rng(3);
  GridSpec g(2, 8, 2.5);
  for (int trial = 0; trial < 3; ++trial) {
    auto k = oracle::random_field(g, rng);
    auto f = oracle::random_field(g, rng);
    auto conv = convolve(k, f);
    auto ref = oracle::direct_convolution(k, f);
    double scale = 0.0;
    for (double v : ref) scale = std::max(scale, std::abs(v));
    CHECK(oracle::max_abs_diff(conv.values(), ref) <= 1e-12 * scale);
  }
}

TEST_CASE("convolution is commutative and bilinear") {
  std::mt19937_64 rng(5);
  GridSpec g(3, 8, 1.0);
  auto a = oracle::random_field(g, rng);
  auto b = oracle::random_field(g, rng);
  auto c = oracle::random_field(g, rng);
  CHECK(oracle::max_abs_diff(convolve(a, b).values(), convolve(b, a).values()) < 1e-12);
  auto lhs = convolve(a, 2.0 * b + c);
  auto rhs = 2.0 * convolve(a, b) + convolve(a, c);
  CHECK(oracle::max_abs_diff(lhs.values(), rhs.values()) < 1e-11);
}

TEST_CASE("convolution refuses mismatched grids") {
  RealField a(GridSpec(2, 8, 1.0));
  RealField b(GridSpec(2, 8, 2.0));
  try {
    (void)convolve(a, b);
    FAIL("expected GridMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GridMismatch);
  }
}

TEST_CASE("Parseval: physical and spectral L2 norms agree") {
  std::mt19937_64 rng(9);
  for (int d : {1, 3, 5}) {
    GridSpec g(d, 8, 1.3 + d);
    auto f = oracle::random_field(g, rng);
    CHECK(norm_l2(forward_transform(f)) == doctest::Approx(norm_l2(f)).epsilon(1e-12));
  }
}

TEST_CASE("H4 norm of cos(x1) on the 5-torus") {
  GridSpec g(5, 8, pi);
  auto f = RealField::sample(g, [](std::span<const double> x) { return std::cos(x[0]); });
  CHECK(norm_h4(f) == doctest::Approx(std::pow(2.0 * pi, 2.5)).epsilon(1e-12));
  CHECK(norm_h4(forward_transform(f)) == doctest::Approx(norm_h4(f)).epsilon(1e-14));
}

TEST_CASE("Gaussian norms match closed forms") {
  GridSpec g(3, 32, 8.0);
  auto f = RealField::sample(g, [](std::span<const double> x) {
    return std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
  });
  CHECK(norm_l1(f) == doctest::Approx(std::pow(2.0 * pi, 1.5)).epsilon(1e-6));
  CHECK(norm_l2(f) == doctest::Approx(std::pow(pi, 0.75)).epsilon(1e-6));
  CHECK(norm_linf(f) == doctest::Approx(1.0).epsilon(1e-12));
  // ||Delta^2 f||^2 = 4 pi int r^10 exp(-r^2) dr = 2 pi Gamma(11/2).
  const double bil2 = 2.0 * pi * std::tgamma(5.5);
  CHECK(norm_h4(f) == doctest::Approx(std::sqrt(std::pow(pi, 1.5) + bil2)).epsilon(1e-6));
  CHECK(mean(f) == doctest::Approx(std::pow(2.0 * pi, 1.5) / std::pow(16.0, 3)).epsilon(1e-6));
  CHECK(outer_shell_mass_fraction(f) < 1e-12);
}

TEST_CASE("linearity of the transform") {
  std::mt19937_64 rng(13);
  GridSpec g(2, 16, 2.0);
  auto a = oracle::random_field(g, rng);
  auto b = oracle::random_field(g, rng);
  auto lhs = forward_transform(3.0 * a - b);
  auto fa = forward_transform(a);
  auto fb = forward_transform(b);
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(lhs[i] - (3.0 * fa[i] - fb[i])));
  CHECK(err < 1e-12);
}
