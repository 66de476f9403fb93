#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "nlslab/field.hpp"

using namespace nlslab;
using Catch::Approx;

namespace {

const GridSpec kGrid1d{1, 20.0, 4096};

ComplexField gaussian(const GridSpec& g, double a = 1.0, double w = 1.0) {
  return sample_profile(g, [a, w](double x) { return Complex{a * std::exp(-x * x / (w * w)), 0.0}; });
}

// random band-limited field: a handful of low modes with fixed-seed coefficients
ComplexField random_band_limited(const GridSpec& g, unsigned seed, int modes = 24) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> cr(static_cast<std::size_t>(2 * modes + 1)), ci(cr.size());
  for (auto& c : cr) c = uni(rng);
  for (auto& c : ci) c = uni(rng);
  const double k0 = std::numbers::pi / g.half_length;
  return sample_profile(g, [&](double x) {
    Complex acc{0.0, 0.0};
    for (int m = -modes; m <= modes; ++m) {
      const auto j = static_cast<std::size_t>(m + modes);
      acc += Complex{cr[j], ci[j]} * std::exp(Complex{0.0, k0 * static_cast<double>(m) * x});
    }
    return acc / static_cast<double>(modes);
  });
}

// localized band-limited bump (Gaussian times a phase), used for scaling laws
ComplexField localized(const GridSpec& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(0.5, 2.0);
  const double w = uni(rng), a = uni(rng), k = uni(rng);
  return sample_profile(g, [=](double x) {
    return Complex{a * std::exp(-x * x / (w * w)), 0.0} *
           std::exp(Complex{0.0, k * x});
  });
}

}  // namespace

TEST_CASE("sample_profile basics", "[field]") {
  const auto zero = sample_profile(kGrid1d, [](double) { return Complex{0.0, 0.0}; });
  CHECK(mass(zero) == 0.0);

  const auto g = gaussian(kGrid1d);
  double maxv = 0.0;
  std::size_t argmax = 0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (std::abs(g[i]) > maxv) {
      maxv = std::abs(g[i]);
      argmax = i;
    }
  CHECK(maxv == Approx(1.0));
  CHECK(kGrid1d.coordinate(argmax) == Approx(0.0).margin(1e-14));

  CHECK_THROWS_AS(
      sample_profile(kGrid1d, [](double x) { return Complex{1.0 / x, 0.0}; }),
      NumericError);  // division by zero at the x = 0 node
}

TEST_CASE("mass quadrature", "[field]") {
  // int sech^2 = 2
  const auto sech = sample_profile(kGrid1d, [](double x) {
    return Complex{2.0 / (std::exp(x) + std::exp(-x)), 0.0};
  });
  CHECK(mass(sech) == Approx(2.0).epsilon(1e-12));

  // int e^{-2x^2} = sqrt(pi/2)
  const auto g = gaussian(kGrid1d);
  CHECK(mass(g) == Approx(std::sqrt(std::numbers::pi / 2.0)).epsilon(1e-12));
}

TEST_CASE("kinetic quadrature", "[field]") {
  const auto constant = sample_profile(kGrid1d, [](double) { return Complex{0.7, 0.2}; });
  CHECK(kinetic(constant) == Approx(0.0).margin(1e-20));

  // single Fourier mode sin(pi x / L): eigenfunction of -lap with k = pi/L
  const double L = kGrid1d.half_length;
  const auto mode = sample_profile(kGrid1d, [L](double x) {
    return Complex{std::sin(std::numbers::pi * x / L), 0.0};
  });
  const double k = std::numbers::pi / L;
  CHECK(kinetic(mode) == Approx(k * k * mass(mode)).epsilon(1e-12));

  // int |d/dx e^{-x^2}|^2 = sqrt(pi/2)
  const auto g = gaussian(kGrid1d);
  CHECK(kinetic(g) == Approx(std::sqrt(std::numbers::pi / 2.0)).epsilon(1e-11));
}

TEST_CASE("laplacian spectral accuracy", "[field]") {
  const auto constant = sample_profile(kGrid1d, [](double) { return Complex{1.0, -0.5}; });
  const auto lap0 = laplacian(constant);
  for (std::size_t i = 0; i < lap0.size(); i += 97) CHECK(std::abs(lap0[i]) < 1e-12);

  // plane wave e^{ikx} -> -k^2 e^{ikx}
  const double k = 8.0 * std::numbers::pi / kGrid1d.half_length;
  const auto wave = sample_profile(kGrid1d, [k](double x) {
    return std::exp(Complex{0.0, k * x});
  });
  const auto lw = laplacian(wave);
  for (std::size_t i = 0; i < lw.size(); i += 211)
    CHECK(std::abs(lw[i] + k * k * wave[i]) < 1e-9);

  // symbolic oracle: (e^{-x^2})'' = (4x^2 - 2) e^{-x^2}
  const auto g = gaussian(kGrid1d);
  const auto lg = laplacian(g);
  for (std::size_t i = 0; i < lg.size(); i += 101) {
    const double x = kGrid1d.coordinate(i);
    const double expect = (4.0 * x * x - 2.0) * std::exp(-x * x);
    CHECK(std::abs(lg[i] - Complex{expect, 0.0}) < 1e-9);
  }
}

TEST_CASE("weighted moment", "[field]") {
  const ComplexField zero(kGrid1d);
  CHECK(weighted_moment(zero) == 0.0);

  // int x^2 e^{-2x^2} = sqrt(pi/2)/4
  const auto g = gaussian(kGrid1d);
  CHECK(weighted_moment(g) == Approx(0.25 * std::sqrt(std::numbers::pi / 2.0)).epsilon(1e-11));

  // parallel-axis identity for even profiles: shifting by a adds a^2 mass(v)
  const double a = 2.5;
  const auto shifted = sample_profile(kGrid1d, [a](double x) {
    const double y = x - a;
    return Complex{std::exp(-y * y), 0.0};
  });
  CHECK(weighted_moment(shifted) ==
        Approx(weighted_moment(g) + a * a * mass(g)).epsilon(1e-10));
}

TEST_CASE("boundary mass fraction", "[field]") {
  // compactly centered bump
  const auto bump = gaussian(kGrid1d, 1.0, 1.5);
  CHECK(boundary_mass_fraction(bump, 0.8) <= 1e-12);

  // uniform field: fraction outside = 1 - core_fraction
  const auto uniform = sample_profile(kGrid1d, [](double) { return Complex{1.0, 0.0}; });
  CHECK(boundary_mass_fraction(uniform, 0.8) == Approx(0.2).epsilon(1e-3));

  // sech(3x) tail beyond 16: int_{16}^{inf} sech^2(3x) dx / 2/3 ~ e^{-96}
  const auto s3 = sample_profile(kGrid1d, [](double x) {
    return Complex{2.0 / (std::exp(3.0 * x) + std::exp(-3.0 * x)), 0.0};
  });
  const double tail = boundary_mass_fraction(s3, 0.8);
  CHECK(tail < 1e-30);  // e^{-96}-scale, drowned in rounding but certainly tiny

  const ComplexField zero(kGrid1d);
  CHECK(boundary_mass_fraction(zero, 0.8) == 0.0);
}

TEST_CASE("rescale identity and mass preservation", "[field]") {
  const auto g = gaussian(kGrid1d);
  const auto same = rescale(g, 1.0);
  CHECK(sup_distance(g, same) == 0.0);

  for (double lam : {0.6, 1.05, 1.3, 2.0}) {
    const auto w = rescale(g, lam);
    CHECK(mass(w) == Approx(mass(g)).epsilon(1e-10));
  }
}

TEST_CASE("rescale matches the analytic dilation", "[field]") {
  // sqrt(2) e^{-4 x^2} = 2^{1/2} v(2x) for v = e^{-x^2}
  const auto g = gaussian(kGrid1d);
  const auto w = rescale(g, 2.0);
  const auto expect = sample_profile(kGrid1d, [](double x) {
    return Complex{std::sqrt(2.0) * std::exp(-4.0 * x * x), 0.0};
  });
  CHECK(sup_distance(w, expect) < 1e-11);
}

TEST_CASE("rescale leak guard", "[field]") {
  // wide profile pushed past the box under lambda > 1
  const auto wide = gaussian(kGrid1d, 1.0, 9.0);
  CHECK_THROWS_AS(rescale(wide, 4.0), TruncationError);
}

TEST_CASE("Plancherel identity on random band-limited fields", "[field]") {
  for (unsigned seed : {1u, 2u, 3u, 4u}) {
    const auto v = random_band_limited(kGrid1d, seed);
    const auto hat = spectrum(v);
    double spectral = 0.0;
    for (const auto& z : hat) spectral += abs2(z);
    spectral *= kGrid1d.cell_volume() / static_cast<double>(kGrid1d.size());
    CHECK(std::abs(mass(v) - spectral) <= 1e-10 * mass(v));
  }
}

TEST_CASE("kinetic scaling law under dilation", "[field]") {
  for (unsigned seed : {11u, 12u, 13u}) {
    const auto v = localized(kGrid1d, seed);
    for (double lam : {0.7, 1.2, 1.6}) {
      const auto w = rescale(v, lam);
      CHECK(kinetic(w) == Approx(lam * lam * kinetic(v)).epsilon(1e-8));
    }
  }
}

TEST_CASE("weighted moment scaling law under dilation", "[field]") {
  for (unsigned seed : {21u, 22u}) {
    const auto v = localized(kGrid1d, seed);
    for (double lam : {0.8, 1.5}) {
      const auto w = rescale(v, lam);
      CHECK(weighted_moment(w) == Approx(weighted_moment(v) / (lam * lam)).epsilon(1e-6));
    }
  }
}

TEST_CASE("rescale round trip", "[field]") {
  for (unsigned seed : {31u, 32u}) {
    const auto v = localized(kGrid1d, seed);
    for (double lam : {0.5, 0.9, 1.4, 2.0}) {
      const auto back = rescale(rescale(v, lam), 1.0 / lam);
      CHECK(sup_distance(back, v) < 1e-8);
    }
  }
}

TEST_CASE("rescale group law", "[rescale][field]") {
  for (unsigned seed : {41u}) {
    const auto v = localized(kGrid1d, seed);
    const auto ab = rescale(rescale(v, 1.2), 0.7);
    const auto direct = rescale(v, 1.2 * 0.7);
    CHECK(sup_distance(ab, direct) < 1e-8);
  }
}

TEST_CASE("dealias removes the top third of the band", "[field]") {
  const auto v = random_band_limited(kGrid1d, 5);
  const auto vd = dealias(v);
  // band-limited field (24 modes) is untouched
  CHECK(sup_distance(v, vd) < 1e-12);
  CHECK(spectral_tail_fraction(v) < 1e-28);

  // a pure top-band mode is annihilated
  const std::size_t m = kGrid1d.points_per_axis;
  const double k = kGrid1d.wavenumber(m / 2 - 4);
  const auto hi = sample_profile(kGrid1d, [k](double x) { return std::exp(Complex{0.0, k * x}); });
  CHECK(spectral_tail_fraction(hi) == Approx(1.0).epsilon(1e-12));
  CHECK(mass(dealias(hi)) < 1e-20 * mass(hi));
}

TEST_CASE("2D and 3D smoke: transforms and quadrature", "[field]") {
  const GridSpec g2{2, 10.0, 64};
  // plane-wave eigenfunction of -lap in 2D
  const double kx = 2.0 * std::numbers::pi / g2.half_length;
  const double ky = -3.0 * std::numbers::pi / g2.half_length;
  const auto wave = sample_profile(g2, [&](const std::array<double, 3>& x) {
    return std::exp(Complex{0.0, kx * x[0] + ky * x[1]});
  });
  const auto lw = laplacian(wave);
  const double k2 = kx * kx + ky * ky;
  for (std::size_t i = 0; i < lw.size(); i += 389)
    CHECK(std::abs(lw[i] + k2 * wave[i]) < 1e-9);

  // 2D Gaussian mass: (int e^{-2x^2})^2 = pi/2
  const auto g2d = sample_profile(g2, [](const std::array<double, 3>& x) {
    return Complex{std::exp(-(x[0] * x[0] + x[1] * x[1])), 0.0};
  });
  CHECK(mass(g2d) == Approx(std::numbers::pi / 2.0).epsilon(1e-10));

  const GridSpec g3{3, 8.0, 32};
  const auto g3d = sample_profile(g3, [](const std::array<double, 3>& x) {
    return Complex{std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])), 0.0};
  });
  CHECK(mass(g3d) == Approx(std::pow(std::numbers::pi / 2.0, 1.5)).epsilon(5e-8));
  // 2D rescale keeps mass
  const auto r2 = rescale(g2d, 1.3);
  CHECK(mass(r2) == Approx(mass(g2d)).epsilon(1e-8));
}
