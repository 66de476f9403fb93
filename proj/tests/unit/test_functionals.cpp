#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "nlslab/functionals.hpp"
#include "nlslab/groundstate.hpp"

using namespace nlslab;
using Catch::Approx;

namespace {

const GridSpec kGrid{1, 20.0, 4096};
const double kOmega = 1.0;

ComplexField random_localized(const GridSpec& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(0.4, 1.8);
  const double w = uni(rng), a = uni(rng), k = uni(rng), x0 = uni(rng) - 1.1;
  return sample_profile(g, [=](double x) {
    const double y = x - x0;
    return Complex{a * std::exp(-y * y / (w * w)), 0.0} * std::exp(Complex{0.0, k * x});
  });
}

}  // namespace

TEST_CASE("zero field evaluates to zero", "[functionals]") {
  const auto model = NonlinearityModel::pure_power(7.0, 1);
  const ComplexField zero(kGrid);
  const auto rep = evaluate(zero, model, kOmega);
  CHECK(rep.S == 0.0);
  CHECK(rep.I == 0.0);
  CHECK(rep.Q == 0.0);
  CHECK(rep.mass == 0.0);
}

TEST_CASE("ground state sits on both constraint manifolds", "[functionals]") {
  const auto model = NonlinearityModel::pure_power(7.0, 1);
  const auto phi = closed_form_1d_profile(7.0, kOmega, kGrid);
  const auto rep = evaluate(phi, model, kOmega);
  CHECK(std::abs(rep.I) <= 1e-8 * rep.kinetic);
  CHECK(std::abs(rep.Q) <= 1e-8 * rep.kinetic);
  CHECK(rep.S > 0.0);
}

TEST_CASE("gauge invariance of S, I, Q", "[functionals]") {
  const auto model = NonlinearityModel::pure_power(7.0, 1);
  const auto v = random_localized(kGrid, 17);
  const auto base = evaluate(v, model, kOmega);
  for (double theta : {0.3, 1.2, 2.9}) {
    const auto w = scaled(v, Complex{std::cos(theta), std::sin(theta)});
    const auto rep = evaluate(w, model, kOmega);
    CHECK(rep.S == Approx(base.S).epsilon(1e-12));
    CHECK(rep.I == Approx(base.I).epsilon(1e-12));
    CHECK(rep.Q == Approx(base.Q).epsilon(1e-12));
  }
}

TEST_CASE("action gradient at zero and at the ground state", "[functionals]") {
  const auto model = NonlinearityModel::pure_power(7.0, 1);
  const ComplexField zero(kGrid);
  CHECK(norm_l2(action_gradient(zero, model, kOmega)) == 0.0);

  const auto phi = closed_form_1d_profile(7.0, kOmega, kGrid);
  const double res = norm_l2(action_gradient(phi, model, kOmega));
  CHECK(res <= 1e-6 * norm_l2(phi));  // phi solves the stationary equation
}

TEST_CASE("gradient pairing <S'(v), v> = I(v)", "[functionals]") {
  const auto model = NonlinearityModel::pure_power(7.0, 1);
  for (unsigned seed : {1u, 2u, 3u, 9u}) {
    const auto v = random_localized(kGrid, seed);
    const auto grad = action_gradient(v, model, kOmega);
    const double lhs = inner_real(grad, v);
    const double rhs = evaluate(v, model, kOmega).I;
    CHECK(std::abs(lhs - rhs) <= 1e-8 * std::abs(rhs) + 1e-12);
  }
}

TEST_CASE("directional derivative of S along the ray is I", "[functionals]") {
  const auto model = NonlinearityModel::pure_power(7.0, 1);
  for (unsigned seed : {5u, 6u}) {
    const auto v = random_localized(kGrid, seed);
    const double h = 1e-5;
    const auto up = evaluate(scaled(v, Complex{1.0 + h, 0.0}), model, kOmega).S;
    const auto dn = evaluate(scaled(v, Complex{1.0 - h, 0.0}), model, kOmega).S;
    const double fd = (up - dn) / (2.0 * h);
    const double I = evaluate(v, model, kOmega).I;
    CHECK(fd == Approx(I).epsilon(1e-4));
  }
}

TEST_CASE("Pohozaev combination is internally exact", "[functionals]") {
  // I = 2S + (2/N) Q - (2/N) kinetic, to machine-times-conditioning
  for (int dim : {1, 2}) {
    const GridSpec g = dim == 1 ? kGrid : GridSpec{2, 10.0, 64};
    const auto model = NonlinearityModel::pure_power(dim == 1 ? 7.0 : 4.0, dim);
    const auto v = sample_profile(g, [](const std::array<double, 3>& x) {
      return Complex{1.3 * std::exp(-(x[0] * x[0] + x[1] * x[1])), 0.0};
    });
    const auto r = evaluate(v, model, 1.0);
    const double nd = static_cast<double>(dim);
    const double recon = 2.0 * r.S + 2.0 / nd * r.Q - 2.0 / nd * r.kinetic;
    const double scale = std::abs(r.S) + r.kinetic + r.omega * r.mass;
    CHECK(std::abs(recon - r.I) <= 1e-13 * scale);
  }
}

TEST_CASE("internal consistency of the assembled report", "[functionals]") {
  const auto model = NonlinearityModel::pure_power(7.0, 1);
  const auto v = random_localized(kGrid, 23);
  const auto r = evaluate(v, model, kOmega);
  CHECK(r.S == Approx(0.5 * r.kinetic + 0.5 * r.omega * r.mass - r.potential).epsilon(1e-14));
}

TEST_CASE("scaled evaluation matches rescale + evaluate", "[functionals]") {
  const auto model = NonlinearityModel::pure_power(7.0, 1);
  const auto v = sample_profile(kGrid, [](double x) {
    return Complex{1.2 * std::exp(-x * x / 1.44), 0.0};
  });
  const ScaledFunctionals sf(v, model, kOmega);
  for (double lam : {0.5, 0.9, 1.0, 1.3, 2.2}) {
    const auto direct = evaluate(rescale(v, lam), model, kOmega);
    const auto fast = sf.at_scale(lam);
    const double scale = std::abs(direct.S) + direct.kinetic;
    CHECK(std::abs(fast.S - direct.S) <= 1e-9 * scale);
    CHECK(std::abs(fast.Q - direct.Q) <= 1e-9 * scale);
    CHECK(std::abs(fast.I - direct.I) <= 1e-9 * scale);
  }
  // amplitude route against direct scaling
  for (double t : {0.3, 1.0, 1.7}) {
    const auto direct = evaluate(scaled(v, Complex{t, 0.0}), model, kOmega);
    const auto fast = sf.at_amplitude(t);
    const double scale = std::abs(direct.S) + direct.kinetic + 1e-30;
    CHECK(std::abs(fast.S - direct.S) <= 1e-9 * scale);
    CHECK(std::abs(fast.I - direct.I) <= 1e-9 * scale);
  }
}

TEST_CASE("set membership flags", "[functionals]") {
  const auto model = NonlinearityModel::pure_power(7.0, 1);
  const ComplexField zero(kGrid);
  const auto z = set_membership(evaluate(zero, model, kOmega), 0.5);
  CHECK(z.below_level);
  CHECK_FALSE(z.q_negative);
  CHECK_FALSE(z.i_negative);
  CHECK_FALSE(z.in_invariant_set);

  // phi itself with m = S(phi): equalities, not strict inequalities
  const auto phi = closed_form_1d_profile(7.0, kOmega, kGrid);
  const auto rp = evaluate(phi, model, kOmega);
  const auto fp = set_membership(rp, rp.S);
  CHECK_FALSE(fp.below_level);

  // phi^lambda with lambda = 1.05 lands strictly inside
  const auto u = rescale(phi, 1.05);
  const auto ru = evaluate(u, model, kOmega);
  const auto fu = set_membership(ru, rp.S);
  CHECK(fu.below_level);
  CHECK(fu.q_negative);
  CHECK(fu.i_negative);
  CHECK(fu.in_invariant_set);
}
