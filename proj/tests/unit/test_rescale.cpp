#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nlslab/groundstate.hpp"
#include "nlslab/rescale.hpp"

using namespace nlslab;
using Catch::Approx;

namespace {

const GridSpec kGrid{1, 20.0, 4096};
const double kOmega = 1.0;
const auto kModel = NonlinearityModel::pure_power(7.0, 1);

ComplexField phi() { return closed_form_1d_profile(7.0, kOmega, kGrid); }

ComplexField gaussian(double a, double w) {
  return sample_profile(kGrid, [=](double x) { return Complex{a * std::exp(-x * x / (w * w)), 0.0}; });
}

}  // namespace

TEST_CASE("lambda0 of the ground state is 1", "[rescale]") {
  CHECK(find_lambda0(phi(), kModel, kOmega) == Approx(1.0).margin(1e-6));
  const auto s = scan(phi(), kModel, kOmega, 0.3, 3.0, 400);
  REQUIRE(s.lambda0.has_value());
  CHECK(*s.lambda0 == Approx(1.0).margin(1e-3));
}

TEST_CASE("group law gives the Q-root of a pre-dilated seed", "[rescale]") {
  // (phi^a)^b = phi^{ab}, so the Q-root of phi^{1.2} is 1/1.2
  const auto v = rescale(phi(), 1.2);
  CHECK(find_lambda0(v, kModel, kOmega) == Approx(1.0 / 1.2).margin(1e-6));
  const auto s = scan(v, kModel, kOmega, 0.3, 3.0, 400);
  REQUIRE(s.lambda0.has_value());
  CHECK(*s.lambda0 < 1.0);
}

TEST_CASE("lambda0 of a focusing Gaussian agrees with the dense scan", "[rescale]") {
  const auto v = gaussian(1.4, 1.0);  // Q(v) < 0
  REQUIRE(evaluate(v, kModel, kOmega).Q < 0.0);
  const double l0 = find_lambda0(v, kModel, kOmega);
  CHECK(l0 > 0.0);
  CHECK(l0 < 1.0);
  const auto s = scan(v, kModel, kOmega, 0.3, 3.0, 800);
  REQUIRE(s.lambda0.has_value());
  CHECK(l0 == Approx(*s.lambda0).margin(2e-6));
}

TEST_CASE("find_lambda0 preconditions", "[rescale]") {
  const auto small = gaussian(0.5, 1.0);  // Q > 0
  REQUIRE(evaluate(small, kModel, kOmega).Q > 0.0);
  CHECK_THROWS_AS(find_lambda0(small, kModel, kOmega), DomainError);
}

TEST_CASE("lambda1 roots", "[rescale]") {
  // I(phi) = 0: root at the identity scale
  CHECK(find_lambda1(phi(), kModel, kOmega) == Approx(1.0).margin(1e-6));

  // phi^{1.05} has I < 0; the root is below 1 and I vanishes there
  const auto v = rescale(phi(), 1.05);
  REQUIRE(evaluate(v, kModel, kOmega).I < 0.0);
  const double l1 = find_lambda1(v, kModel, kOmega);
  CHECK(l1 < 1.0);
  const ScaledFunctionals sf(v, kModel, kOmega);
  const auto at = sf.at_scale(l1);
  CHECK(std::abs(at.I) <= 1e-10 * at.kinetic);
}

TEST_CASE("scan derivative identity and structure on a Gaussian seed", "[rescale]") {
  const auto v = gaussian(1.4, 1.0);
  const auto s = scan(v, kModel, kOmega, 0.3, 3.0, 400);
  REQUIRE(s.lambdas.size() == 400);
  CHECK(s.derivative_identity_max_error <= 1e-3);
  REQUIRE(s.lambda0.has_value());
  CHECK(s.concave_past_lambda0);

  // sign pattern of dS/dlambda around lambda0 (two grid steps away)
  const double l0 = *s.lambda0;
  for (std::size_t i = 2; i + 2 < s.lambdas.size(); ++i) {
    const double dS = s.S_curve[i + 1] - s.S_curve[i - 1];
    if (s.lambdas[i + 2] < l0) CHECK(dS > 0.0);
    if (s.lambdas[i - 2] > l0) CHECK(dS < 0.0);
  }
}

TEST_CASE("scan truncates at the leak guard instead of failing", "[rescale]") {
  const auto wide = gaussian(1.0, 7.0);
  const auto s = scan(wide, kModel, kOmega, 0.5, 4.0, 64);
  CHECK(s.truncated);
  CHECK(s.lambdas.size() < 64);
  CHECK_FALSE(s.note.empty());
}

TEST_CASE("S-curve of the ground state peaks at lambda = 1", "[rescale]") {
  const auto s = scan(phi(), kModel, kOmega, 0.3, 3.0, 400);
  std::size_t arg = 0;
  for (std::size_t i = 0; i < s.S_curve.size(); ++i)
    if (s.S_curve[i] > s.S_curve[arg]) arg = i;
  CHECK(s.lambdas[arg] == Approx(1.0).margin(6e-3));  // grid resolution
}
