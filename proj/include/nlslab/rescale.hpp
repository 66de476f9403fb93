// rescale.hpp — the lambda-scan of the dilation v^lambda = lambda^{N/2} v(lambda .):
// curves lambda -> S, Q, I, the roots lambda0 (Q-root) and lambda1 (I-root),
// concavity of the S-curve past lambda0 and the derivative identity
// dS/dlambda = Q(v^lambda)/lambda.

#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "nlslab/field.hpp"
#include "nlslab/functionals.hpp"

namespace nlslab {

struct ScalingScan {
  std::vector<double> lambdas;  // increasing, log-spaced
  std::vector<double> S_curve;
  std::vector<double> Q_curve;
  std::vector<double> I_curve;
  std::optional<double> lambda0;  // Q-root
  std::optional<double> lambda1;  // I-root
  bool concave_past_lambda0 = false;
  double derivative_identity_max_error = 0.0;
  bool truncated = false;  // leak guard cut the scan short
  std::string note;
};

inline constexpr double kLambdaFloor = 1e-3;

namespace detail {

// bisect f on [lo, hi] with f(lo) > 0 >= f(hi); stops when |f| <= tol(x)
template <class F, class Tol>
double bisect_root(F&& f, double lo, double hi, Tol&& tol, int max_iter = 200) {
  double flo = f(lo);
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (std::abs(fm) <= tol(mid) || 0.5 * (hi - lo) < 1e-15 * mid) return mid;
    if ((flo > 0.0) == (fm > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

// Q-root on (lambda_floor, 1]; requires Q(v) <= 0. Returns 1 immediately when
// Q(v) = 0 within tolerance. The curve is evaluated through the exact
// change-of-variables quadrature (ScaledFunctionals); the field-level route
// rescale() + evaluate() cross-checks it in the scan and in the tests.
inline double find_lambda0(const ComplexField& v, const NonlinearityModel& model, double omega) {
  const ScaledFunctionals sf(v, model, omega);
  require(mass(v) > 0.0, "find_lambda0: field must be nonzero");
  const FunctionalReport at1 = sf.at_scale(1.0);
  const double tol1 = 1e-10 * at1.kinetic;
  require(at1.Q <= tol1, "find_lambda0: requires Q(v) <= 0");
  if (std::abs(at1.Q) <= tol1) return 1.0;
  auto q = [&sf](double l) { return sf.at_scale(l).Q; };
  if (!(q(kLambdaFloor) > 0.0))
    throw BracketError("find_lambda0: no sign change of Q above the lambda floor");
  return detail::bisect_root(q, kLambdaFloor, 1.0, [&sf](double l) {
    return 1e-10 * sf.at_scale(l).kinetic;
  });
}

// I-root on (lambda_floor, 1); requires I(v) < 0. Bracketing uses the limit
// I(v^lambda) -> omega ||v||^2 > 0 as lambda -> 0.
inline double find_lambda1(const ComplexField& v, const NonlinearityModel& model, double omega) {
  const ScaledFunctionals sf(v, model, omega);
  require(mass(v) > 0.0, "find_lambda1: field must be nonzero");
  const FunctionalReport at1 = sf.at_scale(1.0);
  const double tol1 = 1e-10 * at1.kinetic;
  if (std::abs(at1.I) <= tol1) return 1.0;
  require(at1.I < 0.0, "find_lambda1: requires I(v) <= 0");
  auto iv = [&sf](double l) { return sf.at_scale(l).I; };
  if (!(iv(kLambdaFloor) > 0.0))
    throw BracketError("find_lambda1: no sign change of I above the lambda floor");
  return detail::bisect_root(iv, kLambdaFloor, 1.0, [&sf](double l) {
    return 1e-10 * sf.at_scale(l).kinetic;
  });
}

// Dense scan over log-spaced lambda in [lambda_min, lambda_max]. Curves are
// produced by the field-level route (rescale + evaluate); a leak violation at
// large lambda truncates the scan instead of failing it.
inline ScalingScan scan(const ComplexField& v, const NonlinearityModel& model, double omega,
                        double lambda_min, double lambda_max, std::size_t count) {
  require(0.0 < lambda_min && lambda_min < lambda_max, "scan: need 0 < lambda_min < lambda_max");
  require(count >= 16, "scan: need at least 16 points");

  ScalingScan out;
  const double lr = std::log(lambda_max / lambda_min);
  for (std::size_t i = 0; i < count; ++i) {
    const double l =
        lambda_min * std::exp(lr * static_cast<double>(i) / static_cast<double>(count - 1));
    ComplexField w;
    try {
      w = rescale(v, l);
    } catch (const TruncationError& e) {
      out.truncated = true;
      out.note = std::string("scan truncated at lambda = ") + std::to_string(l) + ": " + e.what();
      break;
    }
    const FunctionalReport r = evaluate(w, model, omega);
    out.lambdas.push_back(l);
    out.S_curve.push_back(r.S);
    out.Q_curve.push_back(r.Q);
    out.I_curve.push_back(r.I);
  }
  const std::size_t n = out.lambdas.size();
  if (n < 3) return out;

  // refine curve sign changes through the scaled-quadrature route
  const ScaledFunctionals sf(v, model, omega);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (out.Q_curve[i] > 0.0 && out.Q_curve[i + 1] <= 0.0 && !out.lambda0) {
      auto q = [&sf](double l) { return sf.at_scale(l).Q; };
      out.lambda0 = detail::bisect_root(q, out.lambdas[i], out.lambdas[i + 1], [&sf](double l) {
        return 1e-12 * sf.at_scale(l).kinetic;
      });
    }
    if (out.I_curve[i] > 0.0 && out.I_curve[i + 1] <= 0.0 && !out.lambda1) {
      auto iv = [&sf](double l) { return sf.at_scale(l).I; };
      out.lambda1 = detail::bisect_root(iv, out.lambdas[i], out.lambdas[i + 1], [&sf](double l) {
        return 1e-12 * sf.at_scale(l).kinetic;
      });
    }
  }

  // concavity past lambda0: raw second differences of the S-curve
  if (out.lambda0) {
    bool concave = true;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (out.lambdas[i - 1] < *out.lambda0) continue;
      const double d2 = out.S_curve[i + 1] - 2.0 * out.S_curve[i] + out.S_curve[i - 1];
      if (d2 > 1e-10 * std::abs(out.S_curve[i])) concave = false;
    }
    out.concave_past_lambda0 = concave;
  }

  // derivative identity dS/dlambda = Q/lambda, centered differences on the
  // uneven grid, scored against |Q/lambda| plus a curve-scale floor
  double qscale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    qscale = std::max(qscale, std::abs(out.Q_curve[i] / out.lambdas[i]));
  const double floor = 1e-2 * qscale + 1e-300;
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hp = out.lambdas[i + 1] - out.lambdas[i];
    const double hm = out.lambdas[i] - out.lambdas[i - 1];
    const double dS = (hm * hm * out.S_curve[i + 1] - hp * hp * out.S_curve[i - 1] +
                       (hp * hp - hm * hm) * out.S_curve[i]) /
                      (hp * hm * (hp + hm));
    const double rhs = out.Q_curve[i] / out.lambdas[i];
    worst = std::max(worst, std::abs(dS - rhs) / (std::abs(rhs) + floor));
  }
  out.derivative_identity_max_error = worst;
  return out;
}

}  // namespace nlslab
