// nonlinearity.hpp — nonlinearity models g with antiderivative G, the
// monotonicity witness h(s) = (s g(s) - 2 G(s)) s^{-(2+4/N)}, the complex
// extension g(z) = g(|z|) z/|z|, and sampled admissibility checks.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nlslab/core.hpp"

namespace nlslab {

namespace detail {

// |base|^e with a fast path for small integer exponents
inline double pow_nonneg(double base, double e) {
  if (base == 0.0) return e == 0.0 ? 1.0 : 0.0;
  const double r = std::round(e);
  if (r == e && r >= 0.0 && r <= 64.0) {
    double acc = 1.0, b = base;
    auto n = static_cast<std::uint64_t>(r);
    while (n) {
      if (n & 1u) acc *= b;
      b *= b;
      n >>= 1u;
    }
    return acc;
  }
  return std::pow(base, e);
}

// Fritsch-Carlson monotone cubic (PCHIP) slopes
inline std::vector<double> pchip_slopes(const std::vector<double>& x,
                                        const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> h(n - 1), delta(n - 1), d(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    delta[i] = (y[i + 1] - y[i]) / h[i];
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  // one-sided endpoint slopes with the usual monotonicity clamp
  auto endpoint = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0.0)
      s = 0.0;
    else if (d0 * d1 < 0.0 && std::abs(s) > 3.0 * std::abs(d0))
      s = 3.0 * d0;
    return s;
  };
  if (n >= 3) {
    d[0] = endpoint(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = endpoint(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  } else {
    d[0] = d[n - 1] = delta[0];
  }
  return d;
}

}  // namespace detail

struct AdmissibilityReport {
  bool a0b_ok = false;       // g(s)/s -> 0 as s -> 0
  bool a1_ok = false;        // h strictly increasing, h -> 0 at the left end
  bool cond3_ok = false;     // g(s)/s increasing on (0, inf)
  bool cond4_ok = false;     // g(s)/s -> +inf as s -> +inf (sampled)
  std::optional<double> s0;  // the (P) threshold, when a search was requested
  bool supercritical = false;  // p > 1 + 4/N for power kinds
  bool borderline = false;     // p == 1 + 4/N within rounding
  std::string notes;
};

class NonlinearityModel {
 public:
  enum class Kind { pure_power, sum_of_powers, tabulated };

  static NonlinearityModel pure_power(double p, int dimension) {
    require(std::isfinite(p) && p > 1.0, "pure_power: exponent must exceed 1");
    NonlinearityModel m(Kind::pure_power, dimension);
    m.p_ = p;
    return m;
  }

  // g(s) = sum_i c_i |s|^{e_i - 1} s with every e_i > 1; an empty list is the
  // free (g = 0) model.
  static NonlinearityModel sum_of_powers(std::vector<std::pair<double, double>> terms,
                                         int dimension) {
    for (const auto& [c, e] : terms) {
      require(std::isfinite(c), "sum_of_powers: non-finite coefficient");
      require(std::isfinite(e) && e > 1.0, "sum_of_powers: exponents must exceed 1");
    }
    NonlinearityModel m(Kind::sum_of_powers, dimension);
    m.terms_ = std::move(terms);
    return m;
  }

  // samples of g on s >= 0 (s0 must be 0 with g(0) = 0); extended to R as an
  // odd function via a monotone cubic interpolant
  static NonlinearityModel tabulated(std::vector<double> s, std::vector<double> g,
                                     int dimension) {
    require(s.size() == g.size() && s.size() >= 4, "tabulated: need >= 4 samples");
    require(s.front() == 0.0 && g.front() == 0.0, "tabulated: table must start at g(0) = 0");
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
      require(s[i] < s[i + 1], "tabulated: sample points must be strictly increasing");
    NonlinearityModel m(Kind::tabulated, dimension);
    m.tab_s_ = std::move(s);
    m.tab_g_ = std::move(g);
    m.tab_d_ = detail::pchip_slopes(m.tab_s_, m.tab_g_);
    return m;
  }

  Kind kind() const { return kind_; }
  int dimension() const { return dimension_; }
  bool is_pure_power() const { return kind_ == Kind::pure_power; }
  double power() const {
    require(kind_ == Kind::pure_power, "power(): not a pure power model");
    return p_;
  }

  // largest power-law degree; drives the Petviashvili exponent and the
  // supercriticality flag
  std::optional<double> max_exponent() const {
    switch (kind_) {
      case Kind::pure_power:
        return p_;
      case Kind::sum_of_powers: {
        if (terms_.empty()) return std::nullopt;
        double e = terms_.front().second;
        for (const auto& t : terms_) e = std::max(e, t.second);
        return e;
      }
      case Kind::tabulated:
        return std::nullopt;
    }
    return std::nullopt;
  }

  // (A2) Lipschitz metadata for power kinds: alpha = p - 1. Recorded only;
  // never enforced numerically.
  std::optional<double> lipschitz_alpha() const {
    const auto e = max_exponent();
    if (!e) return std::nullopt;
    return *e - 1.0;
  }

  double g(double s) const {
    require_finite(s, "g_eval");
    switch (kind_) {
      case Kind::pure_power:
        return detail::pow_nonneg(std::abs(s), p_ - 1.0) * s;
      case Kind::sum_of_powers: {
        double acc = 0.0;
        for (const auto& [c, e] : terms_) acc += c * detail::pow_nonneg(std::abs(s), e - 1.0);
        return acc * s;
      }
      case Kind::tabulated: {
        const double a = std::abs(s);
        const double v = tab_eval(a);
        return s < 0.0 ? -v : v;
      }
    }
    return 0.0;
  }

  // complex extension g(z) = g(|z|) z/|z|, with g(0) = 0
  Complex g(Complex z) const {
    require_finite(z.real(), "g_complex");
    require_finite(z.imag(), "g_complex");
    const double a = std::abs(z);
    if (a == 0.0) return Complex{0.0, 0.0};
    return (g(a) / a) * z;
  }

  // G(s) = int_0^{|s|} g(t) dt
  double G(double s) const {
    require_finite(s, "G_eval");
    const double a = std::abs(s);
    switch (kind_) {
      case Kind::pure_power:
        return detail::pow_nonneg(a, p_ + 1.0) / (p_ + 1.0);
      case Kind::sum_of_powers: {
        double acc = 0.0;
        for (const auto& [c, e] : terms_) acc += c * detail::pow_nonneg(a, e + 1.0) / (e + 1.0);
        return acc;
      }
      case Kind::tabulated:
        return tab_integral(a);
    }
    return 0.0;
  }

  // g(s)/s extended by its limit 0 at s = 0; also the phase-rotation rate of
  // the nonlinear substep
  double phase_rate(double s) const {
    const double a = std::abs(s);
    if (a == 0.0) return 0.0;
    if (kind_ == Kind::pure_power) return detail::pow_nonneg(a, p_ - 1.0);
    return g(a) / a;
  }

  // h(s) = (s g(s) - 2 G(s)) s^{-(2+4/N)}, s > 0
  double h(double s) const {
    require(std::isfinite(s) && s > 0.0, "h_eval: s must be positive");
    const double num = s * g(s) - 2.0 * G(s);
    return num * detail::pow_nonneg(s, -(2.0 + 4.0 / static_cast<double>(dimension_)));
  }

  AdmissibilityReport check_admissibility(double s_min, double s_max, std::size_t count,
                                          std::optional<double> omega = std::nullopt) const;

 private:
  NonlinearityModel(Kind kind, int dimension) : kind_(kind), dimension_(dimension) {
    require(dimension >= 1 && dimension <= 3, "NonlinearityModel: dimension must be 1, 2 or 3");
  }

  double tab_eval(double a) const {
    require(a <= tab_s_.back(), "tabulated model evaluated beyond its sample range");
    // Hermite evaluation on the bracketing interval
    const auto it = std::upper_bound(tab_s_.begin(), tab_s_.end(), a);
    std::size_t i = it == tab_s_.begin() ? 0 : static_cast<std::size_t>(it - tab_s_.begin()) - 1;
    if (i + 1 >= tab_s_.size()) i = tab_s_.size() - 2;
    const double h = tab_s_[i + 1] - tab_s_[i];
    const double t = (a - tab_s_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * tab_g_[i] + h * h10 * tab_d_[i] + h01 * tab_g_[i + 1] + h * h11 * tab_d_[i + 1];
  }

  // adaptive Simpson of the interpolant on [0, a], relative tolerance 1e-10
  double tab_integral(double a) const {
    if (a == 0.0) return 0.0;
    struct Quad {
      const NonlinearityModel* m;
      int depth_limit = 40;
      double simpson(double lo, double hi, double flo, double fmid, double fhi) const {
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
      }
      double recurse(double lo, double hi, double flo, double fmid, double fhi, double whole,
                     double tol, int depth) const {
        const double mid = 0.5 * (lo + hi);
        const double fl = m->tab_eval(0.5 * (lo + mid));
        const double fr = m->tab_eval(0.5 * (mid + hi));
        const double left = simpson(lo, mid, flo, fl, fmid);
        const double right = simpson(mid, hi, fmid, fr, fhi);
        if (depth > depth_limit)
          throw NumericError("G_eval: adaptive quadrature failed to converge");
        if (std::abs(left + right - whole) <= 15.0 * tol) return left + right;
        return recurse(lo, mid, flo, fl, fmid, left, 0.5 * tol, depth + 1) +
               recurse(mid, hi, fmid, fr, fhi, right, 0.5 * tol, depth + 1);
      }
    } quad{this};
    const double fl = 0.0, fm = tab_eval(0.5 * a), fh = tab_eval(a);
    const double whole = quad.simpson(0.0, a, fl, fm, fh);
    const double tol = 1e-10 * std::max(std::abs(whole), 1e-300);
    return quad.recurse(0.0, a, fl, fm, fh, whole, tol, 0);
  }

  Kind kind_;
  int dimension_;
  double p_ = 0.0;
  std::vector<std::pair<double, double>> terms_;
  std::vector<double> tab_s_, tab_g_, tab_d_;
};

// ---------------------------------------------------------------------------
// Sampled admissibility checks on a log-spaced grid. The assumptions are
// asymptotic, so every verdict here is a sampled witness, not a proof.
// ---------------------------------------------------------------------------

inline AdmissibilityReport NonlinearityModel::check_admissibility(
    double s_min, double s_max, std::size_t count, std::optional<double> omega) const {
  require(s_min > 0.0 && s_min < s_max, "check_admissibility: need 0 < s_min < s_max");
  require(count >= 10, "check_admissibility: need count >= 10");

  AdmissibilityReport rep;
  std::ostringstream notes;

  std::vector<double> s(count);
  const double lr = std::log(s_max / s_min);
  for (std::size_t i = 0; i < count; ++i)
    s[i] = s_min * std::exp(lr * static_cast<double>(i) / static_cast<double>(count - 1));

  std::vector<double> rate(count), hv(count);
  for (std::size_t i = 0; i < count; ++i) {
    rate[i] = phase_rate(s[i]);
    hv[i] = h(s[i]);
  }

  // (A0)(b): g(s)/s -> 0 at the left end, decreasing toward it
  {
    bool small = std::abs(rate.front()) < 1e-3;
    bool decreasing_towards_zero = true;
    for (std::size_t i = 0; i + 1 < count && s[i + 1] <= 10.0 * s_min; ++i)
      if (std::abs(rate[i]) > std::abs(rate[i + 1])) decreasing_towards_zero = false;
    rep.a0b_ok = small && decreasing_towards_zero;
  }

  // (A1): h strictly increasing on every sampled pair and h(s_min) ~ 0
  {
    bool increasing = true;
    for (std::size_t i = 0; i + 1 < count; ++i)
      if (!(hv[i + 1] > hv[i])) increasing = false;
    const double scale = std::max(std::abs(hv.back()), 1.0);
    rep.a1_ok = increasing && std::abs(hv.front()) <= 1e-6 * scale;
  }

  // Lemma 2 consequences
  {
    bool increasing = true;
    for (std::size_t i = 0; i + 1 < count; ++i)
      if (!(rate[i + 1] > rate[i])) increasing = false;
    rep.cond3_ok = increasing;
    rep.cond4_ok = increasing && rate.back() >= 1e2;
  }

  // supercriticality (power kinds only)
  if (const auto e = max_exponent()) {
    const double critical = 1.0 + 4.0 / static_cast<double>(dimension_);
    rep.borderline = std::abs(*e - critical) <= 1e-9;
    rep.supercritical = !rep.borderline && *e > critical;
    if (rep.borderline) notes << "exponent sits at the critical value 1+4/N; ";
  } else if (kind_ == Kind::tabulated) {
    notes << "supercriticality undetermined for tabulated models; ";
  }

  if (const auto alpha = lipschitz_alpha())
    notes << "Lipschitz metadata alpha = " << *alpha << " (recorded, not enforced); ";

  // property (P): bisection on r(s) = omega s^2 / 2 - G(s)
  if (omega) {
    require(*omega > 0.0, "check_admissibility: omega must be positive");
    auto r = [&](double x) { return 0.5 * *omega * x * x - G(x); };
    std::optional<std::size_t> crossing;
    for (std::size_t i = 0; i + 1 < count; ++i)
      if (r(s[i]) > 0.0 && r(s[i + 1]) <= 0.0) {
        crossing = i;
        break;
      }
    if (crossing) {
      double lo = s[*crossing], hi = s[*crossing + 1];
      for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (r(mid) > 0.0 ? lo : hi) = mid;
      }
      rep.s0 = 0.5 * (lo + hi);
      if (dimension_ == 1 && !(*omega * *rep.s0 < g(*rep.s0)))
        notes << "(P) N=1 branch: omega*s0 < g(s0) failed at the located root; ";
    } else {
      notes << "(P): no sign change of omega s^2/2 - G(s) in the sampled range; ";
    }
  }

  rep.notes = notes.str();
  return rep;
}

}  // namespace nlslab
