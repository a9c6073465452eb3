#pragma once

// Odd Jacobi theta function theta(u|tau), normalized by theta'(0) = 1:
//
//   theta(u+1)   = -theta(u)
//   theta(u+tau) = -exp(-2 pi i u - pi i tau) theta(u)
//
// Computed from the half-integer-exponent sine series
//
//   theta(u) = sum_{n>=0} (-1)^n q^{(n+1/2)^2} sin((2n+1) pi u) / D,
//   D        = pi sum_{n>=0} (-1)^n (2n+1) q^{(n+1/2)^2},      q = e^{i pi tau},
//
// so the theta'(0) = 1 normalization holds exactly at every truncation.
// Arguments are reduced to |Re u| <= 1/2, |Im u| <= Im(tau)/2 before
// summation and the exact quasi-periodicity prefactor is re-applied; the
// returned absolute error is bounded by tail_bound() times the modulus of
// that prefactor.  Derivatives up to order 3 are term-wise.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "latlab/numeric.hpp"

namespace latlab {

struct ModularParam {
  Cx tau;
  explicit ModularParam(Cx t) : tau(t) {
    require_finite(t, "tau");
    if (t.imag() <= 0.0) throw std::invalid_argument("ModularParam: Im(tau) must be > 0");
  }
};

class ThetaSeries {
 public:
  /// Default truncation policy: the smallest N with |q|^{(N+1/2)^2} < 1e-18.
  explicit ThetaSeries(ModularParam tau) : ThetaSeries(tau, pick_terms(tau.tau)) {}

  ThetaSeries(ModularParam tau, int n_terms) : tau_(tau.tau), n_terms_(n_terms) {
    if (tau_.imag() < 0.05)
      throw std::domain_error("ThetaSeries: Im(tau) < 0.05 is outside the truncation policy");
    if (n_terms_ < 1) throw std::invalid_argument("ThetaSeries: n_terms must be >= 1");
    coef_.resize(static_cast<std::size_t>(n_terms_));
    Cx norm = 0.0;
    for (int n = 0; n < n_terms_; ++n) {
      double m = n + 0.5;
      Cx c = std::exp(kI * kPi * tau_ * (m * m));
      if (n % 2) c = -c;
      coef_[static_cast<std::size_t>(n)] = c;
      norm += c * static_cast<double>(2 * n + 1);
    }
    norm_ = kPi * norm;
    tail_bound_ = certified_tail(n_terms_);
  }

  /// Grow the truncation until the certified strip bound meets `tol`.
  static ThetaSeries with_tolerance(ModularParam tau, double tol) {
    int n = pick_terms(tau.tau);
    for (;;) {
      ThetaSeries ts(tau, n);
      if (ts.tail_bound() <= tol) return ts;
      if (n > 5000)
        throw TruncationError("ThetaSeries: cannot certify requested tolerance");
      n *= 2;
    }
  }

  Cx tau() const { return tau_; }
  int n_terms() const { return n_terms_; }

  /// Certified remainder bound on the reduced strip
  /// |Re u| <= 1/2, |Im u| <= Im(tau)/2.
  double tail_bound() const { return tail_bound_; }

  /// Strip remainder bound for an arbitrary truncation (monotone in n).
  double certified_tail(int n) const {
    double aq = std::exp(-kPi * tau_.imag());
    double first = 2.0 * std::pow(aq, (n + 0.5) * (n - 0.5));
    double ratio = std::pow(aq, 2.0 * n + 1.0);
    return first / ((1.0 - ratio) * std::abs(norm_));
  }

  /// theta^{(order)} of the reduced argument, no quasi-periodicity factor.
  Cx reduced_sum(Cx u0, int order) const {
    Cx tot = 0.0;
    for (int n = 0; n < n_terms_; ++n) {
      double w = (2 * n + 1) * kPi;
      Cx ph = w * u0;
      Cx s;
      switch (order % 4) {
        case 0: s = std::sin(ph); break;
        case 1: s = std::cos(ph); break;
        case 2: s = -std::sin(ph); break;
        default: s = -std::cos(ph); break;
      }
      tot += coef_[static_cast<std::size_t>(n)] * std::pow(w, order) * s;
    }
    return tot / norm_;
  }

  /// u = u0 + m + k*tau with u0 in the fundamental strip.
  void reduce(Cx u, Cx& u0, long& m, long& k) const {
    k = static_cast<long>(std::floor(u.imag() / tau_.imag() + 0.5));
    Cx up = u - static_cast<double>(k) * tau_;
    m = static_cast<long>(std::floor(up.real() + 0.5));
    u0 = up - static_cast<double>(m);
  }

 private:
  static int pick_terms(Cx tau) {
    double aq = std::exp(-kPi * tau.imag());
    int n = 1;
    while (std::pow(aq, (n + 0.5) * (n + 0.5)) >= 1e-18 && n < 4000) ++n;
    return n;
  }

  Cx tau_;
  int n_terms_;
  Cx norm_;
  double tail_bound_ = 0.0;
  std::vector<Cx> coef_;
};

namespace detail {
inline double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}
}  // namespace detail

inline Cx theta_derivative(Cx u, int order, const ThetaSeries& ts) {
  require_finite(u, "u");
  if (order < 0 || order > 3)
    throw std::invalid_argument("theta_derivative: order must be in {0,1,2,3}");
  Cx u0;
  long m, k;
  ts.reduce(u, u0, m, k);
  // theta(u) = F(u0) theta(u0),  F(u0) = (-1)^{m+k} exp(-2 pi i k u0 - pi i k^2 tau)
  double sgn = ((m + k) % 2) ? -1.0 : 1.0;
  Cx F = sgn * std::exp(-2.0 * kPi * kI * static_cast<double>(k) * u0 -
                        kPi * kI * static_cast<double>(k) * static_cast<double>(k) * ts.tau());
  if (order == 0) return F * ts.reduced_sum(u0, 0);
  Cx a = -2.0 * kPi * kI * static_cast<double>(k);  // F'(u0) = a F(u0)
  Cx tot = 0.0;
  Cx apow = 1.0;
  for (int j = 0; j <= order; ++j) {
    tot += detail::binom(order, j) * apow * F * ts.reduced_sum(u0, order - j);
    apow *= a;
  }
  return tot;
}

inline Cx theta(Cx u, const ThetaSeries& ts) { return theta_derivative(u, 0, ts); }

/// |theta(u|tau) - sin(pi u)/pi|; only meaningful on |Im u| < Im(tau)/2.
inline double trig_limit_residual(Cx u, const ThetaSeries& ts) {
  require_finite(u, "u");
  if (std::abs(u.imag()) >= 0.5 * ts.tau().imag())
    throw std::domain_error("trig_limit_residual: u outside |Im u| < Im(tau)/2");
  return std::abs(theta(u, ts) - std::sin(kPi * u) / kPi);
}

/// Genericity gate: x counts as "off the lattice" when |theta(x)| exceeds
/// 1e-6 * max(1, |theta'(x)|).
inline bool off_lattice(Cx x, const ThetaSeries& ts) {
  return std::abs(theta(x, ts)) >
         1e-6 * std::max(1.0, std::abs(theta_derivative(x, 1, ts)));
}

inline void require_off_lattice(Cx x, const ThetaSeries& ts, const char* what) {
  if (!off_lattice(x, ts))
    throw PoleError(std::string(what) + ": argument too close to the lattice");
}

}  // namespace latlab
