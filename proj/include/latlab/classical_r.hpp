#pragma once

// Classical elliptic Green kernels, the dynamical classical r-matrix
// r_lambda^+, CDYBE verification, the rational/trigonometric kernel
// degenerations (a)/(b)/(c), and the principal-value averaging that builds
// the elliptic kernels out of the trigonometric ones.
//
// Only meromorphic kernels are computed; the contour/regularization
// semantics of the underlying distributions are out of scope.  Each kernel
// value below is the integrand of the corresponding Green distribution.

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>

#include "latlab/elliptic_poly.hpp"
#include "latlab/numeric.hpp"
#include "latlab/tensor2.hpp"
#include "latlab/theta.hpp"

namespace latlab {

enum class GreenKind { cartan, lambda_plus, lambda_minus };

/// Meromorphic Green kernel: theta'(u-v)/theta(u-v) for the Cartan kind,
/// theta(u-v+lambda)/(theta(u-v) theta(lambda)) for the lambda kinds (the
/// +/- distinction lives in the contour, not the kernel).
struct GreenKernel {
  GreenKind kind;
  std::optional<Cx> lambda;
  ThetaSeries ts;

  GreenKernel(GreenKind k, std::optional<Cx> l, ThetaSeries series)
      : kind(k), lambda(l), ts(std::move(series)) {
    if ((kind == GreenKind::cartan) == lambda.has_value())
      throw std::invalid_argument("GreenKernel: lambda present iff kind != cartan");
  }
};

inline Cx green_value(const GreenKernel& k, Cx u, Cx v) {
  require_off_lattice(u - v, k.ts, "green_value: u - v");
  if (k.kind == GreenKind::cartan)
    return theta_derivative(u - v, 1, k.ts) / theta(u - v, k.ts);
  require_off_lattice(*k.lambda, k.ts, "green_value: lambda");
  return green_ratio(u - v, *k.lambda, k.ts);
}

/// r_lambda^+(u,v): diag(G/2, -G/2, -G/2, G/2) with off-diagonal entries
/// G^+_{-lambda}(u,v) at (+-),(-+) and G^+_{lambda}(u,v) at (-+),(+-).
inline TensorMatrix2 classical_r_plus(Cx u, Cx v, const DynamicalParam& dyn,
                                      const ThetaSeries& ts) {
  require_off_lattice(u - v, ts, "classical_r_plus: u - v");
  require_off_lattice(dyn.lambda, ts, "classical_r_plus: lambda");
  require_off_lattice(-dyn.lambda, ts, "classical_r_plus: -lambda");
  Cx g = theta_derivative(u - v, 1, ts) / theta(u - v, ts);
  TensorMatrix2 r;
  r(0, 0) = 0.5 * g;
  r(3, 3) = 0.5 * g;
  r(1, 1) = -0.5 * g;
  r(2, 2) = -0.5 * g;
  r(1, 2) = green_ratio(u - v, -dyn.lambda, ts);
  r(2, 1) = green_ratio(u - v, dyn.lambda, ts);
  return r;
}

/// Analytic d/dlambda of classical_r_plus (only the off-diagonal depends on
/// lambda).
inline TensorMatrix2 classical_r_plus_dlambda(Cx u, Cx v, const DynamicalParam& dyn,
                                              const ThetaSeries& ts) {
  TensorMatrix2 r;
  r(1, 2) = -green_ratio_dlambda(u - v, -dyn.lambda, ts);
  r(2, 1) = green_ratio_dlambda(u - v, dyn.lambda, ts);
  return r;
}

/// Max-norm residual of the classical dynamical Yang-Baxter equation
///   [r12,r13] + [r12,r23] + [r13,r23]
///     = H1 d_lambda r23 - H2 d_lambda r13 + H3 d_lambda r12.
inline double cdybe_residual(Cx u1, Cx u2, Cx u3, const DynamicalParam& dyn,
                             const ThetaSeries& ts) {
  Matrix8 r12 = embed(classical_r_plus(u1, u2, dyn, ts), 0, 1);
  Matrix8 r13 = embed(classical_r_plus(u1, u3, dyn, ts), 0, 2);
  Matrix8 r23 = embed(classical_r_plus(u2, u3, dyn, ts), 1, 2);
  Matrix8 d12 = embed(classical_r_plus_dlambda(u1, u2, dyn, ts), 0, 1);
  Matrix8 d13 = embed(classical_r_plus_dlambda(u1, u3, dyn, ts), 0, 2);
  Matrix8 d23 = embed(classical_r_plus_dlambda(u2, u3, dyn, ts), 1, 2);
  Matrix8 lhs = commutator(r12, r13) + commutator(r12, r23) + commutator(r13, r23);
  Matrix8 rhs = cartan_leg(0) * d23 - cartan_leg(1) * d13 + cartan_leg(2) * d12;
  return (lhs - rhs).max_norm();
}

/// The tau-period automorphism h -> h, e -> e^{2 pi i lambda} e,
/// f -> e^{-2 pi i lambda} f, realized as conjugation by
/// g = diag(e^{i pi lambda}, e^{-i pi lambda}) on the first leg.
struct AveragingAutomorphism {
  Cx lambda;

  explicit AveragingAutomorphism(Cx l) : lambda(l) {}

  /// g^n (x) id on C^2 (x) C^2.
  TensorMatrix2 induced_matrix(int n = 1) const {
    Cx gp = std::exp(kI * kPi * lambda * static_cast<double>(n));
    TensorMatrix2 m;
    m(0, 0) = gp;
    m(1, 1) = gp;
    m(2, 2) = 1.0 / gp;
    m(3, 3) = 1.0 / gp;
    return m;
  }

  /// (A^n (x) id) r = (g^n (x) id) r (g^{-n} (x) id): scales the (-+),(+-)
  /// slot by e^{-2 pi i n lambda} and the (+-),(-+) slot by its inverse.
  TensorMatrix2 twist(const TensorMatrix2& r, int n) const {
    TensorMatrix2 out = r;
    Cx f = std::exp(-2.0 * kPi * kI * lambda * static_cast<double>(n));
    out(2, 1) *= f;
    out(1, 2) /= f;
    return out;
  }
};

namespace detail {
/// cot(z) = i (e^{2iz}+1)/(e^{2iz}-1), overflow-free for |Im z| < ~350.
inline Cx cot(Cx z) {
  Cx e = std::exp(2.0 * kI * z);
  return kI * (e + 1.0) / (e - 1.0);
}
}  // namespace detail

enum class DegenerationKind { rational_a, trig_b, trig_c };

struct DegenerationParams {
  Cx lambda{0.0};   // (a): dynamical term; (c): finite part of the approximant
  Cx mu{0.0};       // (c) only
  Cx eta{0.0};      // (c) only, Re eta > 0
  double omega = 100.0;  // rescaling for (a) and (c)
};

struct KernelDegeneration {
  Cx limit;         // degenerate kernel value
  double residual;  // |elliptic approximant - limit| at the reference point
};

/// Degenerate Green kernels and their residuals against the rescaled
/// elliptic kernel:
///   (a)  1/(u-v) + 1/lambda        vs (1/w) G_{l/w}((u-v)/w) at the ts tau
///   (b)  pi ctg pi(u-v) + pi ctg pi lambda   vs G_l(u-v) at tau = 30i
///   (c)  2 pi eta e^{-2 pi eta mu (u-v)}/(1 - e^{-2 pi eta (u-v)})
///        vs (1/w) theta(mu+(u-v+l)/w)/(theta((u-v)/w) theta(mu+l/w)) at
///        tau = i/(eta w); requires mu inside the analyticity zone and
///        -Re(1/eta) < Im(u-v) < 0.
inline KernelDegeneration degenerate_kernel(DegenerationKind kind, Cx u, Cx v,
                                            const DegenerationParams& p, const ThetaSeries& ts) {
  Cx x = u - v;
  switch (kind) {
    case DegenerationKind::rational_a: {
      if (std::abs(x) < 1e-8 || std::abs(p.lambda) < 1e-8)
        throw PoleError("degenerate_kernel(a): u-v or lambda at a pole");
      Cx limit = 1.0 / x + 1.0 / p.lambda;
      double w = p.omega;
      Cx approx = green_ratio(x / w, p.lambda / w, ts) / w;
      return {limit, std::abs(approx - limit)};
    }
    case DegenerationKind::trig_b: {
      if (std::abs(std::sin(kPi * x)) < 1e-8 || std::abs(std::sin(kPi * p.lambda)) < 1e-8)
        throw PoleError("degenerate_kernel(b): u-v or lambda on Z");
      Cx limit = kPi * detail::cot(kPi * x) + kPi * detail::cot(kPi * p.lambda);
      ThetaSeries ref(ModularParam(Cx(0.0, 30.0)));
      Cx approx = green_ratio(x, p.lambda, ref);
      return {limit, std::abs(approx - limit)};
    }
    case DegenerationKind::trig_c:
    default: {
      if (p.eta.real() <= 0.0)
        throw std::invalid_argument("degenerate_kernel(c): need Re(eta) > 0");
      // analyticity zone (strict, 1e-9 margin):
      //   Im(eta) Im(mu)/Re(eta) < Re(mu) < Im(eta) Im(mu)/Re(eta) + 1
      double lo = p.eta.imag() * p.mu.imag() / p.eta.real();
      if (!(p.mu.real() > lo + 1e-9 && p.mu.real() < lo + 1.0 - 1e-9))
        throw std::domain_error("degenerate_kernel(c): mu outside the analyticity zone");
      double strip = (1.0 / p.eta).real();
      if (!(x.imag() > -strip && x.imag() < 0.0))
        throw std::domain_error("degenerate_kernel(c): Im(u-v) outside (-Re(1/eta), 0)");
      Cx e = std::exp(-2.0 * kPi * p.eta * x);
      if (std::abs(e - 1.0) < 1e-10) throw PoleError("degenerate_kernel(c): kernel pole");
      Cx limit = 2.0 * kPi * p.eta * std::exp(-2.0 * kPi * p.eta * p.mu * x) / (1.0 - e);
      double w = p.omega;
      ThetaSeries ref(ModularParam(kI / (p.eta * w)));
      Cx approx = theta(p.mu + (x + p.lambda) / w, ref) /
                  (theta(x / w, ref) * theta(p.mu + p.lambda / w, ref) * w);
      return {limit, std::abs(approx - limit)};
    }
  }
}

struct AveragingResult {
  Cx partial_sum;           // v.p. partial sum of the G^+_lambda slot
  double offdiag_residual;  // max residual of the two off-diagonal slots
  double cartan_residual;   // residual of the Cartan slot
};

/// Symmetric-truncation partial sums of the averaging identities
///   theta(u+l)/(theta(u) theta(l)) = v.p. sum_n pi e^{-2 n pi i l} (ctg pi(u - n tau) + i)
///   theta(u-l)/(theta(u) theta(-l)) = v.p. sum_n pi e^{ 2 n pi i l} (ctg pi(u - n tau) - i)
///   theta'(u)/theta(u)             = v.p. sum_n pi ctg pi(u - n tau),
/// valid for -Im(tau) < Im(lambda) < 0.  The (ctg +- i) combinations are
/// evaluated as 2i e^{2 pi i (u - n tau)}/(e^{2 pi i (u - n tau)} - 1) and
/// 2i/(e^{...} - 1); the naive difference of cot against +-i cancels
/// catastrophically on the growing side of the sum and floors near 1e-10.
inline AveragingResult averaging_partial_sum(Cx u, const DynamicalParam& dyn,
                                             const ThetaSeries& ts, int N) {
  if (N < 0) throw std::invalid_argument("averaging_partial_sum: N must be >= 0");
  Cx tau = ts.tau(), l = dyn.lambda;
  if (!(l.imag() > -tau.imag() && l.imag() < 0.0))
    throw std::domain_error("averaging_partial_sum: Im(lambda) outside (-Im tau, 0)");
  require_off_lattice(u, ts, "averaging_partial_sum: u");
  Cx sum_p = 0.0, sum_m = 0.0, sum_c = 0.0;
  for (int n = -N; n <= N; ++n) {
    Cx zn = u - static_cast<double>(n) * tau;
    Cx e = std::exp(2.0 * kPi * kI * zn);
    if (std::abs(e - 1.0) < 1e-10)
      throw PoleError("averaging_partial_sum: u - n tau on a lattice line");
    sum_p += kPi * 2.0 * kI *
             std::exp(2.0 * kPi * kI * (zn - static_cast<double>(n) * l)) / (e - 1.0);
    sum_m += kPi * 2.0 * kI * std::exp(2.0 * kPi * kI * static_cast<double>(n) * l) / (e - 1.0);
    sum_c += kPi * detail::cot(kPi * zn);
  }
  double rp = std::abs(sum_p - green_ratio(u, l, ts));
  double rm = std::abs(sum_m - green_ratio(u, -l, ts));
  double rc = std::abs(sum_c - theta_derivative(u, 1, ts) / theta(u, ts));
  return {sum_p, std::max(rp, rm), rc};
}

}  // namespace latlab
