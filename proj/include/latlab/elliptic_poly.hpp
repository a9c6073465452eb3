#pragma once

// Elliptic polynomials of degree n with character chi: entire functions with
//   f(u+1)   = chi(1) f(u)
//   f(u+tau) = chi(tau) exp(-2 pi i n u - pi i n tau) f(u).
// For n > 0 the space is n-dimensional; a member is fixed by its values at n
// generic nodes, which is what the interpolation formula below implements.
// The module also carries the two theta identities (Fay, addition formula)
// that the partition-function manipulations rest on.

#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "latlab/numeric.hpp"
#include "latlab/theta.hpp"

namespace latlab {

struct Character {
  int degree = 0;
  Cx chi1;
  Cx chi_tau;
  Cx alpha;  // chi(tau) = (-1)^n exp(2 pi i alpha) when chi(1) = (-1)^n

  /// The character with chi(1) = (-1)^n, chi(tau) = (-1)^n e^{2 pi i alpha}.
  static Character standard(int n, Cx alpha) {
    Character c;
    c.degree = n;
    c.chi1 = (n % 2) ? -1.0 : 1.0;
    c.chi_tau = c.chi1 * std::exp(2.0 * kPi * kI * alpha);
    c.alpha = alpha;
    return c;
  }
};

struct NodeSet {
  std::vector<Cx> nodes;
  Cx alpha;

  Cx sum() const {
    Cx s = 0.0;
    for (Cx x : nodes) s += x;
    return s;
  }

  /// Pairwise differences and sum(nodes) - alpha must be off the lattice.
  void validate(const ThetaSeries& ts) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (std::size_t j = i + 1; j < nodes.size(); ++j)
        require_off_lattice(nodes[i] - nodes[j], ts, "NodeSet: coincident nodes");
    require_off_lattice(sum() - alpha, ts, "NodeSet: sum(nodes)-alpha on lattice");
  }
};

/// (|f(u+1) - chi(1) f(u)|, |f(u+tau) - chi(tau) e^{-2 pi i n u - pi i n tau} f(u)|).
inline std::pair<double, double> character_residuals(
    const std::function<Cx(Cx)>& f, const Character& chi, Cx u, const ThetaSeries& ts) {
  Cx fu = f(u);
  double r1 = std::abs(f(u + 1.0) - chi.chi1 * fu);
  Cx mult = chi.chi_tau *
            std::exp(-2.0 * kPi * kI * static_cast<double>(chi.degree) * u -
                     kPi * kI * static_cast<double>(chi.degree) * ts.tau());
  double r2 = std::abs(f(u + ts.tau()) - mult * fu);
  return {r1, r2};
}

/// Reconstruct P from its nodal values:
///   P(u) = sum_i P(u_i) theta(u_i - u + alpha - S)/theta(alpha - S)
///          prod_{k != i} theta(u_k - u)/theta(u_k - u_i),   S = sum(nodes).
inline std::function<Cx(Cx)> interpolate(std::span<const Cx> values, const NodeSet& nodes,
                                         const Character& chi, const ThetaSeries& ts) {
  if (values.size() != nodes.nodes.size())
    throw std::invalid_argument("interpolate: values/nodes size mismatch");
  if (chi.degree != static_cast<int>(nodes.nodes.size()))
    throw std::invalid_argument("interpolate: character degree != node count");
  // chi must agree with the nodes' alpha (mod Z, automatically via exp)
  if (std::abs(chi.chi_tau - chi.chi1 * std::exp(2.0 * kPi * kI * nodes.alpha)) >
      1e-8 * std::max(1.0, std::abs(chi.chi_tau)))
    throw std::invalid_argument("interpolate: character inconsistent with the nodes' alpha");
  nodes.validate(ts);
  std::vector<Cx> vals(values.begin(), values.end());
  std::vector<Cx> nd = nodes.nodes;
  Cx S = nodes.sum();
  Cx alpha = nodes.alpha;
  Cx den0 = theta(alpha - S, ts);
  return [vals, nd, S, alpha, den0, ts](Cx u) {
    Cx tot = 0.0;
    for (std::size_t i = 0; i < nd.size(); ++i) {
      Cx t = vals[i] * theta(nd[i] - u + alpha - S, ts) / den0;
      for (std::size_t k = 0; k < nd.size(); ++k) {
        if (k == i) continue;
        t *= theta(nd[k] - u, ts) / theta(nd[k] - nd[i], ts);
      }
      tot += t;
    }
    return tot;
  };
}

/// det||phi_j(u_i)|| / (theta(sum u_k - alpha) prod_{i<j} theta(u_i - u_j)).
/// For a basis of Theta_n(chi) this ratio is a node-independent constant.
/// Membership in Theta_n(chi) is caller-asserted and only spot-checked at
/// three fixed points via character_residuals.
inline Cx elliptic_vandermonde_ratio(std::span<const std::function<Cx(Cx)>> basis,
                                     const NodeSet& nodes, const ThetaSeries& ts) {
  int n = static_cast<int>(nodes.nodes.size());
  if (static_cast<int>(basis.size()) != n)
    throw std::invalid_argument("elliptic_vandermonde_ratio: basis/node size mismatch");
  nodes.validate(ts);
  Character chi = Character::standard(n, nodes.alpha);
  double h = ts.tau().imag();
  for (const auto& phi : basis)
    for (Cx probe : {Cx(0.211, 0.173 * h), Cx(0.457, 0.091 * h), Cx(0.683, 0.139 * h)}) {
      auto [r1, r2] = character_residuals(phi, chi, probe, ts);
      double scale = std::max(1.0, std::abs(phi(probe)));
      if (r1 / scale > 1e-6 || r2 / scale > 1e-6)
        throw std::invalid_argument(
            "elliptic_vandermonde_ratio: basis member fails the Theta_n(chi) spot check");
    }
  std::vector<Cx> m(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[static_cast<std::size_t>(i) * n + j] = basis[j](nodes.nodes[i]);
  Cx den = theta(nodes.sum() - nodes.alpha, ts);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) den *= theta(nodes.nodes[i] - nodes.nodes[j], ts);
  if (std::abs(den) < 1e-12)
    throw PoleError("elliptic_vandermonde_ratio: denominator below tolerance");
  return det(std::move(m), n) / den;
}

/// G_lambda(x) = theta(x + lambda) / (theta(x) theta(lambda)).
inline Cx green_ratio(Cx x, Cx lambda, const ThetaSeries& ts) {
  return theta(x + lambda, ts) / (theta(x, ts) * theta(lambda, ts));
}

/// d/dlambda of G_lambda(x), by analytic theta derivatives.
inline Cx green_ratio_dlambda(Cx x, Cx lambda, const ThetaSeries& ts) {
  Cx th_l = theta(lambda, ts);
  return (theta_derivative(x + lambda, 1, ts) * th_l -
          theta(x + lambda, ts) * theta_derivative(lambda, 1, ts)) /
         (theta(x, ts) * th_l * th_l);
}

/// Residual of   sum_i prod_{j!=i} G_{l_j}(u_j-u_i) G_{l_0}(u_i-v) =
///               prod_i G_{l_i}(u_i-v),   l_0 = sum l_i.
inline double addition_formula_residual(std::span<const Cx> points, std::span<const Cx> lambdas,
                                        Cx v, const ThetaSeries& ts) {
  if (points.size() != lambdas.size())
    throw std::invalid_argument("addition_formula_residual: size mismatch");
  Cx l0 = 0.0;
  for (Cx l : lambdas) l0 += l;
  require_off_lattice(l0, ts, "addition_formula_residual: lambda_0");
  for (std::size_t i = 0; i < points.size(); ++i) {
    require_off_lattice(lambdas[i], ts, "addition_formula_residual: lambda_i");
    require_off_lattice(points[i] - v, ts, "addition_formula_residual: u_i - v");
    for (std::size_t j = i + 1; j < points.size(); ++j)
      require_off_lattice(points[i] - points[j], ts, "addition_formula_residual: u_i - u_j");
  }
  Cx lhs = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    Cx t = green_ratio(points[i] - v, l0, ts);
    for (std::size_t j = 0; j < points.size(); ++j)
      if (j != i) t *= green_ratio(points[j] - points[i], lambdas[j], ts);
    lhs += t;
  }
  Cx rhs = 1.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    rhs *= green_ratio(points[i] - v, lambdas[i], ts);
  return rel_residual(lhs, rhs);
}

/// Residual of the degenerated Fay identity
///   G_l(u-z) G_l(z) = G_l(u) theta'(u-z)/theta(u-z) + G_l(u) theta'(z)/theta(z)
///                     - d/dl G_l(u).
inline double fay_residual(Cx u, Cx z, Cx lam, const ThetaSeries& ts) {
  require_off_lattice(u, ts, "fay_residual: u");
  require_off_lattice(z, ts, "fay_residual: z");
  require_off_lattice(u - z, ts, "fay_residual: u-z");
  require_off_lattice(lam, ts, "fay_residual: lambda");
  Cx lhs = green_ratio(u - z, lam, ts) * green_ratio(z, lam, ts);
  Cx rhs = green_ratio(u, lam, ts) * theta_derivative(u - z, 1, ts) / theta(u - z, ts) +
           green_ratio(u, lam, ts) * theta_derivative(z, 1, ts) / theta(z, ts) -
           green_ratio_dlambda(u, lam, ts);
  return rel_residual(lhs, rhs);
}

}  // namespace latlab
