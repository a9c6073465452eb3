#pragma once

// DWBC partition functions of the finite 6-vertex and SOS models by the two
// mechanical routes: exhaustive configuration enumeration (the oracle, tiny
// n) and column transfer-matrix contraction.
//
// Geometry (following the lattice figures): columns are numbered i = 1..n
// right to left, rows j = 1..n bottom to top.  At vertex (i,j) the sign
// alpha sits on the top edge, beta on the right, gamma on the bottom, delta
// on the left, and the entry R^{alpha beta}_{gamma delta} is the Boltzmann
// weight.  DWBC fix alpha_{i,n} = +, gamma_{i,1} = -, delta_{n,j} = +,
// beta_{1,j} = -.
//
// For the SOS model the weight at (i,j) is R(u_i - v_j; hbar*d_{ij}) with
// d_{ij} the height of the face up-left of the vertex; heights follow from
// the edge signs and the fixed corner height d_{nn} = lambda/hbar via
//   alpha_{ij} = d_{i-1,j} - d_{ij},   delta_{ij} = d_{i,j-1} - d_{ij}.
// The engines work purely in edge signs; heights are derived data.

#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "latlab/numeric.hpp"
#include "latlab/rmatrix.hpp"
#include "latlab/tensor2.hpp"
#include "latlab/theta.hpp"

namespace latlab {

struct LatticeInstance {
  int n = 0;
  std::vector<Cx> u;  // column parameters (z_i for the 6-vertex model)
  std::vector<Cx> v;  // row parameters (w_j)
  AnisotropyParam aniso;
  std::optional<DynamicalParam> dyn;  // absent => 6-vertex
  std::optional<ThetaSeries> ts;      // required for SOS

  LatticeInstance(int n_, std::vector<Cx> u_, std::vector<Cx> v_, AnisotropyParam an)
      : n(n_), u(std::move(u_)), v(std::move(v_)), aniso(an) {
    check_sizes();
  }
  LatticeInstance(int n_, std::vector<Cx> u_, std::vector<Cx> v_, AnisotropyParam an,
                  DynamicalParam d, ThetaSeries series)
      : n(n_), u(std::move(u_)), v(std::move(v_)), aniso(an), dyn(d), ts(std::move(series)) {
    check_sizes();
    // all theta(lambda + k hbar), |k| <= n, must clear the genericity gate
    for (int k = -n; k <= n; ++k)
      require_off_lattice(dyn->lambda + static_cast<double>(k) * aniso.hbar, *ts,
                          "LatticeInstance: lambda + k*hbar");
  }

  bool is_sos() const { return dyn.has_value(); }

 private:
  void check_sizes() const {
    if (n < 1) throw std::invalid_argument("LatticeInstance: n must be >= 1");
    if (static_cast<int>(u.size()) != n || static_cast<int>(v.size()) != n)
      throw std::invalid_argument("LatticeInstance: u, v must have length n");
  }
};

namespace detail {

// Depth-first sweep over vertices, rows top to bottom and columns left to
// right, branching on the two ice-rule-compatible sign choices per vertex.
// `weight(i, j, a, b, g, d, height)` returns the vertex factor; `height` is
// d_{ij} (ignored in the 6-vertex case).
template <typename WeightFn>
Cx enumerate_dwbc(int n, double corner_height, const WeightFn& weight) {
  // per-vertex stored signs; index (i-1) + (j-1)*n
  std::vector<int> alpha(static_cast<std::size_t>(n) * n), beta(alpha.size()),
      gamma(alpha.size()), delta(alpha.size());
  std::vector<double> height(alpha.size());
  Cx total = 0.0;
  const auto at = [n](int i, int j) { return static_cast<std::size_t>((i - 1) + (j - 1) * n); };

  struct Frame {
    int i, j;
  };
  std::vector<Frame> order;
  for (int j = n; j >= 1; --j)
    for (int i = n; i >= 1; --i) order.push_back({i, j});

  std::function<void(std::size_t, Cx)> walk = [&](std::size_t k, Cx acc) {
    if (k == order.size()) {
      total += acc;
      return;
    }
    int i = order[k].i, j = order[k].j;
    int a = (j == n) ? +1 : gamma[at(i, j + 1)];
    int d = (i == n) ? +1 : beta[at(i + 1, j)];
    double h;
    if (i == n && j == n)
      h = corner_height;
    else if (i < n)
      h = height[at(i + 1, j)] + alpha[at(i + 1, j)];
    else
      h = height[at(n, j + 1)] + delta[at(n, j + 1)];
    height[at(i, j)] = h;
    for (int g : {+1, -1}) {
      int b = g + d - a;
      if (b != 1 && b != -1) continue;
      if (j == 1 && g != -1) continue;
      if (i == 1 && b != -1) continue;
      Cx w = weight(i, j, a, b, g, d, h);
      if (w == Cx(0.0)) continue;
      alpha[at(i, j)] = a;
      beta[at(i, j)] = b;
      gamma[at(i, j)] = g;
      delta[at(i, j)] = d;
      walk(k + 1, acc * w);
    }
  };
  walk(0, Cx(1.0));
  return total;
}

// Apply one column operator T^{+}_{-}(x_i, {v}) to a 2^n state vector.
// `rmat(j, state_bits)` returns the 4x4 weight for row j given the current
// row-sign bits (used for the SOS dynamical argument).
template <typename RFn>
std::vector<Cx> apply_column(int n, const std::vector<Cx>& vec, const RFn& rmat) {
  std::size_t dim = std::size_t{1} << n;
  // auxiliary sign occupies the extra top bit; start in aux = '-'
  std::vector<Cx> big(dim * 2, Cx(0.0));
  for (std::size_t s = 0; s < dim; ++s) big[dim + s] = vec[s];
  for (int j = 1; j <= n; ++j) {
    std::vector<Cx> next(dim * 2, Cx(0.0));
    for (std::size_t st = 0; st < dim * 2; ++st) {
      Cx amp = big[st];
      if (amp == Cx(0.0)) continue;
      int ab = static_cast<int>(st >> n) & 1;
      int rb = static_cast<int>(st >> (j - 1)) & 1;
      const TensorMatrix2 r = rmat(j, st & (dim - 1));
      int col = (ab << 1) | rb;
      for (int ro = 0; ro < 4; ++ro) {
        Cx val = r(ro, col);
        if (val == Cx(0.0)) continue;
        std::size_t ns = (st & ~((std::size_t{1} << n) | (std::size_t{1} << (j - 1)))) |
                         (static_cast<std::size_t>(ro >> 1) << n) |
                         (static_cast<std::size_t>(ro & 1) << (j - 1));
        next[ns] += val * amp;
      }
    }
    big = std::move(next);
  }
  return {big.begin(), big.begin() + static_cast<std::ptrdiff_t>(dim)};  // aux = '+'
}

}  // namespace detail

/// Oracle route: sum over all ice-rule configurations, n <= 4.
inline Cx enumerate_sixvertex(const LatticeInstance& inst) {
  if (inst.is_sos()) throw std::invalid_argument("enumerate_sixvertex: instance has dyn set");
  if (inst.n > 4) throw std::invalid_argument("enumerate_sixvertex: n exceeds oracle cap 4");
  return detail::enumerate_dwbc(inst.n, 0.0, [&](int i, int j, int a, int b, int g, int d, double) {
    TensorMatrix2 r = r_sixvertex(inst.u[static_cast<std::size_t>(i - 1)],
                                  inst.v[static_cast<std::size_t>(j - 1)], inst.aniso);
    return r(pair_index(a, b), pair_index(g, d));
  });
}

/// Oracle route for the SOS model, n <= 4.
inline Cx enumerate_sos(const LatticeInstance& inst) {
  if (!inst.is_sos()) throw std::invalid_argument("enumerate_sos: instance has no dyn");
  if (inst.n > 4) throw std::invalid_argument("enumerate_sos: n exceeds oracle cap 4");
  const Cx hbar = inst.aniso.hbar;
  double corner = 0.0;  // heights carried as d - lambda/hbar offsets below
  return detail::enumerate_dwbc(
      inst.n, corner, [&](int i, int j, int a, int b, int g, int d, double hoff) {
        Cx lam_ij = inst.dyn->lambda + hbar * hoff;  // hbar*d_{ij} with d_{nn}=lambda/hbar
        TensorMatrix2 r = r_felder(inst.u[static_cast<std::size_t>(i - 1)] -
                                       inst.v[static_cast<std::size_t>(j - 1)],
                                   DynamicalParam(lam_ij), inst.aniso, *inst.ts);
        return r(pair_index(a, b), pair_index(g, d));
      });
}

/// Column transfer-matrix contraction, n <= 12:
/// Z = (T(u_1) ... T(u_n))^{- ... -}_{+ ... +}.
inline Cx transfer_sixvertex(const LatticeInstance& inst) {
  if (inst.is_sos()) throw std::invalid_argument("transfer_sixvertex: instance has dyn set");
  if (inst.n > 12) throw std::invalid_argument("transfer_sixvertex: n exceeds cap 12");
  int n = inst.n;
  std::size_t dim = std::size_t{1} << n;
  std::vector<Cx> vec(dim, Cx(0.0));
  vec[0] = 1.0;  // all '+': the left-boundary deltas
  for (int i = n; i >= 1; --i) {
    std::vector<TensorMatrix2> rows;
    rows.reserve(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j)
      rows.push_back(r_sixvertex(inst.u[static_cast<std::size_t>(i - 1)],
                                 inst.v[static_cast<std::size_t>(j - 1)], inst.aniso));
    vec = detail::apply_column(n, vec, [&](int j, std::size_t) -> const TensorMatrix2& {
      return rows[static_cast<std::size_t>(j - 1)];
    });
  }
  return vec[dim - 1];  // all '-' output
}

/// Column transfer-matrix contraction for the SOS model, n <= 10.  Column i
/// carries lambda_i = lambda + hbar (n-i); within the column the j-th factor
/// is evaluated at lambda_i + hbar * sum_{l>j} eps_l on each sign sector.
inline Cx transfer_sos(const LatticeInstance& inst) {
  if (!inst.is_sos()) throw std::invalid_argument("transfer_sos: instance has no dyn");
  if (inst.n > 10) throw std::invalid_argument("transfer_sos: n exceeds cap 10");
  int n = inst.n;
  const Cx hbar = inst.aniso.hbar;
  std::size_t dim = std::size_t{1} << n;
  std::vector<Cx> vec(dim, Cx(0.0));
  vec[0] = 1.0;
  for (int i = n; i >= 1; --i) {
    Cx lam_i = inst.dyn->lambda + hbar * static_cast<double>(n - i);
    // per (row j, tail sign sum) weight tables; m = sum_{l>j} eps_l has the
    // same parity as n - j, |m| <= n - j
    std::vector<std::vector<TensorMatrix2>> table(static_cast<std::size_t>(n) + 1);
    for (int j = 1; j <= n; ++j) {
      auto& slot = table[static_cast<std::size_t>(j)];
      slot.resize(static_cast<std::size_t>(n - j) + 1);
      for (int k = 0; k <= n - j; ++k) {  // m = -(n-j) + 2k
        int m = -(n - j) + 2 * k;
        slot[static_cast<std::size_t>(k)] =
            r_felder(inst.u[static_cast<std::size_t>(i - 1)] -
                         inst.v[static_cast<std::size_t>(j - 1)],
                     DynamicalParam(lam_i + hbar * static_cast<double>(m)), inst.aniso,
                     *inst.ts);
      }
    }
    vec = detail::apply_column(n, vec, [&](int j, std::size_t bits) -> const TensorMatrix2& {
      int m = 0;
      for (int l = j + 1; l <= n; ++l) m += ((bits >> (l - 1)) & 1) ? -1 : 1;
      return table[static_cast<std::size_t>(j)][static_cast<std::size_t>((m + (n - j)) / 2)];
    });
  }
  return vec[dim - 1];
}

}  // namespace latlab
