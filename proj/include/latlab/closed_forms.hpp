#pragma once

// Closed-form DWBC partition functions and the recursion residuals that
// characterize them:
//
//   izergin                      determinant form (6-vertex)
//   sixvertex_projection_formula permutation sum from the projection kernel
//   trig_kernel / q_symmetrized_kernel   the kernels behind it
//   sos_formula                  elliptic permutation sum
//   trig_sos_formula             its trigonometric degeneration
//   elliptic_projection_kernel   integrand of the elliptic projection
//   korepin_residual_*           recursion residuals for any Z route
//
// Permutation sums iterate S_n in lexicographic order, partitioned by the
// first entry so the reduction order (and hence the result, bitwise) is
// independent of the worker count.  LATTICE_LAB_THREADS caps the workers.
//
// Coincident spectral points are refused at the 1e-8 gate rather than
// resolved by symmetric limits; random instances avoid them with
// probability 1.

#include <algorithm>
#include <complex>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <vector>

#include "latlab/lattice.hpp"
#include "latlab/numeric.hpp"
#include "latlab/theta.hpp"

namespace latlab {

inline int worker_cap() {
  if (const char* env = std::getenv("LATTICE_LAB_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

namespace detail {

inline void require_separated(Cx a, Cx b, const char* what) {
  if (std::abs(a - b) < 1e-8) throw PoleError(std::string(what) + ": coincident parameters");
}

inline constexpr long kFactorial[10] = {1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362880};

/// Deterministic parallel sum of term(perm) over S_n in lexicographic order.
/// Blocks are the cosets with fixed first entry; block sums are accumulated
/// in first-entry order regardless of how many threads ran them.
template <typename TermFn>
Cx permutation_sum(int n, const TermFn& term) {
  if (n > 9) throw std::invalid_argument("permutation_sum: n exceeds the n! cap (9)");
  std::vector<Cx> block(static_cast<std::size_t>(n), Cx(0.0));
  auto run_block = [&](int first) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    perm[0] = first;
    int k = 1;
    for (int v = 0; v < n; ++v)
      if (v != first) perm[static_cast<std::size_t>(k++)] = v;
    Cx acc = 0.0;
    do {
      acc += term(perm);
    } while (std::next_permutation(perm.begin() + 1, perm.end()));
    block[static_cast<std::size_t>(first)] = acc;
  };
  int workers = std::min(worker_cap(), n);
  if (workers <= 1 || n <= 3) {
    for (int f = 0; f < n; ++f) run_block(f);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t)
      pool.emplace_back([&, t] {
        for (int f = t; f < n; f += workers) run_block(f);
      });
    for (auto& th : pool) th.join();
  }
  Cx total = 0.0;
  for (int f = 0; f < n; ++f) total += block[static_cast<std::size_t>(f)];
  return total;
}

}  // namespace detail

/// Izergin determinant:
///   Z = (q - q^{-1})^n prod w_m
///       prod_{ij}(z_i - w_j)(q z_i - q^{-1} w_j)
///       / prod_{i>j}(z_i - z_j)(w_j - w_i)
///       det|| 1/((z_i - w_j)(q z_i - q^{-1} w_j)) ||.
inline Cx izergin(const LatticeInstance& inst) {
  if (inst.is_sos()) throw std::invalid_argument("izergin: instance has dyn set");
  if (inst.n > 12) throw std::invalid_argument("izergin: n exceeds cap 12");
  int n = inst.n;
  Cx q = inst.aniso.q;
  const auto& z = inst.u;
  const auto& w = inst.v;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i < j) {
        detail::require_separated(z[i], z[j], "izergin: z_i - z_j");
        detail::require_separated(w[i], w[j], "izergin: w_i - w_j");
      }
      detail::require_separated(z[i], w[j], "izergin: z_i - w_j");
      // q z_i - q^{-1} w_j = 0 is the Korepin recursion point; the zero of
      // the prefactor cancels the determinant pole stably, so only an exact
      // zero is refused.
      if (std::abs(q * z[i] - w[j] / q) < 1e-300)
        throw PoleError("izergin: q z_i - q^{-1} w_j vanishes exactly");
    }
  Cx pref = 1.0;
  for (int m = 0; m < n; ++m) pref *= (q - 1.0 / q) * w[m];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) pref *= (z[i] - w[j]) * (q * z[i] - w[j] / q);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) pref /= (z[i] - z[j]) * (w[j] - w[i]);
  std::vector<Cx> mat(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      mat[static_cast<std::size_t>(i) * n + j] =
          1.0 / ((z[i] - w[j]) * (q * z[i] - w[j] / q));
  return pref * det(std::move(mat), n);
}

/// Projection kernel K(u;v) = prod v_m prod_{k>j} (u_k-u_j)/(q u_k - q^{-1} u_j)
///   prod_k prod_{i>k}(q u_i - q^{-1} v_k) / prod_{i>=k}(u_i - v_k).
inline Cx trig_kernel(const std::vector<Cx>& u, const std::vector<Cx>& v,
                      const AnisotropyParam& an) {
  int n = static_cast<int>(u.size());
  if (static_cast<int>(v.size()) != n) throw std::invalid_argument("trig_kernel: size mismatch");
  Cx q = an.q;
  for (int k = 0; k < n; ++k)
    for (int i = k; i < n; ++i) detail::require_separated(u[i], v[k], "trig_kernel: u_i - v_k");
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < k; ++j)
      detail::require_separated(q * u[k], u[j] / q, "trig_kernel: q u_k - q^{-1} u_j");
  Cx out = 1.0;
  for (int m = 0; m < n; ++m) out *= v[m];
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < k; ++j) out *= (u[k] - u[j]) / (q * u[k] - u[j] / q);
  for (int k = 0; k < n; ++k) {
    for (int i = k + 1; i < n; ++i) out *= (q * u[i] - v[k] / q);
    for (int i = k; i < n; ++i) out /= (u[i] - v[k]);
  }
  return out;
}

/// q-symmetrized kernel
///   K(u,v) = sum_sigma prod_{i<j, s(i)>s(j)} (q v_{s(i)} - q^{-1} v_{s(j)})
///            / (q^{-1} v_{s(i)} - q v_{s(j)})  K(u; v^sigma).
inline Cx q_symmetrized_kernel(const std::vector<Cx>& u, const std::vector<Cx>& v,
                               const AnisotropyParam& an) {
  int n = static_cast<int>(u.size());
  if (static_cast<int>(v.size()) != n)
    throw std::invalid_argument("q_symmetrized_kernel: size mismatch");
  if (n > 9) throw std::invalid_argument("q_symmetrized_kernel: n exceeds the n! cap (9)");
  Cx q = an.q;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j)
        detail::require_separated(q * v[i], v[j] / q, "q_symmetrized_kernel: q v_i - q^{-1} v_j");
  // inversion pair table and K(u; v^sigma) factor tables
  std::vector<Cx> inv(static_cast<std::size_t>(n) * n, Cx(1.0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b)
        inv[static_cast<std::size_t>(a) * n + b] = (q * v[a] - v[b] / q) / (v[a] / q - q * v[b]);
  // K(u; v^s) = prod v_m * C_u * prod_k N[k][s(k)] / D[k][s(k)]
  Cx cu = 1.0;
  for (int m = 0; m < n; ++m) cu *= v[m];
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < k; ++j) cu *= (u[k] - u[j]) / (q * u[k] - u[j] / q);
  std::vector<Cx> ratio(static_cast<std::size_t>(n) * n, Cx(1.0));
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m) {
      Cx t = 1.0;
      for (int i = k + 1; i < n; ++i) t *= (q * u[i] - v[m] / q);
      for (int i = k; i < n; ++i) {
        detail::require_separated(u[i], v[m], "q_symmetrized_kernel: u_i - v_m");
        t /= (u[i] - v[m]);
      }
      ratio[static_cast<std::size_t>(k) * n + m] = t;
    }
  return detail::permutation_sum(n, [&](const std::vector<int>& s) {
    Cx t = cu;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (s[static_cast<std::size_t>(i)] > s[static_cast<std::size_t>(j)])
          t *= inv[static_cast<std::size_t>(s[static_cast<std::size_t>(i)]) * n +
                   s[static_cast<std::size_t>(j)]];
    for (int k = 0; k < n; ++k)
      t *= ratio[static_cast<std::size_t>(k) * n + s[static_cast<std::size_t>(k)]];
    return t;
  });
}

/// Explicit permutation-sum form of the 6-vertex DWBC partition function:
///   Z = (q-q^{-1})^n prod w_m prod_{k>j} (q^{-1} w_k - q w_j)/(w_k - w_j)
///       sum_sigma [inversion weights] prod_{i>k}(q z_i - q^{-1} w_{s(k)})
///                                     prod_{i<k}(z_i - w_{s(k)}).
inline Cx sixvertex_projection_formula(const LatticeInstance& inst) {
  if (inst.is_sos())
    throw std::invalid_argument("sixvertex_projection_formula: instance has dyn set");
  if (inst.n > 9)
    throw std::invalid_argument("sixvertex_projection_formula: n exceeds the n! cap (9)");
  int n = inst.n;
  Cx q = inst.aniso.q;
  const auto& z = inst.u;
  const auto& w = inst.v;
  Cx pref = 1.0;
  for (int m = 0; m < n; ++m) pref *= (q - 1.0 / q) * w[m];
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < k; ++j) {
      detail::require_separated(w[k], w[j], "sixvertex_projection_formula: w_k - w_j");
      pref *= (w[k] / q - q * w[j]) / (w[k] - w[j]);
    }
  std::vector<Cx> inv(static_cast<std::size_t>(n) * n, Cx(1.0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b) {
        detail::require_separated(w[a] / q, q * w[b],
                                  "sixvertex_projection_formula: q^{-1} w_a - q w_b");
        inv[static_cast<std::size_t>(a) * n + b] = (q * w[a] - w[b] / q) / (w[a] / q - q * w[b]);
      }
  // position-k factor for value m: prod_{i>k}(q z_i - q^{-1} w_m) prod_{i<k}(z_i - w_m)
  std::vector<Cx> pos(static_cast<std::size_t>(n) * n, Cx(1.0));
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m) {
      Cx t = 1.0;
      for (int i = k + 1; i < n; ++i) t *= (q * z[i] - w[m] / q);
      for (int i = 0; i < k; ++i) t *= (z[i] - w[m]);
      pos[static_cast<std::size_t>(k) * n + m] = t;
    }
  return pref * detail::permutation_sum(n, [&](const std::vector<int>& s) {
           Cx t = 1.0;
           for (int i = 0; i < n; ++i)
             for (int j = i + 1; j < n; ++j)
               if (s[static_cast<std::size_t>(i)] > s[static_cast<std::size_t>(j)])
                 t *= inv[static_cast<std::size_t>(s[static_cast<std::size_t>(i)]) * n +
                          s[static_cast<std::size_t>(j)]];
           for (int k = 0; k < n; ++k)
             t *= pos[static_cast<std::size_t>(k) * n + s[static_cast<std::size_t>(k)]];
           return t;
         });
}

/// Integrand of the elliptic projection of n currents:
///   prod_{k>m} theta(u_k-u_m)/theta(u_k-u_m+h)
///   prod_{k>m} theta(u_k-v_m+h)/theta(u_k-v_m)
///   prod_m theta(u_m-v_m-lambda-(m-1)h) / (theta(u_m-v_m) theta(-lambda-(m-1)h)).
inline Cx elliptic_projection_kernel(const std::vector<Cx>& u, const std::vector<Cx>& v,
                                     const DynamicalParam& dyn, const AnisotropyParam& an,
                                     const ThetaSeries& ts) {
  int n = static_cast<int>(u.size());
  if (static_cast<int>(v.size()) != n)
    throw std::invalid_argument("elliptic_projection_kernel: size mismatch");
  Cx h = an.hbar, lam = dyn.lambda;
  Cx out = 1.0;
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < k; ++m) {
      require_off_lattice(u[k] - u[m] + h, ts, "elliptic_projection_kernel: u_k - u_m + h");
      require_off_lattice(u[k] - v[m], ts, "elliptic_projection_kernel: u_k - v_m");
      out *= theta(u[k] - u[m], ts) / theta(u[k] - u[m] + h, ts);
      out *= theta(u[k] - v[m] + h, ts) / theta(u[k] - v[m], ts);
    }
  for (int m = 0; m < n; ++m) {
    Cx lm = lam + static_cast<double>(m) * h;
    require_off_lattice(-lm, ts, "elliptic_projection_kernel: lambda + m h");
    require_off_lattice(u[m] - v[m], ts, "elliptic_projection_kernel: u_m - v_m");
    out *= theta(u[m] - v[m] - lm, ts) / (theta(u[m] - v[m], ts) * theta(-lm, ts));
  }
  return out;
}

/// SOS DWBC partition function as a permutation sum:
///   Z = prod_{k>m} theta(v_k-v_m-h)/theta(v_k-v_m)
///       sum_sigma prod_{inv} theta(v_a-v_b+h)/theta(v_a-v_b-h)
///       prod_{k<m} theta(u_k-v_{s(m)}) prod_{k>m} theta(u_k-v_{s(m)}+h)
///       prod_m theta(u_m-v_{s(m)}-lambda-(m-1)h) theta(h)/theta(-lambda-(m-1)h).
inline Cx sos_formula(const LatticeInstance& inst) {
  if (!inst.is_sos()) throw std::invalid_argument("sos_formula: instance has no dyn");
  if (inst.n > 9) throw std::invalid_argument("sos_formula: n exceeds the n! cap (9)");
  int n = inst.n;
  const ThetaSeries& ts = *inst.ts;
  Cx h = inst.aniso.hbar, lam = inst.dyn->lambda;
  const auto& u = inst.u;
  const auto& v = inst.v;
  Cx pref = 1.0;
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < k; ++m) {
      require_off_lattice(v[k] - v[m], ts, "sos_formula: v_k - v_m");
      pref *= theta(v[k] - v[m] - h, ts) / theta(v[k] - v[m], ts);
    }
  std::vector<Cx> inv(static_cast<std::size_t>(n) * n, Cx(1.0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b) {
        require_off_lattice(v[a] - v[b] - h, ts, "sos_formula: v_a - v_b - h");
        inv[static_cast<std::size_t>(a) * n + b] =
            theta(v[a] - v[b] + h, ts) / theta(v[a] - v[b] - h, ts);
      }
  Cx th_h = theta(h, ts);
  std::vector<Cx> pos(static_cast<std::size_t>(n) * n, Cx(1.0));
  for (int m = 0; m < n; ++m) {
    Cx lm = lam + static_cast<double>(m) * h;
    require_off_lattice(-lm, ts, "sos_formula: lambda + m h");
    Cx gden = theta(-lm, ts);
    for (int val = 0; val < n; ++val) {
      Cx t = theta(u[m] - v[val] - lm, ts) * th_h / gden;
      for (int k = 0; k < m; ++k) t *= theta(u[k] - v[val], ts);
      for (int k = m + 1; k < n; ++k) t *= theta(u[k] - v[val] + h, ts);
      pos[static_cast<std::size_t>(m) * n + val] = t;
    }
  }
  return pref * detail::permutation_sum(n, [&](const std::vector<int>& s) {
           Cx t = 1.0;
           for (int i = 0; i < n; ++i)
             for (int j = i + 1; j < n; ++j)
               if (s[static_cast<std::size_t>(i)] > s[static_cast<std::size_t>(j)])
                 t *= inv[static_cast<std::size_t>(s[static_cast<std::size_t>(i)]) * n +
                          s[static_cast<std::size_t>(j)]];
           for (int m = 0; m < n; ++m)
             t *= pos[static_cast<std::size_t>(m) * n + s[static_cast<std::size_t>(m)]];
           return t;
         });
}

/// Trigonometric SOS partition function in multiplicative variables
/// z = e^{2 pi i u}, w = e^{2 pi i v}, mu = e^{2 pi i lambda}; the instance
/// carries the additive parameters and is exponentiated here.
inline Cx trig_sos_formula(const LatticeInstance& inst) {
  if (!inst.is_sos()) throw std::invalid_argument("trig_sos_formula: instance has no dyn");
  if (inst.n > 9) throw std::invalid_argument("trig_sos_formula: n exceeds the n! cap (9)");
  int n = inst.n;
  Cx q = inst.aniso.q, mu = inst.dyn->mu;
  std::vector<Cx> z(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    z[static_cast<std::size_t>(i)] = std::exp(2.0 * kPi * kI * inst.u[static_cast<std::size_t>(i)]);
    w[static_cast<std::size_t>(i)] = std::exp(2.0 * kPi * kI * inst.v[static_cast<std::size_t>(i)]);
  }
  for (int m = 0; m < n; ++m) {
    Cx den = 1.0 - mu * std::pow(q, 2.0 * m);
    if (std::abs(den) < 1e-10) throw PoleError("trig_sos_formula: 1 - mu q^{2(m-1)} = 0");
  }
  Cx pref = 1.0;
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < k; ++m) {
      detail::require_separated(w[k], w[m], "trig_sos_formula: w_k - w_m");
      pref *= (w[k] / q - q * w[m]) / (w[k] - w[m]);
    }
  std::vector<Cx> inv(static_cast<std::size_t>(n) * n, Cx(1.0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b) inv[static_cast<std::size_t>(a) * n + b] =
          (q * w[a] - w[b] / q) / (w[a] / q - q * w[b]);
  std::vector<Cx> pos(static_cast<std::size_t>(n) * n, Cx(1.0));
  for (int m = 0; m < n; ++m) {
    Cx mum = mu * std::pow(q, 2.0 * m);
    for (int val = 0; val < n; ++val) {
      Cx t = (z[m] - mum * w[val]) * (q - 1.0 / q) / (1.0 - mum);
      for (int k = 0; k < m; ++k) t *= (z[k] - w[val]);
      for (int k = m + 1; k < n; ++k) t *= (q * z[k] - w[val] / q);
      pos[static_cast<std::size_t>(m) * n + val] = t;
    }
  }
  return pref * detail::permutation_sum(n, [&](const std::vector<int>& s) {
           Cx t = 1.0;
           for (int i = 0; i < n; ++i)
             for (int j = i + 1; j < n; ++j)
               if (s[static_cast<std::size_t>(i)] > s[static_cast<std::size_t>(j)])
                 t *= inv[static_cast<std::size_t>(s[static_cast<std::size_t>(i)]) * n +
                          s[static_cast<std::size_t>(j)]];
           for (int m = 0; m < n; ++m)
             t *= pos[static_cast<std::size_t>(m) * n + s[static_cast<std::size_t>(m)]];
           return t;
         });
}

/// Korepin recursion residual for the 6-vertex model.  The substitution
/// u_n = q^{-2} v_n kills the a-weight at vertex (n,n), forcing a c-bar
/// there and b-weights along the whole n-th column and row:
///   Z^{(n)}|_{u_n = q^{-2} v_n}
///     = (q - q^{-1}) v_n prod_{k<n} (u_k - v_n)(q^{-2} v_n - v_k) Z^{(n-1)}.
inline double korepin_residual_sixvertex(const LatticeInstance& inst,
                                         const std::function<Cx(const LatticeInstance&)>& Z) {
  if (inst.is_sos())
    throw std::invalid_argument("korepin_residual_sixvertex: instance has dyn set");
  if (inst.n < 2) throw std::invalid_argument("korepin_residual_sixvertex: need n >= 2");
  int n = inst.n;
  Cx q = inst.aniso.q;
  std::vector<Cx> z = inst.u;
  const auto& w = inst.v;
  z[static_cast<std::size_t>(n - 1)] = w[static_cast<std::size_t>(n - 1)] / (q * q);
  // rounding of w/q^2 usually leaves q z_n - q^{-1} w_n ~ 1 ulp away from the
  // determinant's removable zero; when it cancels exactly, shift by one ulp
  // (a ~1e-15 relative move, invisible at the residual tolerances)
  if (std::abs(q * z[static_cast<std::size_t>(n - 1)] - w[static_cast<std::size_t>(n - 1)] / q) ==
      0.0)
    z[static_cast<std::size_t>(n - 1)] *= 1.0 + 0x1.0p-50;
  LatticeInstance top(n, z, w, inst.aniso);
  Cx lhs = Z(top);
  Cx pref = (q - 1.0 / q) * w[static_cast<std::size_t>(n - 1)];
  for (int k = 0; k < n - 1; ++k)
    pref *= (z[static_cast<std::size_t>(k)] - w[static_cast<std::size_t>(n - 1)]) *
            (w[static_cast<std::size_t>(n - 1)] / (q * q) - w[static_cast<std::size_t>(k)]);
  LatticeInstance sub(n - 1, {z.begin(), z.end() - 1}, {w.begin(), w.end() - 1}, inst.aniso);
  return rel_residual(lhs, pref * Z(sub));
}

/// Korepin recursion residual for the SOS model:
///   Z^{(n)}|_{u_n = v_n - h} = theta(lambda+n h) theta(h)/theta(lambda+(n-1)h)
///     prod_{m<n} theta(v_n - v_m - h) theta(u_m - v_n)  Z^{(n-1)}.
inline double korepin_residual_sos(const LatticeInstance& inst,
                                   const std::function<Cx(const LatticeInstance&)>& Z) {
  if (!inst.is_sos()) throw std::invalid_argument("korepin_residual_sos: instance has no dyn");
  if (inst.n < 2) throw std::invalid_argument("korepin_residual_sos: need n >= 2");
  int n = inst.n;
  const ThetaSeries& ts = *inst.ts;
  Cx h = inst.aniso.hbar, lam = inst.dyn->lambda;
  std::vector<Cx> u = inst.u;
  const auto& v = inst.v;
  u[static_cast<std::size_t>(n - 1)] = v[static_cast<std::size_t>(n - 1)] - h;
  LatticeInstance top(n, u, v, inst.aniso, *inst.dyn, ts);
  Cx lhs = Z(top);
  Cx pref = theta(lam + static_cast<double>(n) * h, ts) * theta(h, ts) /
            theta(lam + static_cast<double>(n - 1) * h, ts);
  for (int m = 0; m < n - 1; ++m)
    pref *= theta(v[static_cast<std::size_t>(n - 1)] - v[static_cast<std::size_t>(m)] - h, ts) *
            theta(u[static_cast<std::size_t>(m)] - v[static_cast<std::size_t>(n - 1)], ts);
  LatticeInstance sub(n - 1, {u.begin(), u.end() - 1}, {v.begin(), v.end() - 1}, inst.aniso,
                      *inst.dyn, ts);
  return rel_residual(lhs, pref * Z(sub));
}

/// Inversion weight of the elliptic hbar-action:
///   prod_{l<l', s(l)>s(l')} theta(v_{s(l)} - v_{s(l')} - h)/theta(... + h).
inline Cx hbar_symmetrization_weight(const std::vector<int>& sigma, const std::vector<Cx>& v,
                                     Cx hbar, const ThetaSeries& ts) {
  int n = static_cast<int>(sigma.size());
  if (static_cast<int>(v.size()) != n)
    throw std::invalid_argument("hbar_symmetrization_weight: size mismatch");
  Cx out = 1.0;
  for (int l = 0; l < n; ++l)
    for (int lp = l + 1; lp < n; ++lp)
      if (sigma[static_cast<std::size_t>(l)] > sigma[static_cast<std::size_t>(lp)]) {
        Cx d = v[static_cast<std::size_t>(sigma[static_cast<std::size_t>(l)])] -
               v[static_cast<std::size_t>(sigma[static_cast<std::size_t>(lp)])];
        require_off_lattice(d + hbar, ts, "hbar_symmetrization_weight: v_a - v_b + h");
        out *= theta(d - hbar, ts) / theta(d + hbar, ts);
      }
  return out;
}

}  // namespace latlab
