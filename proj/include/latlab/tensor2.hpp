#pragma once

// 4x4 matrices on C^2 (x) C^2 with the fixed basis ordering
// (++, +-, -+, --); the row index is the upper (outgoing) sign pair, the
// column index the lower (incoming) one.  All R-matrices in the library are
// stored this way, and 3-leg embeddings into 8x8 are provided for the
// Yang-Baxter checks.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

#include "latlab/numeric.hpp"

namespace latlab {

/// Basis slot for a sign pair; s = +1 maps to bit 0, s = -1 to bit 1.
inline int pair_index(int s1, int s2) { return ((s1 < 0) << 1) | (s2 < 0); }

struct TensorMatrix2 {
  std::array<Cx, 16> m{};

  Cx& operator()(int r, int c) { return m[static_cast<std::size_t>(r * 4 + c)]; }
  Cx operator()(int r, int c) const { return m[static_cast<std::size_t>(r * 4 + c)]; }

  static TensorMatrix2 identity() {
    TensorMatrix2 e;
    for (int i = 0; i < 4; ++i) e(i, i) = 1.0;
    return e;
  }

  /// Permutation operator P(x (x) y) = y (x) x.
  static TensorMatrix2 permutation() {
    TensorMatrix2 p;
    p(0, 0) = 1.0;
    p(1, 2) = 1.0;
    p(2, 1) = 1.0;
    p(3, 3) = 1.0;
    return p;
  }

  TensorMatrix2 operator*(const TensorMatrix2& o) const {
    TensorMatrix2 r;
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) {
        Cx a = (*this)(i, k);
        if (a == Cx(0.0)) continue;
        for (int j = 0; j < 4; ++j) r(i, j) += a * o(k, j);
      }
    return r;
  }

  TensorMatrix2 operator-(const TensorMatrix2& o) const {
    TensorMatrix2 r;
    for (int i = 0; i < 16; ++i) r.m[static_cast<std::size_t>(i)] =
        m[static_cast<std::size_t>(i)] - o.m[static_cast<std::size_t>(i)];
    return r;
  }

  TensorMatrix2& operator*=(Cx s) {
    for (auto& x : m) x *= s;
    return *this;
  }

  double max_norm() const {
    double r = 0.0;
    for (const auto& x : m) r = std::max(r, std::abs(x));
    return r;
  }

  /// Structural ice rule: entries vanish unless the sign sums agree.
  bool ice_rule() const {
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        int sr = ((r >> 1) & 1) + (r & 1);  // number of '-' signs
        int sc = ((c >> 1) & 1) + (c & 1);
        if (sr != sc && (*this)(r, c) != Cx(0.0)) return false;
      }
    return true;
  }
};

struct Matrix8 {
  std::array<Cx, 64> m{};

  Cx& operator()(int r, int c) { return m[static_cast<std::size_t>(r * 8 + c)]; }
  Cx operator()(int r, int c) const { return m[static_cast<std::size_t>(r * 8 + c)]; }

  Matrix8 operator*(const Matrix8& o) const {
    Matrix8 r;
    for (int i = 0; i < 8; ++i)
      for (int k = 0; k < 8; ++k) {
        Cx a = (*this)(i, k);
        if (a == Cx(0.0)) continue;
        for (int j = 0; j < 8; ++j) r(i, j) += a * o(k, j);
      }
    return r;
  }

  Matrix8 operator-(const Matrix8& o) const {
    Matrix8 r;
    for (int i = 0; i < 64; ++i) r.m[static_cast<std::size_t>(i)] =
        m[static_cast<std::size_t>(i)] - o.m[static_cast<std::size_t>(i)];
    return r;
  }

  Matrix8 operator+(const Matrix8& o) const {
    Matrix8 r;
    for (int i = 0; i < 64; ++i) r.m[static_cast<std::size_t>(i)] =
        m[static_cast<std::size_t>(i)] + o.m[static_cast<std::size_t>(i)];
    return r;
  }

  double max_norm() const {
    double r = 0.0;
    for (const auto& x : m) r = std::max(r, std::abs(x));
    return r;
  }
};

inline Matrix8 commutator(const Matrix8& a, const Matrix8& b) { return a * b - b * a; }

/// Embed a two-leg operator into legs (a,b) of a three-fold product.
inline Matrix8 embed(const TensorMatrix2& r2, int leg_a, int leg_b) {
  Matrix8 out;
  int other = 3 - leg_a - leg_b;
  for (int i = 0; i < 8; ++i) {
    int si[3] = {(i >> 2) & 1, (i >> 1) & 1, i & 1};
    for (int j = 0; j < 8; ++j) {
      int sj[3] = {(j >> 2) & 1, (j >> 1) & 1, j & 1};
      if (si[other] != sj[other]) continue;
      out(i, j) = r2((si[leg_a] << 1) | si[leg_b], (sj[leg_a] << 1) | sj[leg_b]);
    }
  }
  return out;
}

/// Embed with a dynamical shift lambda + hbar*H on `shift_leg`: the builder
/// is evaluated at lambda + hbar*eps on the sign-eps sector of that leg.
inline Matrix8 embed_shifted(const std::function<TensorMatrix2(Cx)>& build, int leg_a, int leg_b,
                             int shift_leg, Cx lambda, Cx hbar) {
  Matrix8 out;
  for (int bit = 0; bit < 2; ++bit) {
    double eps = bit ? -1.0 : 1.0;
    TensorMatrix2 r2 = build(lambda + hbar * eps);
    for (int i = 0; i < 8; ++i) {
      int si[3] = {(i >> 2) & 1, (i >> 1) & 1, i & 1};
      if (si[shift_leg] != bit) continue;
      for (int j = 0; j < 8; ++j) {
        int sj[3] = {(j >> 2) & 1, (j >> 1) & 1, j & 1};
        if (sj[shift_leg] != bit) continue;
        out(i, j) = r2((si[leg_a] << 1) | si[leg_b], (sj[leg_a] << 1) | sj[leg_b]);
      }
    }
  }
  return out;
}

/// H = diag(1,-1) acting on one leg of the three-fold product.
inline Matrix8 cartan_leg(int leg) {
  Matrix8 out;
  for (int i = 0; i < 8; ++i) {
    int s[3] = {(i >> 2) & 1, (i >> 1) & 1, i & 1};
    out(i, i) = s[leg] ? -1.0 : 1.0;
  }
  return out;
}

struct AnisotropyParam {
  Cx hbar;
  Cx q;  // e^{i pi hbar}

  explicit AnisotropyParam(Cx h) : hbar(h), q(std::exp(kI * kPi * h)) { check(); }
  static AnisotropyParam from_q(Cx qv) {
    AnisotropyParam a;
    a.q = qv;
    a.hbar = std::log(qv) / (kI * kPi);
    a.check();
    return a;
  }

 private:
  AnisotropyParam() = default;
  void check() const {
    require_finite(q, "q");
    if (q == Cx(0.0) || std::abs(q * q - 1.0) < 1e-12)
      throw std::invalid_argument("AnisotropyParam: need q != 0 and q^2 != 1");
  }
};

struct DynamicalParam {
  Cx lambda;
  Cx mu;  // e^{2 pi i lambda}

  explicit DynamicalParam(Cx l) : lambda(l), mu(std::exp(2.0 * kPi * kI * l)) {
    require_finite(l, "lambda");
  }
  static DynamicalParam from_mu(Cx m) {
    DynamicalParam d;
    d.mu = m;
    d.lambda = std::log(m) / (2.0 * kPi * kI);
    return d;
  }

 private:
  DynamicalParam() = default;
};

}  // namespace latlab
