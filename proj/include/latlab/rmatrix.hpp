#pragma once

// The four R-matrices on C^2 (x) C^2 and their Yang-Baxter checks:
//
//   r_rational    1 + c/(u-v) P                       quantum YBE
//   r_sixvertex   a,b,c,cbar weights of the 6-vertex  quantum YBE
//   r_felder      elliptic dynamical (SOS) weights    dynamical YBE
//   r_trig_sos    trigonometric SOS degeneration      dynamical YBE (mult.)
//
// r_sixvertex_gauged is the mu -> infinity limit of r_trig_sos; it differs
// from r_sixvertex by the gauge b -> q b, bbar -> q^{-1} bbar and yields the
// same DWBC partition function.

#include <complex>
#include <functional>
#include <stdexcept>

#include "latlab/numeric.hpp"
#include "latlab/tensor2.hpp"
#include "latlab/theta.hpp"

namespace latlab {

inline TensorMatrix2 r_rational(Cx u, Cx v, Cx coupling) {
  require_finite(u, "u");
  require_finite(v, "v");
  if (std::abs(u - v) < 1e-12) throw PoleError("r_rational: u = v");
  TensorMatrix2 r = TensorMatrix2::identity();
  Cx f = coupling / (u - v);
  r(0, 0) += f;
  r(3, 3) += f;
  r(1, 2) += f;
  r(2, 1) += f;
  return r;
}

/// Weights a = qz - q^{-1}w, b = z - w, c = (q - q^{-1})z, cbar = (q - q^{-1})w.
inline TensorMatrix2 r_sixvertex(Cx z, Cx w, const AnisotropyParam& an) {
  Cx q = an.q;
  TensorMatrix2 r;
  Cx a = q * z - w / q;
  r(0, 0) = a;
  r(3, 3) = a;
  r(1, 1) = z - w;
  r(2, 2) = z - w;
  r(1, 2) = (q - 1.0 / q) * w;  // cbar
  r(2, 1) = (q - 1.0 / q) * z;  // c
  return r;
}

/// Gauge variant with b -> q b, bbar -> q^{-1} bbar (rho = q).
inline TensorMatrix2 r_sixvertex_gauged(Cx z, Cx w, const AnisotropyParam& an) {
  TensorMatrix2 r = r_sixvertex(z, w, an);
  r(1, 1) *= an.q;
  r(2, 2) /= an.q;
  return r;
}

/// Felder's elliptic dynamical R-matrix; u is the spectral difference.
///   a    = theta(u + hbar)
///   b    = theta(u) theta(lambda + hbar) / theta(lambda)
///   bbar = theta(u) theta(lambda - hbar) / theta(lambda)
///   c    = theta(u + lambda) theta(hbar) / theta(lambda)
///   cbar = theta(u - lambda) theta(hbar) / theta(-lambda)
inline TensorMatrix2 r_felder(Cx u, const DynamicalParam& dyn, const AnisotropyParam& an,
                              const ThetaSeries& ts) {
  Cx l = dyn.lambda, h = an.hbar;
  require_off_lattice(l, ts, "r_felder: lambda");
  Cx th_l = theta(l, ts);
  Cx th_ml = theta(-l, ts);
  TensorMatrix2 r;
  Cx a = theta(u + h, ts);
  r(0, 0) = a;
  r(3, 3) = a;
  r(1, 1) = theta(u, ts) * theta(l + h, ts) / th_l;
  r(2, 2) = theta(u, ts) * theta(l - h, ts) / th_l;
  r(1, 2) = theta(u - l, ts) * theta(h, ts) / th_ml;  // cbar
  r(2, 1) = theta(u + l, ts) * theta(h, ts) / th_l;   // c
  return r;
}

/// Trigonometric SOS R-matrix in multiplicative variables z, w, mu, q.
inline TensorMatrix2 r_trig_sos(Cx z, Cx w, const DynamicalParam& dyn,
                                const AnisotropyParam& an) {
  Cx q = an.q, mu = dyn.mu;
  if (std::abs(mu - 1.0) < 1e-12 || std::abs(mu * q * q - 1.0) < 1e-12)
    throw PoleError("r_trig_sos: mu at a denominator zero");
  TensorMatrix2 r;
  Cx a = q * z - w / q;
  r(0, 0) = a;
  r(3, 3) = a;
  r(1, 1) = (z - w) * (mu * q - 1.0 / q) / (mu - 1.0);
  r(1, 2) = (z - w * mu) * (q - 1.0 / q) / (1.0 - mu);
  r(2, 1) = (z * mu - w) * (q - 1.0 / q) / (mu - 1.0);
  r(2, 2) = (z - w) * (mu / q - q) / (mu - 1.0);
  return r;
}

/// Max-norm of R12 R13 R23 - R23 R13 R12 on (C^2)^(x3).
inline double ybe_residual(const std::function<TensorMatrix2(Cx, Cx)>& R, Cx z1, Cx z2, Cx z3) {
  Matrix8 r12 = embed(R(z1, z2), 0, 1);
  Matrix8 r13 = embed(R(z1, z3), 0, 2);
  Matrix8 r23 = embed(R(z2, z3), 1, 2);
  return (r12 * r13 * r23 - r23 * r13 * r12).max_norm();
}

/// Max-norm residual of the dynamical Yang-Baxter equation for the Felder
/// R-matrix,
///   R12(u1-u2;l) R13(u1-u3;l+h H2) R23(u2-u3;l)
///     = R23(u2-u3;l+h H1) R13(u1-u3;l) R12(u1-u2;l+h H3),
/// with the shifted factors evaluated per sign sector of the shift leg.
inline double dybe_residual(Cx u1, Cx u2, Cx u3, const DynamicalParam& dyn,
                            const AnisotropyParam& an, const ThetaSeries& ts) {
  Cx l = dyn.lambda, h = an.hbar;
  auto at = [&](Cx u) {
    return [&, u](Cx lv) { return r_felder(u, DynamicalParam(lv), an, ts); };
  };
  Matrix8 lhs = embed(r_felder(u1 - u2, dyn, an, ts), 0, 1) *
                embed_shifted(at(u1 - u3), 0, 2, 1, l, h) *
                embed(r_felder(u2 - u3, dyn, an, ts), 1, 2);
  Matrix8 rhs = embed_shifted(at(u2 - u3), 1, 2, 0, l, h) *
                embed(r_felder(u1 - u3, dyn, an, ts), 0, 2) *
                embed_shifted(at(u1 - u2), 0, 1, 2, l, h);
  return (lhs - rhs).max_norm();
}

/// Multiplicative-variable form of the dynamical YBE for r_trig_sos; the
/// sector shift lambda -> lambda + hbar*eps becomes mu -> mu q^{2 eps}.
inline double dybe_residual_trig(Cx z1, Cx z2, Cx z3, const DynamicalParam& dyn,
                                 const AnisotropyParam& an) {
  Cx q2 = an.q * an.q;
  auto shifted = [&](Cx z, Cx w, int la, int lb, int leg) {
    Matrix8 out;
    for (int bit = 0; bit < 2; ++bit) {
      Cx pow = bit ? 1.0 / q2 : q2;
      TensorMatrix2 r2 = r_trig_sos(z, w, DynamicalParam::from_mu(dyn.mu * pow), an);
      for (int i = 0; i < 8; ++i) {
        int si[3] = {(i >> 2) & 1, (i >> 1) & 1, i & 1};
        if (si[leg] != bit) continue;
        for (int j = 0; j < 8; ++j) {
          int sj[3] = {(j >> 2) & 1, (j >> 1) & 1, j & 1};
          if (sj[leg] != bit) continue;
          out(i, j) = r2((si[la] << 1) | si[lb], (sj[la] << 1) | sj[lb]);
        }
      }
    }
    return out;
  };
  Matrix8 lhs = embed(r_trig_sos(z1, z2, dyn, an), 0, 1) * shifted(z1, z3, 0, 2, 1) *
                embed(r_trig_sos(z2, z3, dyn, an), 1, 2);
  Matrix8 rhs = shifted(z2, z3, 1, 2, 0) * embed(r_trig_sos(z1, z3, dyn, an), 0, 2) *
                shifted(z1, z2, 0, 1, 2);
  return (lhs - rhs).max_norm();
}

/// Max-norm of [H1 + H2, R] on C^2 (x) C^2.
inline double cartan_commutant_residual(const TensorMatrix2& r) {
  double res = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double hi = (i == 0 ? 2.0 : i == 3 ? -2.0 : 0.0);
      double hj = (j == 0 ? 2.0 : j == 3 ? -2.0 : 0.0);
      res = std::max(res, std::abs((hi - hj) * r(i, j)));
    }
  return res;
}

}  // namespace latlab
