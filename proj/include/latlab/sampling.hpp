#pragma once

// Seeded random lattice instances.  Spectral parameters are drawn uniformly
// from the rectangle [0,1) x i[0, 0.3 Im tau) (multiplicative parameters are
// exponentials of such draws) and rejection-sampled against the genericity
// gates of the routes they feed, so reports are reproducible from the seed
// alone.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "latlab/closed_forms.hpp"
#include "latlab/lattice.hpp"
#include "latlab/numeric.hpp"

namespace latlab {

inline std::vector<Cx> draw_points(Rng& rng, int n, double height) {
  std::vector<Cx> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(rng.rect(1.0, height));
  return out;
}

/// 6-vertex instance with multiplicative z = e^{2 pi i a}, a in the sampling
/// rectangle (Im tau taken as 1 for the model without a modulus).
inline LatticeInstance random_sixvertex_instance(int n, std::uint64_t seed,
                                                 const AnisotropyParam& an,
                                                 double height = 0.3) {
  Rng rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Cx> z, w;
    for (Cx a : draw_points(rng, n, height)) z.push_back(std::exp(2.0 * kPi * kI * a));
    for (Cx a : draw_points(rng, n, height)) w.push_back(std::exp(2.0 * kPi * kI * a));
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = 0; j < n && ok; ++j) {
        if (i < j &&
            (std::abs(z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)]) < 1e-4 ||
             std::abs(w[static_cast<std::size_t>(i)] - w[static_cast<std::size_t>(j)]) < 1e-4))
          ok = false;
        if (std::abs(z[static_cast<std::size_t>(i)] - w[static_cast<std::size_t>(j)]) < 1e-4 ||
            std::abs(an.q * z[static_cast<std::size_t>(i)] -
                     w[static_cast<std::size_t>(j)] / an.q) < 1e-4)
          ok = false;
      }
    if (ok) return LatticeInstance(n, std::move(z), std::move(w), an);
  }
  throw std::runtime_error("random_sixvertex_instance: rejection sampling failed");
}

inline LatticeInstance random_sos_instance(int n, std::uint64_t seed, const ThetaSeries& ts,
                                           const AnisotropyParam& an, const DynamicalParam& dyn,
                                           double height_scale = 0.3) {
  Rng rng(seed);
  double height = height_scale * ts.tau().imag();
  auto gate = [&](Cx x) { return off_lattice(x, ts); };
  for (int k = -n; k <= n; ++k)
    if (!gate(dyn.lambda + static_cast<double>(k) * an.hbar))
      throw std::domain_error(
          "random_sos_instance: lambda + k*hbar fails the genericity gate for this n");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Cx> u = draw_points(rng, n, height);
    std::vector<Cx> v = draw_points(rng, n, height);
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = 0; j < n && ok; ++j) {
        if (i != j)
          ok = gate(u[static_cast<std::size_t>(i)] - u[static_cast<std::size_t>(j)]) &&
               gate(u[static_cast<std::size_t>(i)] - u[static_cast<std::size_t>(j)] + an.hbar) &&
               gate(v[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(j)]) &&
               gate(v[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(j)] + an.hbar) &&
               gate(v[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(j)] - an.hbar);
        if (!ok) break;
        ok = gate(u[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(j)]) &&
             gate(u[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(j)] + an.hbar) &&
             gate(u[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(j)] - an.hbar);
      }
    for (int m = 0; m < n && ok; ++m)
      for (int i = 0; i < n && ok; ++i)
        for (int j = 0; j < n && ok; ++j)
          ok = gate(u[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(j)] -
                    dyn.lambda - static_cast<double>(m) * an.hbar);
    if (!ok) continue;
    return LatticeInstance(n, std::move(u), std::move(v), an, dyn, ts);
  }
  throw std::runtime_error("random_sos_instance: rejection sampling failed");
}

}  // namespace latlab
