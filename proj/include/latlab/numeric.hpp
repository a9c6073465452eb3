#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace latlab {

using Cx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Cx kI{0.0, 1.0};

/// Pole proximity / genericity-gate violation: the requested point sits too
/// close to a lattice point (or another zero of a denominator) for the
/// formula to be meaningful at double precision.
struct PoleError : std::domain_error {
  explicit PoleError(const std::string& what) : std::domain_error(what) {}
};

/// Truncation budget exhausted: the series cannot certify the requested
/// tolerance within the hard term cap.
struct TruncationError : std::runtime_error {
  explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

inline bool is_finite(Cx z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline void require_finite(Cx z, const char* name) {
  if (!is_finite(z)) throw std::invalid_argument(std::string(name) + " must be finite");
}

/// |lhs - rhs| / max(1, |lhs|, |rhs|).  Every identity-residual in the
/// library is normalized this way; values span many orders of magnitude in
/// the elliptic regime.
inline double rel_residual(Cx lhs, Cx rhs) {
  return std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

/// Deterministic 64-bit generator (splitmix64).  Used instead of <random>
/// distributions so that seeded instances are bit-identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0,1) with 53 significant bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in the rectangle [0,w) x i[0,h).
  Cx rect(double w, double h) {
    double re = w * uniform();
    double im = h * uniform();
    return {re, im};
  }

 private:
  std::uint64_t state_;
};

/// Determinant of a dense complex matrix by partial-pivot LU.  Sizes here
/// are tiny (n <= 12), so no external linear algebra is pulled in.
inline Cx det(std::vector<Cx> a, int n) {
  Cx d = 1.0;
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r * n + c]) > std::abs(a[p * n + c])) p = r;
    if (a[p * n + c] == Cx(0.0)) return 0.0;
    if (p != c) {
      for (int k = 0; k < n; ++k) std::swap(a[p * n + k], a[c * n + k]);
      d = -d;
    }
    d *= a[c * n + c];
    for (int r = c + 1; r < n; ++r) {
      Cx f = a[r * n + c] / a[c * n + c];
      for (int k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
    }
  }
  return d;
}

inline int permutation_sign(const std::vector<int>& p) {
  int s = 1;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) s = -s;
  return s;
}

}  // namespace latlab
