#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "latlab/closed_forms.hpp"
#include "latlab/elliptic_poly.hpp"
#include "latlab/sampling.hpp"

using namespace latlab;

namespace {
const ThetaSeries& ts_i() {
  static ThetaSeries ts{ModularParam(Cx(0.0, 1.0))};
  return ts;
}
const AnisotropyParam& aniso() {
  static AnisotropyParam a{Cx(0.31, 0.07)};
  return a;
}
const DynamicalParam& dyn() {
  static DynamicalParam d{Cx(0.43, 0.21)};
  return d;
}
}  // namespace

TEST_CASE("izergin n=1 and the oracle cross-check") {
  Cx z(1.7, 0.3), w(0.4, -0.2), q = aniso().q;
  LatticeInstance one(1, {z}, {w}, aniso());
  CHECK(rel_residual(izergin(one), (q - 1.0 / q) * w) <= 1e-14);
  for (std::uint64_t seed = 1; seed <= 10; ++seed)
    for (int n : {2, 3}) {
      LatticeInstance inst = random_sixvertex_instance(n, seed * 31 + n, aniso());
      CHECK(rel_residual(izergin(inst), enumerate_sixvertex(inst)) <= 1e-11);
    }
}

TEST_CASE("izergin refuses coincident parameters") {
  LatticeInstance inst(2, {Cx(1.0, 0.2), Cx(1.0, 0.2)}, {Cx(0.3), Cx(0.7)}, aniso());
  CHECK_THROWS_AS(izergin(inst), PoleError);
}

TEST_CASE("trig kernel values") {
  Cx u(1.3, 0.2), v(0.4, -0.1);
  CHECK(rel_residual(trig_kernel({u}, {v}, aniso()), v / (u - v)) <= 1e-14);
  CHECK_THROWS_AS(trig_kernel({u, v}, {u, v}, aniso()), PoleError);
  // n=2 value is finite and feeds the q-symmetrization
  Cx k2 = trig_kernel({Cx(1.2, 0.1), Cx(2.3, -0.2)}, {Cx(0.5, 0.3), Cx(0.9, -0.4)}, aniso());
  CHECK(std::isfinite(k2.real()));
}

TEST_CASE("q-symmetrized kernel reproduces the partition function") {
  Cx q = aniso().q;
  for (int n : {2, 3}) {
    LatticeInstance inst = random_sixvertex_instance(n, 700 + static_cast<std::uint64_t>(n),
                                                     aniso());
    Cx ks = q_symmetrized_kernel(inst.u, inst.v, aniso());
    Cx pref = 1.0;
    for (int i = 0; i < n; ++i) {
      pref *= (q - 1.0 / q);
      for (int j = 0; j < n; ++j)
        pref *= (inst.u[static_cast<std::size_t>(i)] - inst.v[static_cast<std::size_t>(j)]);
    }
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < k; ++j) {
        Cx zk = inst.u[static_cast<std::size_t>(k)], zj = inst.u[static_cast<std::size_t>(j)];
        Cx wk = inst.v[static_cast<std::size_t>(k)], wj = inst.v[static_cast<std::size_t>(j)];
        pref *= (q * zk - zj / q) * (wk / q - q * wj) / ((zk - zj) * (wk - wj));
      }
    CHECK(rel_residual(pref * ks, izergin(inst)) <= 1e-10);
  }
}

TEST_CASE("q-symmetrized kernel symmetries") {
  // n=1: the single permutation reduces to the plain kernel
  CHECK(rel_residual(q_symmetrized_kernel({Cx(1.3, 0.2)}, {Cx(0.4, -0.1)}, aniso()),
                     trig_kernel({Cx(1.3, 0.2)}, {Cx(0.4, -0.1)}, aniso())) <= 1e-14);
  LatticeInstance inst = random_sixvertex_instance(3, 41, aniso());
  Cx q = aniso().q;
  Cx base = q_symmetrized_kernel(inst.u, inst.v, aniso());
  // q^{-1}-symmetry in v: the pi^{q^{-1}} action of a transposition fixes it
  std::vector<Cx> vs{inst.v[1], inst.v[0], inst.v[2]};
  Cx swapped = q_symmetrized_kernel(inst.u, vs, aniso()) * (q * inst.v[1] - inst.v[0] / q) /
               (inst.v[1] / q - q * inst.v[0]);
  CHECK(rel_residual(base, swapped) <= 1e-10);
  // q-symmetry in u
  std::vector<Cx> us{inst.u[1], inst.u[0], inst.u[2]};
  Cx swappedu = q_symmetrized_kernel(us, inst.v, aniso()) * (inst.u[1] / q - q * inst.u[0]) /
                (q * inst.u[1] - inst.u[0] / q);
  CHECK(rel_residual(base, swappedu) <= 1e-10);
}

TEST_CASE("projection formula agrees with the determinant") {
  Cx q = aniso().q;
  LatticeInstance one(1, {Cx(1.7, 0.3)}, {Cx(0.4, -0.2)}, aniso());
  CHECK(rel_residual(sixvertex_projection_formula(one), (q - 1.0 / q) * Cx(0.4, -0.2)) <= 1e-14);
  for (int n = 2; n <= 4; ++n)
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      LatticeInstance inst =
          random_sixvertex_instance(n, 900 + seed * 13 + static_cast<std::uint64_t>(n), aniso());
      CHECK(rel_residual(sixvertex_projection_formula(inst), izergin(inst)) <= 1e-10);
    }
}

TEST_CASE("sos formula n=1 and cross-checks") {
  Cx u(0.31, 0.05), v(0.12, 0.02);
  LatticeInstance one(1, {u}, {v}, aniso(), dyn(), ts_i());
  Cx expect = theta(u - v - dyn().lambda, ts_i()) * theta(aniso().hbar, ts_i()) /
              theta(-dyn().lambda, ts_i());
  CHECK(rel_residual(sos_formula(one), expect) <= 1e-12);
  for (int n : {2, 3})
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      LatticeInstance inst =
          random_sos_instance(n, 40 + seed * 7 + static_cast<std::uint64_t>(n), ts_i(), aniso(),
                              dyn());
      CHECK(rel_residual(sos_formula(inst), enumerate_sos(inst)) <= 1e-8);
      CHECK(rel_residual(sos_formula(inst), transfer_sos(inst)) <= 1e-8);
    }
}

TEST_CASE("korepin recursions across the closed-form routes") {
  auto z_iz = [](const LatticeInstance& it) { return izergin(it); };
  auto z_pr = [](const LatticeInstance& it) { return sixvertex_projection_formula(it); };
  auto z_sf = [](const LatticeInstance& it) { return sos_formula(it); };
  for (int n = 2; n <= 5; ++n) {
    LatticeInstance i6 = random_sixvertex_instance(n, 1234 + static_cast<std::uint64_t>(n),
                                                   aniso());
    CHECK(korepin_residual_sixvertex(i6, z_iz) <= 1e-10);
    if (n <= 4) CHECK(korepin_residual_sixvertex(i6, z_pr) <= 1e-10);
    LatticeInstance is =
        random_sos_instance(n, 4321 + static_cast<std::uint64_t>(n), ts_i(), aniso(), dyn());
    CHECK(korepin_residual_sos(is, z_sf) <= 1e-8);
    if (n == 2)
      CHECK(korepin_residual_sos(
                is, [](const LatticeInstance& it) { return enumerate_sos(it); }) <= 1e-8);
  }
}

TEST_CASE("closed forms are symmetric in u and v") {
  LatticeInstance i6 = random_sixvertex_instance(4, 555, aniso());
  Cx base = izergin(i6);
  LatticeInstance p6(4, {i6.u[2], i6.u[3], i6.u[0], i6.u[1]},
                     {i6.v[3], i6.v[1], i6.v[2], i6.v[0]}, aniso());
  CHECK(rel_residual(base, izergin(p6)) <= 1e-9);
  CHECK(rel_residual(sixvertex_projection_formula(i6), sixvertex_projection_formula(p6)) <= 1e-9);

  LatticeInstance is = random_sos_instance(3, 665, ts_i(), aniso(), dyn());
  LatticeInstance ps(3, {is.u[2], is.u[0], is.u[1]}, {is.v[1], is.v[2], is.v[0]}, aniso(), dyn(),
                     ts_i());
  CHECK(rel_residual(sos_formula(is), sos_formula(ps)) <= 1e-9);
}

TEST_CASE("sos formula is elliptic in v_n with the conjugate character") {
  int n = 2;
  LatticeInstance is = random_sos_instance(n, 733, ts_i(), aniso(), dyn());
  Cx sumu = 0.0;
  for (Cx x : is.u) sumu += x;
  // chi~(1) = (-1)^n, chi~(tau) = (-1)^n e^{2 pi i (-lambda + sum u_i)}
  Character chi = Character::standard(n, -dyn().lambda + sumu);
  auto f = [&](Cx x) {
    std::vector<Cx> v = is.v;
    v[static_cast<std::size_t>(n - 1)] = x;
    return sos_formula(LatticeInstance(n, is.u, v, aniso(), dyn(), ts_i()));
  };
  Cx probe(0.33, 0.27);
  auto [r1, r2] = character_residuals(f, chi, probe, ts_i());
  double scale = std::max(1.0, std::abs(f(probe)));
  CHECK(r1 / scale <= 1e-7);
  CHECK(r2 / scale <= 1e-7);
}

TEST_CASE("elliptic projection kernel") {
  Cx u(0.31, 0.05), v(0.12, 0.02);
  Cx expect = theta(u - v - dyn().lambda, ts_i()) /
              (theta(u - v, ts_i()) * theta(-dyn().lambda, ts_i()));
  CHECK(rel_residual(elliptic_projection_kernel({u}, {v}, dyn(), aniso(), ts_i()), expect) <=
        1e-12);
  // u1 - v1 = lambda zeroes the numerator
  CHECK(std::abs(elliptic_projection_kernel({v + dyn().lambda}, {v}, dyn(), aniso(), ts_i())) <=
        1e-10);
}

TEST_CASE("elliptic projection kernel trig limit matches the 6-vertex kernel") {
  ThetaSeries ts30{ModularParam(Cx(0.0, 30.0))};
  Rng rng(99);
  for (int n : {1, 2, 3}) {
    std::vector<Cx> u = draw_points(rng, n, 0.04), v = draw_points(rng, n, 0.04);
    Cx kell = elliptic_projection_kernel(u, v, dyn(), aniso(), ts30);
    std::vector<Cx> z, w;
    for (Cx x : u) z.push_back(std::exp(2.0 * kPi * kI * x));
    for (Cx x : v) w.push_back(std::exp(2.0 * kPi * kI * x));
    Cx kt = trig_kernel(z, w, aniso());
    // each unbalanced G-factor contributes 2 pi i (z_m - mu_m w_m)/((1-mu_m) w_m)
    Cx fac = 1.0;
    for (int m = 0; m < n; ++m) {
      Cx mum = dyn().mu * std::pow(aniso().q, 2.0 * m);
      fac *= 2.0 * kPi * kI * (z[static_cast<std::size_t>(m)] - mum * w[static_cast<std::size_t>(m)]) /
             ((1.0 - mum) * w[static_cast<std::size_t>(m)]);
    }
    CHECK(rel_residual(kell, kt * fac) <= 1e-6);
  }
}

TEST_CASE("trig SOS formula") {
  Cx u(0.31, 0.05), v(0.12, 0.02);
  LatticeInstance one(1, {u}, {v}, aniso(), dyn(), ts_i());
  Cx z = std::exp(2.0 * kPi * kI * u), w = std::exp(2.0 * kPi * kI * v);
  Cx q = aniso().q, mu = dyn().mu;
  Cx expect = (z - w * mu) * (q - 1.0 / q) / (1.0 - mu);
  CHECK(rel_residual(trig_sos_formula(one), expect) <= 1e-12);
}

TEST_CASE("trig SOS formula is the tau -> i infinity limit of the SOS formula") {
  ThetaSeries ts30{ModularParam(Cx(0.0, 30.0))};
  Rng rng(13);
  for (int n : {2, 3}) {
    std::vector<Cx> u = draw_points(rng, n, 0.05), v = draw_points(rng, n, 0.05);
    LatticeInstance inst(n, u, v, aniso(), dyn(), ts30);
    Cx pref = 1.0;
    for (Cx uk : u)
      for (Cx vj : v) pref *= 2.0 * kPi * kI * std::exp(kI * kPi * (uk + vj));
    CHECK(rel_residual(pref * sos_formula(inst), trig_sos_formula(inst)) <= 1e-7);
  }
}

TEST_CASE("trig SOS formula dedynamizes to the projection formula at mu = 1e8") {
  Rng rng(21);
  for (int n : {2, 3}) {
    std::vector<Cx> u = draw_points(rng, n, 0.25), v = draw_points(rng, n, 0.25);
    LatticeInstance strig(n, u, v, aniso(), DynamicalParam::from_mu(Cx(1e8)), ts_i());
    std::vector<Cx> z, w;
    for (Cx x : u) z.push_back(std::exp(2.0 * kPi * kI * x));
    for (Cx x : v) w.push_back(std::exp(2.0 * kPi * kI * x));
    LatticeInstance s6(n, z, w, aniso());
    CHECK(rel_residual(trig_sos_formula(strig), sixvertex_projection_formula(s6)) <= 1e-6);
  }
}

TEST_CASE("hbar symmetrization weights") {
  std::vector<Cx> v{Cx(0.1, 0.02), Cx(0.34, 0.11), Cx(0.62, 0.05), Cx(0.81, 0.17)};
  Cx h = aniso().hbar;
  CHECK(hbar_symmetrization_weight({0, 1, 2, 3}, v, h, ts_i()) == Cx(1.0));
  Cx w12 = hbar_symmetrization_weight({1, 0}, {v[0], v[1]}, h, ts_i());
  Cx expect = theta(v[1] - v[0] - h, ts_i()) / theta(v[1] - v[0] + h, ts_i());
  CHECK(rel_residual(w12, expect) <= 1e-12);

  // group action: weight(sig o sig', v) = weight(sig, v) weight(sig', v^sig)
  Rng rng(63);
  for (int trial = 0; trial < 20; ++trial) {
    auto perm_of = [&](int n) {
      std::vector<int> p(static_cast<std::size_t>(n));
      std::iota(p.begin(), p.end(), 0);
      for (int i = n - 1; i > 0; --i)
        std::swap(p[static_cast<std::size_t>(i)],
                  p[static_cast<std::size_t>(rng.next_u64() % static_cast<std::uint64_t>(i + 1))]);
      return p;
    };
    std::vector<int> sig = perm_of(4), sgp = perm_of(4), comp(4);
    for (int i = 0; i < 4; ++i)
      comp[static_cast<std::size_t>(i)] =
          sig[static_cast<std::size_t>(sgp[static_cast<std::size_t>(i)])];
    std::vector<Cx> vs;
    for (int s : sig) vs.push_back(v[static_cast<std::size_t>(s)]);
    Cx lhs = hbar_symmetrization_weight(comp, v, h, ts_i());
    Cx rhs = hbar_symmetrization_weight(sig, v, h, ts_i()) *
             hbar_symmetrization_weight(sgp, vs, h, ts_i());
    CHECK(rel_residual(lhs, rhs) <= 1e-10);
  }
}

TEST_CASE("permutation caps") {
  std::vector<Cx> bigu(10), bigv(10);
  for (int i = 0; i < 10; ++i) {
    bigu[static_cast<std::size_t>(i)] = Cx(1.0 + 0.11 * i, 0.05 * i);
    bigv[static_cast<std::size_t>(i)] = Cx(3.4 + 0.13 * i, -0.07 * i);
  }
  CHECK_THROWS_AS(q_symmetrized_kernel(bigu, bigv, aniso()), std::invalid_argument);
}
