#pragma once

// The CLI engine: build a seeded instance, evaluate the requested routes,
// cross-check them, and assemble a machine-readable report.  Reports are
// deterministic for a fixed config: seeded sampling, fixed reduction order,
// and shortest round-trip float serialization; wall-clock numbers live under
// the separate "timing" key so byte comparison can exclude them.
//
// Exit-code contract (mapped by the CLI): 0 = all checks pass, 1 = at least
// one residual exceeds tol or a route failed, 2 = usage/config error.

#include <charconv>
#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "latlab/classical_r.hpp"
#include "latlab/closed_forms.hpp"
#include "latlab/elliptic_poly.hpp"
#include "latlab/lattice.hpp"
#include "latlab/rmatrix.hpp"
#include "latlab/sampling.hpp"

namespace latlab {

using Json = nlohmann::ordered_json;

struct UsageError : std::invalid_argument {
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

struct RunConfig {
  std::string model;  // "sixvertex" | "sos"
  int n = 2;
  Cx tau{0.0, 1.0};
  Cx hbar{0.31, 0.07};
  Cx lambda{0.43, 0.21};
  std::optional<Cx> q;  // sixvertex; derived from hbar if absent
  std::uint64_t seed = 1;
  std::vector<std::string> methods;  // empty => all valid for the model
  double tol = 1e-8;
  int trunc = 0;  // 0 => default truncation policy
  std::string output = "json";
  std::string out_file;
  std::optional<std::vector<Cx>> u_override;
  std::optional<std::vector<Cx>> v_override;
};

namespace detail {

inline Json cx_json(Cx z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

inline std::string fmt_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

inline int method_cap(const std::string& model, const std::string& m) {
  if (m == "enum") return 4;
  if (m == "transfer") return model == "sos" ? 10 : 12;
  if (m == "izergin") return 12;
  if (m == "projection" || m == "formula") return 9;
  return -1;
}

inline std::vector<std::string> valid_methods(const std::string& model) {
  if (model == "sixvertex") return {"enum", "transfer", "izergin", "projection"};
  return {"enum", "transfer", "formula"};
}

inline std::vector<int> seeded_permutation(int n, Rng& rng) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(i + 1));
    std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
  }
  return p;
}

}  // namespace detail

struct EvalReport {
  Json body;      // everything that must be byte-stable
  Json timing;    // wall-clock per method, excluded from determinism
  bool all_pass = false;

  Json full() const {
    Json out = body;
    out["timing"] = timing;
    return out;
  }

  std::string to_json() const { return full().dump(2) + "\n"; }

  /// CSV: one row per (method, value_re, value_im), then a residuals block.
  std::string to_csv() const {
    std::string out = "section,key,value1,value2,value3\n";
    if (body.contains("results"))
      for (const auto& [name, val] : body["results"].items()) {
        if (val.contains("error"))
          out += "method," + name + ",error," + val["error"].get<std::string>() + ",\n";
        else
          out += "method," + name + "," +
                 detail::fmt_double(val["value"]["re"].get<double>()) + "," +
                 detail::fmt_double(val["value"]["im"].get<double>()) + ",\n";
      }
    if (body.contains("pairwise_residuals"))
      for (const auto& [pair, val] : body["pairwise_residuals"].items())
        out += "residual," + pair + "," + detail::fmt_double(val.get<double>()) + ",,\n";
    if (body.contains("checks"))
      for (const auto& [name, val] : body["checks"].items()) {
        if (val.contains("error"))
          out += "check," + name + ",error," + val["error"].get<std::string>() + ",\n";
        else
          out += "check," + name + "," + detail::fmt_double(val["residual"].get<double>()) +
                 "," + (val["pass"].get<bool>() ? "pass" : "fail") + ",\n";
      }
    out += std::string("status,all_pass,") + (all_pass ? "true" : "false") + ",,\n";
    return out;
  }
};

inline void validate(const RunConfig& cfg) {
  if (cfg.model != "sixvertex" && cfg.model != "sos")
    throw UsageError("model must be 'sixvertex' or 'sos'");
  if (cfg.n < 1) throw UsageError("n must be >= 1");
  auto valid = detail::valid_methods(cfg.model);
  for (const auto& m : cfg.methods) {
    if (std::find(valid.begin(), valid.end(), m) == valid.end())
      throw UsageError("method '" + m + "' is not valid for model " + cfg.model);
    if (cfg.n > detail::method_cap(cfg.model, m))
      throw UsageError("n=" + std::to_string(cfg.n) + " exceeds the cap for method '" + m + "'");
  }
  if (cfg.output != "json" && cfg.output != "csv")
    throw UsageError("output must be 'json' or 'csv'");
  if (cfg.u_override && static_cast<int>(cfg.u_override->size()) != cfg.n)
    throw UsageError("--u must be given exactly n times");
  if (cfg.v_override && static_cast<int>(cfg.v_override->size()) != cfg.n)
    throw UsageError("--v must be given exactly n times");
}

inline EvalReport run(RunConfig cfg) {
  if (cfg.methods.empty()) cfg.methods = detail::valid_methods(cfg.model);
  validate(cfg);
  bool sos = cfg.model == "sos";

  // Anything that fails while building the instance from the config is a
  // config error (exit 2), not a route failure.
  std::optional<AnisotropyParam> aniso;
  std::optional<ThetaSeries> ts;
  std::optional<LatticeInstance> built;
  try {
    aniso = cfg.q ? AnisotropyParam::from_q(*cfg.q) : AnisotropyParam(cfg.hbar);
    if (sos)
      ts = cfg.trunc > 0 ? ThetaSeries(ModularParam(cfg.tau), cfg.trunc)
                         : ThetaSeries(ModularParam(cfg.tau));
    if (sos) {
      DynamicalParam dyn(cfg.lambda);
      if (cfg.u_override && cfg.v_override)
        built.emplace(cfg.n, *cfg.u_override, *cfg.v_override, *aniso, dyn, *ts);
      else
        built.emplace(random_sos_instance(cfg.n, cfg.seed, *ts, *aniso, dyn));
    } else if (cfg.u_override && cfg.v_override) {
      built.emplace(cfg.n, *cfg.u_override, *cfg.v_override, *aniso);
    } else {
      built.emplace(random_sixvertex_instance(cfg.n, cfg.seed, *aniso));
    }
  } catch (const std::exception& e) {
    throw UsageError(std::string("invalid instance parameters: ") + e.what());
  }
  LatticeInstance& inst = *built;

  std::map<std::string, std::function<Cx(const LatticeInstance&)>> routes;
  routes["enum"] = [](const LatticeInstance& it) {
    return it.is_sos() ? enumerate_sos(it) : enumerate_sixvertex(it);
  };
  routes["transfer"] = [](const LatticeInstance& it) {
    return it.is_sos() ? transfer_sos(it) : transfer_sixvertex(it);
  };
  routes["izergin"] = [](const LatticeInstance& it) { return izergin(it); };
  routes["projection"] = [](const LatticeInstance& it) {
    return sixvertex_projection_formula(it);
  };
  routes["formula"] = [](const LatticeInstance& it) { return sos_formula(it); };

  EvalReport rep;
  rep.body["config"] = Json{{"model", cfg.model},
                            {"n", cfg.n},
                            {"hbar", detail::cx_json(aniso->hbar)},
                            {"q", detail::cx_json(aniso->q)},
                            {"seed", cfg.seed},
                            {"methods", cfg.methods},
                            {"tol", cfg.tol}};
  if (sos) {
    rep.body["config"]["tau"] = detail::cx_json(cfg.tau);
    rep.body["config"]["lambda"] = detail::cx_json(cfg.lambda);
    rep.body["config"]["trunc"] = ts->n_terms();
    rep.body["config"]["tail_bound"] = ts->tail_bound();
  }
  Json ju = Json::array(), jv = Json::array();
  for (Cx x : inst.u) ju.push_back(detail::cx_json(x));
  for (Cx x : inst.v) jv.push_back(detail::cx_json(x));
  rep.body["config"]["u"] = ju;
  rep.body["config"]["v"] = jv;

  bool ok = true;
  std::map<std::string, Cx> values;
  rep.body["results"] = Json::object();
  rep.timing = Json::object();
  for (const auto& m : cfg.methods) {
    auto t0 = std::chrono::steady_clock::now();
    try {
      Cx z = routes.at(m)(inst);
      values[m] = z;
      rep.body["results"][m] = Json{{"value", detail::cx_json(z)}};
    } catch (const std::exception& e) {
      rep.body["results"][m] = Json{{"error", e.what()}};
      ok = false;
    }
    rep.timing[m] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  rep.body["pairwise_residuals"] = Json::object();
  for (auto a = values.begin(); a != values.end(); ++a)
    for (auto b = std::next(a); b != values.end(); ++b) {
      double r = rel_residual(a->second, b->second);
      rep.body["pairwise_residuals"][a->first + "|" + b->first] = r;
      if (!(r <= cfg.tol)) ok = false;
    }

  // Residual checks on the preferred available route.
  rep.body["checks"] = Json::object();
  auto pick_route = [&]() -> std::function<Cx(const LatticeInstance&)> {
    for (const char* pref : {"izergin", "formula", "projection", "transfer", "enum"})
      if (values.count(pref)) return routes.at(pref);
    return {};
  };
  auto add_check = [&](const std::string& name, const std::function<double()>& fn) {
    try {
      double r = fn();
      bool pass = r <= cfg.tol;
      rep.body["checks"][name] = Json{{"residual", r}, {"pass", pass}};
      if (!pass) ok = false;
    } catch (const std::exception& e) {
      rep.body["checks"][name] = Json{{"error", e.what()}};
      ok = false;
    }
  };
  auto route = pick_route();
  Rng check_rng(cfg.seed ^ 0x5eedc0ffeeull);
  if (route && cfg.n >= 2) {
    add_check("korepin", [&] {
      return inst.is_sos() ? korepin_residual_sos(inst, route)
                           : korepin_residual_sixvertex(inst, route);
    });
  }
  if (route) {
    add_check("symmetry", [&] {
      auto pu = detail::seeded_permutation(cfg.n, check_rng);
      auto pv = detail::seeded_permutation(cfg.n, check_rng);
      std::vector<Cx> up, vp;
      for (int i : pu) up.push_back(inst.u[static_cast<std::size_t>(i)]);
      for (int i : pv) vp.push_back(inst.v[static_cast<std::size_t>(i)]);
      Cx base = route(inst);
      LatticeInstance perm =
          inst.is_sos() ? LatticeInstance(cfg.n, up, vp, inst.aniso, *inst.dyn, *inst.ts)
                        : LatticeInstance(cfg.n, up, vp, inst.aniso);
      return rel_residual(base, route(perm));
    });
  }
  if (inst.is_sos() && route) {
    add_check("ellipticity", [&] {
      Cx sumv = 0.0;
      for (Cx x : inst.v) sumv += x;
      Character chi = Character::standard(cfg.n, inst.dyn->lambda + sumv);
      auto f = [&](Cx x) {
        std::vector<Cx> u = inst.u;
        u[static_cast<std::size_t>(cfg.n - 1)] = x;
        return route(LatticeInstance(cfg.n, u, inst.v, inst.aniso, *inst.dyn, *inst.ts));
      };
      Cx probe = inst.u[static_cast<std::size_t>(cfg.n - 1)] + Cx(0.11, 0.07);
      auto [r1, r2] = character_residuals(f, chi, probe, *ts);
      Cx scale = f(probe);
      return std::max(r1, r2) / std::max(1.0, std::abs(scale));
    });
  }
  if (cfg.model == "sixvertex") {
    add_check("ybe", [&] {
      double worst = 0.0;
      for (int t = 0; t < 3; ++t) {
        Cx z1 = std::exp(2.0 * kPi * kI * check_rng.rect(1.0, 0.3));
        Cx z2 = std::exp(2.0 * kPi * kI * check_rng.rect(1.0, 0.3));
        Cx z3 = std::exp(2.0 * kPi * kI * check_rng.rect(1.0, 0.3));
        worst = std::max(worst, ybe_residual(
                                    [&](Cx a, Cx b) { return r_sixvertex(a, b, *aniso); }, z1,
                                    z2, z3));
      }
      return worst;
    });
  } else {
    add_check("dybe", [&] {
      double worst = 0.0;
      for (int t = 0; t < 3; ++t) {
        Cx u1 = check_rng.rect(1.0, 0.3);
        Cx u2 = check_rng.rect(1.0, 0.3);
        Cx u3 = check_rng.rect(1.0, 0.3);
        worst = std::max(worst, dybe_residual(u1, u2, u3, *inst.dyn, *aniso, *ts));
      }
      return worst;
    });
  }

  rep.all_pass = ok;
  rep.body["all_pass"] = ok;
  return rep;
}

// ---------------------------------------------------------------------------
// verify: seeded random property suites
// ---------------------------------------------------------------------------

struct VerifyConfig {
  std::string suite;
  std::uint64_t seed = 1;
  int count = 50;
  double tol = 1e-9;
  Cx tau{0.0, 1.0};
  Cx hbar{0.31, 0.07};
  Cx lambda{0.43, 0.21};
  bool lambda_set = false;  // true when --lambda-* was given explicitly
};

inline EvalReport verify(const VerifyConfig& cfg) {
  static const std::vector<std::string> kSuites = {
      "ybe",      "dybe",         "cdybe",     "fay",          "addition",
      "recursion", "degeneration", "averaging", "interpolation"};
  if (std::find(kSuites.begin(), kSuites.end(), cfg.suite) == kSuites.end())
    throw UsageError("unknown verify suite '" + cfg.suite + "'");

  EvalReport rep;
  rep.body["suite"] = cfg.suite;
  rep.body["seed"] = cfg.seed;
  rep.body["count"] = cfg.count;
  rep.body["tol"] = cfg.tol;
  rep.body["cases"] = Json::array();
  rep.timing = Json::object();

  std::optional<AnisotropyParam> an;
  std::optional<ThetaSeries> series;
  try {
    an = AnisotropyParam(cfg.hbar);
    series = ThetaSeries(ModularParam(cfg.tau));
  } catch (const std::exception& e) {
    throw UsageError(std::string("invalid suite parameters: ") + e.what());
  }
  Rng rng(cfg.seed);
  const AnisotropyParam& aniso = *an;
  const ThetaSeries& ts = *series;
  double height = 0.3 * cfg.tau.imag();
  bool ok = true;
  double worst = 0.0;
  auto t0 = std::chrono::steady_clock::now();

  auto record = [&](double r) {
    bool pass = r <= cfg.tol;
    rep.body["cases"].push_back(Json{{"residual", r}, {"pass", pass}});
    worst = std::max(worst, r);
    if (!pass) ok = false;
  };
  auto record_error = [&](const std::exception& e) {
    rep.body["cases"].push_back(Json{{"error", e.what()}, {"pass", false}});
    ok = false;
  };

  for (int c = 0; c < cfg.count; ++c) {
    try {
      if (cfg.suite == "ybe") {
        Cx z1 = std::exp(2.0 * kPi * kI * rng.rect(1.0, 0.3));
        Cx z2 = std::exp(2.0 * kPi * kI * rng.rect(1.0, 0.3));
        Cx z3 = std::exp(2.0 * kPi * kI * rng.rect(1.0, 0.3));
        double r6 =
            ybe_residual([&](Cx a, Cx b) { return r_sixvertex(a, b, aniso); }, z1, z2, z3);
        double rr = ybe_residual(
            [&](Cx a, Cx b) { return r_rational(a, b, Cx(0.7, 0.2)); },
            3.0 * rng.uniform() + 0.1, 3.0 * rng.uniform() + 3.4, 3.0 * rng.uniform() + 6.9);
        record(std::max(r6, rr));
      } else if (cfg.suite == "dybe") {
        DynamicalParam dyn(cfg.lambda);
        record(dybe_residual(rng.rect(1.0, height), rng.rect(1.0, height),
                             rng.rect(1.0, height), dyn, aniso, ts));
      } else if (cfg.suite == "cdybe") {
        DynamicalParam dyn(cfg.lambda);
        record(cdybe_residual(rng.rect(1.0, height), rng.rect(1.0, height),
                              rng.rect(1.0, height), dyn, ts));
      } else if (cfg.suite == "fay") {
        record(fay_residual(rng.rect(1.0, height), rng.rect(1.0, height),
                            rng.rect(1.0, height), ts));
      } else if (cfg.suite == "addition") {
        int N = 2 + static_cast<int>(rng.next_u64() % 3);
        std::vector<Cx> us = draw_points(rng, N, height);
        std::vector<Cx> ls = draw_points(rng, N, 0.2);
        record(addition_formula_residual(us, ls, rng.rect(1.0, height), ts));
      } else if (cfg.suite == "recursion") {
        int n = 2 + static_cast<int>(rng.next_u64() % 4);  // 2..5
        if (c % 2 == 0) {
          LatticeInstance inst =
              random_sixvertex_instance(n, rng.next_u64(), aniso);
          record(korepin_residual_sixvertex(
              inst, [](const LatticeInstance& it) { return izergin(it); }));
        } else {
          LatticeInstance inst = random_sos_instance(n, rng.next_u64(), ts, aniso,
                                                     DynamicalParam(cfg.lambda));
          record(korepin_residual_sos(
              inst, [](const LatticeInstance& it) { return sos_formula(it); }));
        }
      } else if (cfg.suite == "degeneration") {
        // kernel degeneration (b) against the tau = 30i elliptic kernel, and
        // the prefactored Felder -> trigonometric SOS R-matrix limit; both
        // sit at machine precision.  The omega-rescaled cases (a)/(c) have
        // their own reference tolerances and live in the unit/acceptance
        // suites.
        DegenerationParams p;
        p.lambda = rng.rect(1.0, 0.2) + Cx(0.05, 0.05);
        auto b = degenerate_kernel(DegenerationKind::trig_b, rng.rect(1.0, 0.2) + Cx(0.1, 0.1),
                                   rng.rect(1.0, 0.2) - Cx(0.5, 0.0), p, ts);
        ThetaSeries ts30{ModularParam(Cx(0.0, 30.0))};
        Cx uu = rng.rect(1.0, 0.2), vv = rng.rect(1.0, 0.2) - Cx(0.4, 0.0);
        DynamicalParam dynl(p.lambda);
        TensorMatrix2 rf = r_felder(uu - vv, dynl, aniso, ts30);
        rf *= 2.0 * kPi * kI * std::exp(kI * kPi * (uu + vv));
        TensorMatrix2 rt = r_trig_sos(std::exp(2.0 * kPi * kI * uu),
                                      std::exp(2.0 * kPi * kI * vv), dynl, aniso);
        record(std::max(b.residual, (rf - rt).max_norm()));
      } else if (cfg.suite == "averaging") {
        Cx lam = cfg.lambda_set ? cfg.lambda : Cx(0.0, -0.37 * cfg.tau.imag());
        auto res = averaging_partial_sum(rng.rect(1.0, 0.45) + Cx(0.05, 0.05),
                                         DynamicalParam(lam), ts, 40);
        record(std::max(res.offdiag_residual, res.cartan_residual));
      } else if (cfg.suite == "interpolation") {
        int n = 2 + static_cast<int>(rng.next_u64() % 5);  // 2..6
        std::vector<Cx> zeros = draw_points(rng, n, height);
        Cx alpha = 0.0;
        for (Cx z : zeros) alpha += z;
        auto f = [&](Cx x) {
          Cx t = 1.0;
          for (Cx z : zeros) t *= theta(x - z, ts);
          return t;
        };
        NodeSet nodes{draw_points(rng, n, height), alpha};
        std::vector<Cx> vals;
        for (Cx x : nodes.nodes) vals.push_back(f(x));
        auto P = interpolate(vals, nodes, Character::standard(n, alpha), ts);
        double worst_case = 0.0;
        for (int probe = 0; probe < 10; ++probe) {
          Cx x = rng.rect(1.0, height);
          worst_case = std::max(worst_case, rel_residual(P(x), f(x)));
        }
        record(worst_case);
      }
    } catch (const std::exception& e) {
      record_error(e);
    }
  }
  rep.timing["total"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rep.body["max_residual"] = worst;
  rep.body["all_pass"] = ok;
  rep.all_pass = ok;
  return rep;
}

}  // namespace latlab
