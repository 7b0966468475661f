#include "orbikit/suite.hpp"

#include <algorithm>
#include <cmath>

#include "orbikit/assoc.hpp"
#include "orbikit/boson.hpp"
#include "orbikit/cocycles.hpp"
#include "orbikit/dualpair.hpp"
#include "orbikit/orbit.hpp"
#include "orbikit/scenarios.hpp"
#include "orbikit/tga.hpp"

namespace orbikit {

namespace {

TwoCocycle klein_sign_cocycle() {
  // alpha((i,j),(k,l)) = (-1)^{j k}; element x has bits (i = x&1, j = x>>1)
  TwoCocycle c = TwoCocycle::trivial(4);
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      if (((x >> 1) & 1) && (y & 1)) c(x, y) = RootOfUnity::make(2, 1);
  return c;
}

// Standard representative cocycle on Z_n: alpha_c(g^a, g^b) = c^{floor((a+b)/n)}.
TwoCocycle cyclic_cocycle(int n, const RootOfUnity& c) {
  TwoCocycle alpha = TwoCocycle::trivial(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a + b >= n) alpha(a, b) = c;
  return alpha;
}

struct OrbitInstance {
  std::string name;
  FiniteGroup group;
  GroupAction action;
  CocycleFamily family;
};

std::vector<OrbitInstance> theorem71_instances() {
  std::vector<OrbitInstance> out;
  {
    FiniteGroup z2 = cyclic_group(2);
    out.push_back({"fixed-point", z2, trivial_action(z2, 1), CocycleFamily::trivial(1, 2)});
  }
  {
    FiniteGroup z2 = cyclic_group(2);
    GroupAction swap = make_action(z2, {{0, 1}, {1, 0}});
    out.push_back({"free-2-orbit", z2, swap, CocycleFamily::trivial(2, 2)});
  }
  {
    FiniteGroup k4 = klein_four_group();
    // a (index 1) swaps the labels, b (index 2) fixes them
    GroupAction act = make_action(k4, {{0, 1, 0, 1}, {1, 0, 1, 0}});
    out.push_back({"klein-on-2-points", k4, act, CocycleFamily::trivial(2, 4)});
  }
  return out;
}

double iso_residual(const Representation& r1, const Representation& r2, const Mat& t) {
  double worst = 0.0;
  for (std::size_t i = 0; i < r1.rho.size(); ++i)
    worst = std::max(worst, (r2.rho[i] * t - t * r1.rho[i]).norm());
  return worst;
}

CheckRecord criterion_tga_klein(std::uint64_t seed) {
  CheckRecord c;
  c.name = "twisted-group-algebra-klein-sign";
  c.tag = "klein-sign-single-simple";
  TwistedGroupAlgebra t = build_tga(klein_four_group(), klein_sign_cocycle());
  AlgebraVerdict av = verify_algebra(t.algebra);
  bool exact = t.mono.associativity_exact() && t.mono.unit_exact();
  std::vector<SimpleModule> sm = simples(t, seed);
  bool shape = sm.size() == 1 && sm[0].dim() == 2 && sm[0].multiplicity == 2;
  c.ok = av.ok && exact && shape && is_semisimple(t.algebra);
  c.residual = av.worst_residual;
  c.details = Json{{"classes", sm.size()},
                   {"dim", sm.empty() ? 0 : sm[0].dim()},
                   {"multiplicity", sm.empty() ? 0 : sm[0].multiplicity},
                   {"dim_squared_sum", 4},
                   {"exact_structure", exact}};
  return c;
}

CheckRecord criterion_cyclic_triviality(std::uint64_t seed) {
  CheckRecord c;
  c.name = "cyclic-cocycle-triviality";
  c.tag = "cyclic-cocycle-trivial";
  c.ok = true;
  int trials_run = 0;
  Json failures = Json::array();
  for (int n = 2; n <= 6; ++n) {
    FiniteGroup zn = cyclic_group(n);
    Rng rng(seed ^ (0xc0c0ULL * n));
    for (int trial = 0; trial < 20; ++trial) {
      // random mu_n-valued cocycle: representative class times a coboundary
      RootOfUnity cls = RootOfUnity::make(n, static_cast<long long>(rng.next_u64() % n));
      std::vector<RootOfUnity> beta(n, RootOfUnity::one());
      for (int e = 1; e < n; ++e)
        beta[e] = RootOfUnity::make(n, static_cast<long long>(rng.next_u64() % n));
      TwoCocycle alpha = cocycle_product(cyclic_cocycle(n, cls), coboundary(zn, beta));
      if (!verify_cocycle(zn, alpha).ok) {
        c.ok = false;
        failures.push_back(Json{{"n", n}, {"trial", trial}, {"why", "generator invalid"}});
        continue;
      }
      CohomologyResult coh = are_cohomologous(zn, TwoCocycle::trivial(n), alpha);
      if (!coh.beta) {
        c.ok = false;
        failures.push_back(Json{{"n", n}, {"trial", trial}, {"why", "no certificate"}});
      }
      std::vector<SimpleModule> sm = simples(build_tga(zn, alpha), seed ^ trial);
      bool ones = static_cast<int>(sm.size()) == n;
      for (const auto& s : sm)
        if (s.dim() != 1) ones = false;
      if (!ones) {
        c.ok = false;
        failures.push_back(Json{{"n", n}, {"trial", trial}, {"why", "simples not 1-dim"}});
      }
      ++trials_run;
    }
  }
  c.residual = 0.0;
  c.details = Json{{"trials", trials_run}, {"failures", failures}};
  return c;
}

CheckRecord criterion_theorem71(std::uint64_t seed) {
  CheckRecord c;
  c.name = "orbit-algebra-classification";
  c.tag = "clifford-induction-equivalence";
  c.ok = true;
  double worst = 0.0;
  Json inst_details = Json::array();

  for (const OrbitInstance& oi : theorem71_instances()) {
    OrbitAlgebra a = build_orbit_algebra(oi.group, oi.action, oi.family);
    bool exact = a.mono.associativity_exact() && a.mono.unit_exact();
    bool semisimple = is_semisimple(a.algebra);

    bool stab_exact = true;
    double rt_worst = 0.0;
    for (const auto& orbit : a.orbit_list) {
      int base = orbit.front();
      StabilizerAlgebra s = stabilizer_algebra(a, base);
      stab_exact = stab_exact && stabilizer_iso_exact(a, s);
      // restrict(induce(W)) == W for every stabilizer simple W
      for (const SimpleModule& w : simples(s.tga, seed)) {
        Representation wrep{w.dim(), w.matrices};
        InducedModule ind = induce(a, base, wrep);
        Representation back = restrict_to_point(a, base, ind.rep);
        auto t = module_iso(wrep, back);
        if (!t) {
          c.ok = false;
          continue;
        }
        rt_worst = std::max(rt_worst, iso_residual(wrep, back, *t));
      }
    }

    // induce(restrict(X)) == X for every block simple X
    std::vector<OrbitSimple> blocks_simples = enumerate_simples(a, seed);
    long long dimsq = 0;
    for (const OrbitSimple& os : blocks_simples) {
      dimsq += static_cast<long long>(os.module.dim()) * os.module.dim();
      Representation w = restrict_to_point(a, os.base_point, os.module.rep);
      InducedModule again = induce(a, os.base_point, w);
      auto t = module_iso(os.module.rep, again.rep);
      if (!t) {
        c.ok = false;
        continue;
      }
      rt_worst = std::max(rt_worst, iso_residual(os.module.rep, again.rep, *t));
    }
    BlockDecomposition bd = block_decomposition(a);
    bool counts = dimsq == a.dim();

    if (!(exact && semisimple && stab_exact && counts && bd.annihilate_exactly &&
          bd.units_sum_to_one && rt_worst < 1e-9))
      c.ok = false;
    worst = std::max(worst, rt_worst);

    Json dims = Json::array();
    for (const OrbitSimple& os : blocks_simples) dims.push_back(os.module.dim());
    inst_details.push_back(Json{{"instance", oi.name},
                                {"simple_dims", dims},
                                {"round_trip_residual", rt_worst},
                                {"blocks_annihilate", bd.annihilate_exactly},
                                {"stabilizer_iso_exact", stab_exact}});
  }
  c.residual = worst;
  c.details = Json{{"instances", inst_details}};
  return c;
}

CheckRecord criterion_natural_corollary(std::uint64_t seed) {
  CheckRecord c;
  c.name = "natural-module-simplicity";
  c.tag = "free-orbit-simplicity";
  c.ok = true;
  Json rows = Json::array();

  auto run_one = [&](const std::string& name, const FiniteGroup& g, const GroupAction& act) {
    CocycleFamily fam = CocycleFamily::trivial(act.points, g.order);
    OrbitAlgebra a = build_orbit_algebra(g, act, fam);
    for (const auto& orbit : a.orbit_list) {
      int base = orbit.front();
      auto os = orbit_and_stabilizer(g, act, base);
      NaturalSimplicity ns = natural_module_simplicity(a, base);
      bool expect_simple = os.stabilizer.order() == 1;
      if (ns.simple != expect_simple) c.ok = false;
      rows.push_back(Json{{"instance", name},
                          {"stabilizer_order", os.stabilizer.order()},
                          {"span", ns.span_dim},
                          {"full_square", ns.full_square},
                          {"simple", ns.simple}});
    }
  };

  for (const OrbitInstance& oi : theorem71_instances()) run_one(oi.name, oi.group, oi.action);

  // ten seeded coset actions of groups of order <= 8
  Rng rng(seed ^ 0x0417ULL);
  std::vector<FiniteGroup> pool{cyclic_group(2), cyclic_group(3),  cyclic_group(4),
                                klein_four_group(), cyclic_group(6), symmetric_group_s3(),
                                dihedral_group(4), cyclic_group(8)};
  for (int t = 0; t < 10; ++t) {
    const FiniteGroup& g = pool[rng.next_u64() % pool.size()];
    std::vector<Subgroup> subs = all_subgroups(g);
    const Subgroup& h = subs[rng.next_u64() % subs.size()];
    // right multiplication on right cosets Hx
    std::vector<int> coset_of(g.order, -1);
    std::vector<int> reps = right_transversal(g, h);
    for (int r = 0; r < static_cast<int>(reps.size()); ++r)
      for (int m : h.members) coset_of[g.mul(m, reps[r])] = r;
    std::vector<std::vector<int>> table(reps.size(), std::vector<int>(g.order));
    for (int r = 0; r < static_cast<int>(reps.size()); ++r)
      for (int x = 0; x < g.order; ++x) table[r][x] = coset_of[g.mul(reps[r], x)];
    run_one("coset-|G|=" + std::to_string(g.order) + "-|H|=" + std::to_string(h.order()),
            g, make_action(g, std::move(table)));
  }

  c.residual = 0.0;
  c.details = Json{{"cases", rows}};
  return c;
}

CheckRecord criterion_jacobson(std::uint64_t seed) {
  CheckRecord c;
  c.name = "jacobson-density-witnesses";
  c.tag = "density-witness";
  c.ok = true;

  struct Pool {
    StructureAlgebra algebra;
    std::vector<Representation> simples;
  };
  std::vector<Pool> pools;
  auto add_tga = [&](const TwistedGroupAlgebra& t) {
    Pool p;
    p.algebra = t.algebra;
    for (const SimpleModule& s : simples(t, seed)) p.simples.push_back({s.dim(), s.matrices});
    pools.push_back(std::move(p));
  };
  add_tga(build_tga(cyclic_group(2), TwoCocycle::trivial(2)));
  add_tga(build_tga(cyclic_group(3), TwoCocycle::trivial(3)));
  add_tga(build_tga(symmetric_group_s3(), TwoCocycle::trivial(6)));
  add_tga(build_tga(klein_four_group(), klein_sign_cocycle()));

  Rng rng(seed ^ 0x3acULL);
  double worst = 0.0;
  int trials = 0;
  for (int t = 0; t < 100; ++t) {
    const Pool& pool = pools[rng.next_u64() % pools.size()];
    // pick a nonempty subset of the simple classes
    std::vector<int> chosen;
    for (int i = 0; i < static_cast<int>(pool.simples.size()); ++i)
      if (rng.uniform() < 0.7) chosen.push_back(i);
    if (chosen.empty()) chosen.push_back(static_cast<int>(rng.next_u64() % pool.simples.size()));

    std::vector<Representation> reps;
    std::vector<WitnessSample> samples;
    for (std::size_t b = 0; b < chosen.size(); ++b) {
      const Representation& rep = pool.simples[chosen[b]];
      reps.push_back(rep);
      int k = 1 + static_cast<int>(rng.next_u64() % std::min(3, rep.dim));
      Mat xs(rep.dim, k);
      while (true) {
        for (int j = 0; j < k; ++j)
          for (int i = 0; i < rep.dim; ++i) xs(i, j) = rng.normal_complex();
        if (numerical_rank(xs) == k) break;
      }
      for (int j = 0; j < k; ++j) {
        Vec y(rep.dim);
        for (int i = 0; i < rep.dim; ++i) y(i) = rng.normal_complex();
        samples.push_back({static_cast<int>(b), xs.col(j), y});
      }
    }
    try {
      Witness w = jacobson_witness(pool.algebra, reps, samples);
      worst = std::max(worst, w.residual);
      if (w.residual >= 1e-9) c.ok = false;
    } catch (const NoWitness&) {
      c.ok = false;
    }
    ++trials;
  }

  // constructed contradiction: the same simple presented twice
  bool negative_ok = false;
  {
    const Pool& s3 = pools[2];
    const Representation* two_dim = nullptr;
    for (const Representation& r : s3.simples)
      if (r.dim == 2) two_dim = &r;
    std::vector<Representation> reps{*two_dim, *two_dim};
    Vec e1 = Vec::Zero(2), e2 = Vec::Zero(2);
    e1(0) = 1.0;
    e2(1) = 1.0;
    std::vector<WitnessSample> samples{{0, e1, e2}, {1, e1, 2.0 * e2}};
    try {
      jacobson_witness(s3.algebra, reps, samples);
    } catch (const NoWitness&) {
      negative_ok = true;
    }
  }
  if (!negative_ok) c.ok = false;

  c.residual = worst;
  c.details = Json{{"trials", trials}, {"negative_trial_rejected", negative_ok}};
  return c;
}

CheckRecord summarize(const Report& sub, const std::string& name, const std::string& tag) {
  CheckRecord c;
  c.name = name;
  c.tag = tag;
  c.ok = sub.overall();
  for (const auto& sc : sub.checks) c.residual = std::max(c.residual, sc.residual);
  Json inner = Json::array();
  for (const auto& sc : sub.checks)
    inner.push_back(Json{{"name", sc.name}, {"ok", sc.ok}, {"residual", sc.residual}});
  c.details = Json{{"checks", inner}};
  return c;
}

}  // namespace

Report run_suite(std::uint64_t seed) {
  Report rep;
  rep.command = "suite all";
  rep.seed = seed;
  rep.input_digest = fnv1a_digest("builtin:suite");

  rep.add(criterion_tga_klein(seed));
  rep.add(criterion_cyclic_triviality(seed));
  rep.add(criterion_theorem71(seed));
  rep.add(criterion_natural_corollary(seed));
  rep.add(criterion_jacobson(seed));

  // z2_untwisted with the frozen even-part grading
  {
    Report sub = run_scenario("z2_untwisted", -1, seed);
    CheckRecord c = summarize(sub, "scenario-z2-untwisted", "fixed-algebra-dual-pair");
    const std::vector<long long> frozen{1, 0, 1, 1, 3, 3, 6};
    bool dims_ok = false;
    for (const auto& sc : sub.checks)
      if (sc.name == "fixed-dims-vs-parity-oracle" && sc.details.contains("fixed"))
        dims_ok = sc.details["fixed"].get<std::vector<long long>>() == frozen;
    c.ok = c.ok && dims_ok && c.residual < 1e-8;
    c.details["even_dims_frozen"] = dims_ok;
    rep.add(std::move(c));
  }
  {
    Report sub = run_scenario("z2_twisted", -1, seed);
    rep.add(summarize(sub, "scenario-z2-twisted", "twisted-two-summands"));
  }
  {
    Report g = run_scenario("d4_galois", -1, seed);
    Report v = run_scenario("d4_appear_v", -1, seed);
    CheckRecord cg = summarize(g, "scenario-d4-galois", "galois-injectivity");
    CheckRecord cv = summarize(v, "scenario-d4-appear-v", "every-irreducible-appears");
    CheckRecord both;
    both.name = "scenario-d4";
    both.tag = "galois-and-appearance";
    both.ok = cg.ok && cv.ok;
    both.residual = std::max(cg.residual, cv.residual);
    both.details = Json{{"galois", cg.details}, {"appear_v", cv.details}};
    rep.add(std::move(both));
  }
  {
    Report sub = run_mode_calculus_checks(12, seed);
    rep.add(summarize(sub, "mode-calculus", "heisenberg-bracket"));
  }
  {
    // determinism spot check: an identical rerun serializes identically
    Report once = run_scenario("z2_twisted", -1, seed);
    Report twice = run_scenario("z2_twisted", -1, seed);
    bool same = once.to_json().dump() == twice.to_json().dump();
    CheckRecord c;
    c.name = "determinism";
    c.tag = "byte-deterministic-reports";
    c.ok = same;
    c.details = Json{{"bytes", once.to_json().dump().size()}};
    rep.add(std::move(c));
  }

  // not0_check rides along with the suite as an extra guard
  {
    Report sub = run_scenario("not0_check", -1, seed);
    rep.add(summarize(sub, "scenario-not0-check", "nonzero-mode-combination"));
  }
  return rep;
}

}  // namespace orbikit
