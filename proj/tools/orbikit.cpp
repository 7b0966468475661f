// orbikit command line: verification reports for groups, cocycles, twisted
// group algebras, orbit algebras, dual pairs, and the boson scenarios.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "orbikit/assoc.hpp"
#include "orbikit/boson.hpp"
#include "orbikit/cocycles.hpp"
#include "orbikit/dualpair.hpp"
#include "orbikit/instance.hpp"
#include "orbikit/orbit.hpp"
#include "orbikit/report.hpp"
#include "orbikit/scenarios.hpp"
#include "orbikit/suite.hpp"
#include "orbikit/tga.hpp"

namespace {

using namespace orbikit;

struct Options {
  std::string format = "text";
  std::uint64_t seed = 0;
  bool seed_given = false;
  double tol = 1e-9;
  double cutoff = -1.0;
  int word_length = 0;
};

std::uint64_t env_seed() {
  if (const char* env = std::getenv("ORBIFOLD_KIT_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw Error("ORBIFOLD_KIT_SEED is not an integer");
    }
  }
  return 0;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ToleranceConfig tol_config(const Options& opt) {
  ToleranceConfig t;
  t.eps_rank = t.eps_eig = t.eps_residual = opt.tol;
  return t;
}

int emit(const Report& rep, const Options& opt) {
  if (opt.format == "json")
    std::cout << rep.to_json().dump(2) << "\n";
  else
    std::cout << rep.to_text();
  return rep.overall() ? 0 : 1;
}

Instance load(const std::string& path, Report& rep) {
  std::string text = read_file(path);
  rep.input_digest = fnv1a_digest(text);
  return parse_instance(text);
}

int cmd_check_group(const std::string& path, const Options& opt) {
  Report rep;
  rep.command = "check group";
  rep.seed = opt.seed;
  Instance inst = load(path, rep);
  if (!inst.group) throw SemanticError("file has no [group] section");
  CheckRecord c;
  c.name = "group-table";
  c.tag = "group-axioms";
  c.ok = true;  // construction validates the axioms
  c.details = Json{{"order", inst.group->order},
                   {"center_order", center(*inst.group).order()}};
  rep.add(std::move(c));
  return emit(rep, opt);
}

int cmd_check_cocycle(const std::string& path, const Options& opt) {
  Report rep;
  rep.command = "check cocycle";
  rep.seed = opt.seed;
  Instance inst = load(path, rep);
  if (!inst.group || !inst.cocycle)
    throw SemanticError("file needs [group] and [cocycle] sections");
  CocycleVerdict v = verify_cocycle(*inst.group, *inst.cocycle);
  CheckRecord c;
  c.name = "cocycle-identity";
  c.tag = "cocycle-identity";
  c.ok = v.ok;
  Json viols = Json::array();
  for (std::size_t i = 0; i < v.violations.size() && i < 8; ++i)
    viols.push_back(Json{{"g", v.violations[i].g},
                         {"h", v.violations[i].h},
                         {"k", v.violations[i].k},
                         {"kind", v.violations[i].kind == CocycleViolation::Kind::identity
                                      ? "identity"
                                      : "normalization"}});
  c.details = Json{{"violations", viols}, {"violation_count", v.violations.size()}};
  rep.add(std::move(c));
  return emit(rep, opt);
}

int cmd_check_family(const std::string& path, const Options& opt) {
  Report rep;
  rep.command = "check family";
  rep.seed = opt.seed;
  Instance inst = load(path, rep);  // parse rejects invalid families
  if (!inst.family) throw SemanticError("file needs [group], [action] and [family] sections");
  CheckRecord c;
  c.name = "family-relation";
  c.tag = "cocycle-family-relation";
  c.ok = true;
  c.details = Json{{"points", inst.family->points}, {"trivial", inst.family->is_trivial()}};
  rep.add(std::move(c));
  return emit(rep, opt);
}

int cmd_tga_decompose(const std::string& path, const Options& opt) {
  Report rep;
  rep.command = "tga decompose";
  rep.seed = opt.seed;
  Instance inst = load(path, rep);
  if (!inst.group || !inst.cocycle)
    throw SemanticError("file needs [group] and [cocycle] sections");
  TwistedGroupAlgebra t = build_tga(*inst.group, *inst.cocycle);
  std::vector<SimpleModule> sm = simples(t, opt.seed, tol_config(opt));
  CheckRecord c;
  c.name = "twisted-algebra-simples";
  c.tag = "twisted-simples";
  c.ok = true;
  Json dims = Json::array(), mults = Json::array();
  for (const auto& s : sm) {
    dims.push_back(s.dim());
    mults.push_back(s.multiplicity);
  }
  c.details = Json{{"dims", dims}, {"multiplicities", mults},
                   {"semisimple", is_semisimple(t.algebra, tol_config(opt))}};
  rep.add(std::move(c));
  return emit(rep, opt);
}

OrbitAlgebra orbit_from(const Instance& inst) {
  if (!inst.group || !inst.action) throw SemanticError("file needs [group] and [action]");
  CocycleFamily fam = inst.family
                          ? *inst.family
                          : CocycleFamily::trivial(inst.action->points, inst.group->order);
  return build_orbit_algebra(*inst.group, *inst.action, fam);
}

int cmd_orbit(const std::string& sub, const std::string& path, const Options& opt) {
  Report rep;
  rep.command = "orbit " + sub;
  rep.seed = opt.seed;
  Instance inst = load(path, rep);
  OrbitAlgebra a = orbit_from(inst);
  ToleranceConfig tol = tol_config(opt);

  if (sub == "build") {
    CheckRecord c;
    c.name = "orbit-algebra-build";
    c.tag = "orbit-algebra-structure";
    c.ok = a.mono.associativity_exact() && a.mono.unit_exact() && is_semisimple(a.algebra, tol);
    c.details = Json{{"dim", a.dim()}, {"orbits", a.orbit_list.size()}};
    rep.add(std::move(c));
    return emit(rep, opt);
  }

  if (sub == "simples" || sub == "verify") {
    std::vector<OrbitSimple> sm = enumerate_simples(a, opt.seed, tol);
    Json dims = Json::array();
    long long dimsq = 0;
    for (const auto& os : sm) {
      dims.push_back(os.module.dim());
      dimsq += static_cast<long long>(os.module.dim()) * os.module.dim();
    }
    CheckRecord c;
    c.name = "orbit-simples";
    c.tag = "clifford-induction-equivalence";
    c.ok = dimsq == a.dim();
    c.details = Json{{"dims", dims}, {"dim_squared_sum", dimsq}, {"dim_algebra", a.dim()}};
    rep.add(std::move(c));
  }
  if (sub == "verify") {
    // full certificate battery on this instance
    double worst = 0.0;
    bool ok = a.mono.associativity_exact() && a.mono.unit_exact();
    bool stab_ok = true;
    for (const auto& orbit : a.orbit_list) {
      int base = orbit.front();
      StabilizerAlgebra s = stabilizer_algebra(a, base);
      stab_ok = stab_ok && stabilizer_iso_exact(a, s);
      for (const SimpleModule& w : simples(s.tga, opt.seed, tol)) {
        Representation wrep{w.dim(), w.matrices};
        InducedModule ind = induce(a, base, wrep);
        Representation back = restrict_to_point(a, base, ind.rep, tol);
        auto t = module_iso(wrep, back, tol, opt.seed);
        if (!t) {
          ok = false;
          continue;
        }
        for (std::size_t i = 0; i < wrep.rho.size(); ++i)
          worst = std::max(worst, (back.rho[i] * *t - *t * wrep.rho[i]).norm());
      }
    }
    BlockDecomposition bd = block_decomposition(a);
    CheckRecord c;
    c.name = "orbit-certificates";
    c.tag = "orbit-blocks-annihilate";
    c.ok = ok && stab_ok && bd.annihilate_exactly && bd.units_sum_to_one && worst < 10 * opt.tol;
    c.residual = worst;
    c.details = Json{{"stabilizer_iso_exact", stab_ok},
                     {"blocks_annihilate", bd.annihilate_exactly},
                     {"units_sum_to_one", bd.units_sum_to_one}};
    rep.add(std::move(c));
  }
  return emit(rep, opt);
}

int cmd_dualpair(const std::string& path, const Options& opt) {
  Report rep;
  rep.command = "dualpair analyze";
  rep.seed = opt.seed;
  Instance inst = load(path, rep);
  if (!inst.algebra || !inst.pair)
    throw SemanticError("file needs [algebra] and [pair] sections");
  ToleranceConfig tol = tol_config(opt);
  Representation rho{inst.pair->carrier, inst.pair->rho};
  CommutingPair pair = make_commuting_pair(*inst.algebra, rho, inst.pair->b_ops,
                                           inst.pair->ambient, inst.group,
                                           inst.pair->phi, tol);
  DualPairReport dpr = verify_dual_pair(pair, opt.word_length, opt.seed, tol);
  CheckRecord c;
  c.name = "dual-pair";
  c.tag = "fixed-algebra-dual-pair";
  c.ok = dpr.overall;
  Json classes = Json::array();
  for (const auto& cr : dpr.classes) {
    c.residual = std::max(c.residual, cr.residual);
    classes.push_back(Json{{"class", cr.class_id},
                           {"present", cr.present},
                           {"multiplicity", cr.multiplicity},
                           {"irreducible", cr.irreducible},
                           {"inconclusive", cr.inconclusive},
                           {"span", cr.word_span_dim}});
  }
  Json notes = Json::array();
  for (const auto& n : dpr.notes) notes.push_back(n);
  c.details = Json{{"classes", classes}, {"notes", notes}};
  rep.add(std::move(c));
  return emit(rep, opt);
}

int cmd_boson(const std::string& scenario, const Options& opt) {
  int cutoff_hu = opt.cutoff < 0 ? -1 : static_cast<int>(std::llround(2.0 * opt.cutoff));
  Report rep = run_scenario(scenario, cutoff_hu, opt.seed);
  rep.input_digest = fnv1a_digest("builtin:" + scenario);
  return emit(rep, opt);
}

int cmd_suite(const Options& opt) {
  Report rep = run_suite(opt.seed);
  return emit(rep, opt);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"orbikit: orbifold dual-pair verification kit"};
  app.require_subcommand(1);

  Options opt;
  app.add_option("--format", opt.format, "Report format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", opt.seed, "Seed for every randomized step");
  app.add_option("--tol", opt.tol, "Tolerance for rank/eigenvalue/residual thresholds");

  std::string file, sub, scenario;

  auto* check = app.add_subcommand("check", "Verify a group, cocycle, or family file");
  check->add_option("kind", sub, "group | cocycle | family")->required();
  check->add_option("file", file, "Instance file")->required();

  auto* tga = app.add_subcommand("tga", "Twisted group algebra commands");
  tga->add_option("action", sub, "decompose")->required();
  tga->add_option("file", file, "Instance file with [group] and [cocycle]")->required();

  auto* orbit = app.add_subcommand("orbit", "Orbit algebra commands");
  orbit->add_option("action", sub, "build | verify | simples")->required();
  orbit->add_option("file", file, "Instance file with [group], [action], optional [family]")
      ->required();

  auto* dual = app.add_subcommand("dualpair", "Dual-pair analysis");
  dual->add_option("action", sub, "analyze")->required();
  dual->add_option("file", file, "Instance file with [algebra] and [pair]")->required();
  dual->add_option("--word-length", opt.word_length, "Word length bound (default 2*carrier)");

  auto* boson = app.add_subcommand("boson", "Fock-window scenarios");
  boson->add_option("action", sub, "run")->required();
  boson->add_option("scenario", scenario, "z2_untwisted | z2_twisted | d4_galois | d4_appear_v | not0_check")
      ->required();
  boson->add_option("--cutoff", opt.cutoff, "Degree cutoff (half-integers allowed, e.g. 5.5)");

  auto* suite = app.add_subcommand("suite", "Run the verification battery");
  suite->add_option("action", sub, "all")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (!app.count("--seed")) opt.seed = env_seed();
    if (check->parsed()) {
      if (sub == "group") return cmd_check_group(file, opt);
      if (sub == "cocycle") return cmd_check_cocycle(file, opt);
      if (sub == "family") return cmd_check_family(file, opt);
      throw Error("unknown check kind '" + sub + "'");
    }
    if (tga->parsed()) {
      if (sub == "decompose") return cmd_tga_decompose(file, opt);
      throw Error("unknown tga action '" + sub + "'");
    }
    if (orbit->parsed()) {
      if (sub == "build" || sub == "verify" || sub == "simples")
        return cmd_orbit(sub, file, opt);
      throw Error("unknown orbit action '" + sub + "'");
    }
    if (dual->parsed()) {
      if (sub == "analyze") return cmd_dualpair(file, opt);
      throw Error("unknown dualpair action '" + sub + "'");
    }
    if (boson->parsed()) {
      if (sub == "run") return cmd_boson(scenario, opt);
      throw Error("unknown boson action '" + sub + "'");
    }
    if (suite->parsed()) {
      if (sub == "all") return cmd_suite(opt);
      throw Error("unknown suite action '" + sub + "'");
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SemanticError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
