#include "orbikit/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "orbikit/assoc.hpp"
#include "orbikit/boson.hpp"
#include "orbikit/cocycles.hpp"
#include "orbikit/dualpair.hpp"
#include "orbikit/tga.hpp"

namespace orbikit {

namespace {

CheckRecord make_check(const std::string& name, const std::string& tag, bool ok,
                       double residual, Json details = Json::object()) {
  CheckRecord c;
  c.name = name;
  c.tag = tag;
  c.ok = ok;
  c.residual = residual;
  c.details = std::move(details);
  return c;
}

// Count of monomials at a degree whose label count is even: the oracle for
// the parity-fixed subspace of the rank-1 window.
long long parity_fixed_count(const FockWindow& w, int degree_hu, bool even) {
  long long total = 0;
  for (int i = 0; i < w.dim(); ++i) {
    if (w.degree_hu[i] != degree_hu) continue;
    bool is_even = w.basis[i].size() % 2 == 0;
    if (is_even == even) ++total;
  }
  return total;
}

Eigen::MatrixXd minus_one_1d() {
  Eigen::MatrixXd o(1, 1);
  o(0, 0) = -1.0;
  return o;
}

// ---------------------------------------------------------------------------
// z2_untwisted: the fixed-subalgebra dual pair on the untwisted rank-1 window
// ---------------------------------------------------------------------------
Report z2_untwisted(int cutoff_hu, std::uint64_t seed) {
  Report rep;
  rep.command = "boson run z2_untwisted";
  rep.seed = seed;

  FockWindow w = fock_window(1, cutoff_hu, Sector::untwisted);
  VOAAutomorphism theta = automorphism_action(w, minus_one_1d());
  FiniteGroup z2 = cyclic_group(2);

  // graded fixed dimensions against the parity oracle
  std::vector<Mat> fixed = fixed_vectors(w, {theta.gamma});
  Json dims = Json::array(), oracle = Json::array();
  bool dims_ok = true;
  for (int d = 0; d <= cutoff_hu; d += 2) {
    long long got = fixed[d].cols();
    long long want = parity_fixed_count(w, d, /*even=*/true);
    dims.push_back(got);
    oracle.push_back(want);
    if (got != want) dims_ok = false;
  }
  rep.add(make_check("fixed-dims-vs-parity-oracle", "orbifold-fixed-grading", dims_ok, 0.0,
                     Json{{"fixed", dims}, {"oracle", oracle}}));

  StructureAlgebra a = group_algebra(z2);
  Representation rho{w.dim(), {Mat::Identity(w.dim(), w.dim()), theta.gamma}};
  // The parity orbifold needs both of its generators: quadratic modes alone
  // leave the multiplicity spaces reducible (they split along the c=1
  // Virasoro decomposition), so the weight-4 invariant rides along.
  std::vector<Mat> b_ops;
  Json b_labels = Json::array();
  for (int n_hu : {-4, -2, 0, 2, 4}) {
    ModeOp h = quadratic_mode(w, n_hu);
    b_ops.push_back(h.matrix);
    b_labels.push_back(h.label);
  }
  {
    ModeOp j0 = quartic_mode(w, 0);
    b_ops.push_back(j0.matrix);
    b_labels.push_back(j0.label);
  }
  std::vector<Mat> ambient = b_ops;
  for (int n_hu : {-4, -2, 2, 4}) ambient.push_back(heisenberg_mode(w, 0, n_hu).matrix);

  CommutingPair pair =
      make_commuting_pair(a, rho, b_ops, ambient, z2, {Mat::Identity(w.dim(), w.dim()), theta.gamma});

  IsotypicSplit split = isotypic_split(pair, seed);
  DualPairReport dpr = verify_dual_pair(pair, 2 * w.dim(), seed, {}, &split);
  Json classes = Json::array();
  double worst = 0.0;
  int present = 0;
  for (const ClassReport& cr : dpr.classes) {
    classes.push_back(Json{{"class", cr.class_id},
                           {"multiplicity", cr.multiplicity},
                           {"irreducible", cr.irreducible},
                           {"inconclusive", cr.inconclusive},
                           {"span", cr.word_span_dim},
                           {"length", cr.word_length_used}});
    worst = std::max(worst, cr.residual);
    if (cr.present) ++present;
  }
  rep.add(make_check("dual-pair", "fixed-algebra-dual-pair", dpr.overall && present == 2,
                     worst, Json{{"classes", classes}, {"word_length_max", dpr.word_length_max}}));

  // converse round trip: equivariant prescriptions realized by averaged words
  WordSpan span = grow_word_span(ambient, 2 * w.dim());
  Rng rng(seed ^ 0xab5eedULL);
  double witness_worst = 0.0;
  int witness_ok = 0;
  const int trials = 20;
  for (int t = 0; t < trials; ++t) {
    Vec v = Vec::Zero(w.dim());
    for (int i = 0; i < w.dim(); ++i) v(i) = rng.normal_complex();
    Mat xa(w.dim(), 2);
    xa.col(0) = v;
    xa.col(1) = theta.gamma * v;
    Eigen::JacobiSVD<Mat> svd(xa, Eigen::ComputeThinU);
    Mat x = svd.matrixU().leftCols(2);
    // an equivariant f: a random element of the commutant, restricted to X
    Mat c = Mat::Zero(w.dim(), w.dim());
    for (const Mat& basis : split.component_bases) {
      Mat r = Mat::Zero(basis.cols(), basis.cols());
      for (int i = 0; i < r.rows(); ++i)
        for (int j = 0; j < r.cols(); ++j) r(i, j) = rng.normal_complex();
      c += basis * r * basis.adjoint();
    }
    InvariantWitness iw = invariant_witness(pair, x, c * x, 2 * w.dim(), &span);
    witness_worst = std::max(witness_worst, iw.residual);
    ++witness_ok;
  }
  rep.add(make_check("invariant-witness-round-trip", "averaged-density-witness",
                     witness_ok == trials && witness_worst < 1e-8, witness_worst,
                     Json{{"trials", trials}, {"span_dim", span.dimension}}));
  return rep;
}

// ---------------------------------------------------------------------------
// z2_twisted: intertwiner, extracted cocycle, and the two twisted summands
// ---------------------------------------------------------------------------
Report z2_twisted(int cutoff_hu, std::uint64_t seed) {
  Report rep;
  rep.command = "boson run z2_twisted";
  rep.seed = seed;

  FockWindow w = fock_window(1, cutoff_hu, Sector::twisted);
  // every mode coupling two interior degrees: pins the solution space as in
  // the untruncated module
  ModeFamily fam = generator_modes(w, w.cutoff_hu - 2);
  Intertwiner phi = find_intertwiner(w, fam, fam, minus_one_1d());

  const int idim = static_cast<int>(phi.interior.size());
  Mat phi2 = phi.phi * phi.phi;
  Complex scalar = phi2.trace() / static_cast<double>(idim);
  double scalar_dev = (phi2 - scalar * Mat::Identity(idim, idim)).norm();
  rep.add(make_check("intertwiner-square-scalar", "twisted-intertwiner", scalar_dev < 1e-9,
                     std::max(phi.residual, scalar_dev),
                     Json{{"scalar_re", scalar.real()}, {"scalar_im", scalar.imag()}}));

  FiniteGroup z2 = cyclic_group(2);
  GroupRep proj{Mat::Identity(idim, idim), phi.phi};
  TwoCocycle alpha = cocycle_of_projective(z2, proj);
  CohomologyResult coh = are_cohomologous(z2, alpha, TwoCocycle::trivial(2));
  rep.add(make_check("extracted-cocycle-trivializes", "cyclic-cocycle-trivial",
                     coh.beta.has_value(), 0.0,
                     Json{{"alpha_sigma_sigma_order", alpha(1, 1).order},
                          {"alpha_sigma_sigma_exponent", alpha(1, 1).exponent},
                          {"modulus", coh.modulus}}));

  TwistedGroupAlgebra tga = build_tga(z2, alpha);
  std::vector<SimpleModule> sm = simples(tga, seed);
  rep.add(make_check("twisted-z2-simple-count", "cyclic-twisted-simples",
                     sm.size() == 2 && sm[0].dim() == 1 && sm[1].dim() == 1, 0.0,
                     Json{{"count", sm.size()}}));

  // theta eigenspace summands distinguished by h(0) minima and graded dims
  VOAAutomorphism theta = automorphism_action(w, minus_one_1d());
  ModeOp h0 = quadratic_mode(w, 0);
  double min_even = 1e300, min_odd = 1e300;
  std::vector<long long> even_dims(cutoff_hu + 1, 0), odd_dims(cutoff_hu + 1, 0);
  for (int i = 0; i < w.dim(); ++i) {
    bool even = w.basis[i].size() % 2 == 0;
    double energy = h0.matrix(i, i).real();
    (even ? min_even : min_odd) = std::min(even ? min_even : min_odd, energy);
    (even ? even_dims : odd_dims)[w.degree_hu[i]] += 1;
  }
  bool minima_ok = std::abs(min_even - 1.0 / 16.0) < 1e-12 &&
                   std::abs(min_odd - (1.0 / 16.0 + 0.5)) < 1e-12;
  bool dims_differ = false;
  for (int d = 0; d + 2 <= cutoff_hu; ++d)
    if (even_dims[d] != odd_dims[d]) dims_differ = true;
  rep.add(make_check("twisted-summands-inequivalent", "twisted-two-summands",
                     minima_ok && dims_differ,
                     std::abs(min_odd - min_even - 0.5),
                     Json{{"h0_min_even", min_even},
                          {"h0_min_odd", min_odd},
                          {"summands", 2}}));
  return rep;
}

// ---------------------------------------------------------------------------
// d4 helpers
// ---------------------------------------------------------------------------
struct DihedralData {
  FiniteGroup group;
  std::vector<Eigen::MatrixXd> mats;  // orthogonal 2x2 per element
};

DihedralData dihedral_on_colors() {
  Eigen::MatrixXd rot(2, 2), ref(2, 2);
  rot << 0, -1, 1, 0;
  ref << 1, 0, 0, -1;
  std::vector<Eigen::MatrixXd> elems{Eigen::MatrixXd::Identity(2, 2)};
  auto find = [&](const Eigen::MatrixXd& m) {
    for (std::size_t i = 0; i < elems.size(); ++i)
      if ((elems[i] - m).norm() < 1e-9) return static_cast<int>(i);
    return -1;
  };
  for (std::size_t head = 0; head < elems.size(); ++head)
    for (const auto& gen : {rot, ref}) {
      Eigen::MatrixXd next = elems[head] * gen;
      if (find(next) < 0) elems.push_back(next);
    }
  const int n = static_cast<int>(elems.size());
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) table[i][j] = find(elems[i] * elems[j]);
  DihedralData d;
  d.group = group_from_table(std::move(table));
  d.mats = std::move(elems);
  return d;
}

Report d4_galois(int cutoff_hu, std::uint64_t seed) {
  Report rep;
  rep.command = "boson run d4_galois";
  rep.seed = seed;

  FockWindow w = fock_window(2, cutoff_hu, Sector::untwisted);
  DihedralData d4 = dihedral_on_colors();
  std::vector<Mat> gammas;
  for (const auto& m : d4.mats) gammas.push_back(automorphism_action(w, m).gamma);

  std::vector<Subgroup> subs = all_subgroups(d4.group);
  rep.add(make_check("subgroup-count", "dihedral-subgroups", subs.size() == 10, 0.0,
                     Json{{"count", subs.size()}}));

  // fixed towers per subgroup: projectors per degree, two independent paths
  struct Tower {
    std::vector<Mat> projectors;
  };
  std::vector<Tower> towers;
  double agreement = 0.0;
  for (const Subgroup& h : subs) {
    Tower t;
    std::vector<Mat> hg;
    for (int m : h.members) hg.push_back(gammas[m]);
    std::vector<Mat> fixed = fixed_vectors(w, hg);
    for (int d = 0; d <= cutoff_hu; d += 2) {
      const int sz = w.graded_dims[d];
      Mat kernel_proj = fixed[d].cols() ? Mat(fixed[d] * fixed[d].adjoint())
                                        : Mat(Mat::Zero(sz, sz));
      Mat avg = Mat::Zero(sz, sz);
      for (int m : h.members)
        avg += gammas[m].block(w.degree_start[d], w.degree_start[d], sz, sz);
      avg /= static_cast<double>(h.order());
      agreement = std::max(agreement, (kernel_proj - avg).norm());
      t.projectors.push_back(std::move(kernel_proj));
    }
    towers.push_back(std::move(t));
  }
  rep.add(make_check("fixed-tower-oracle-agreement", "fixed-tower-projectors",
                     agreement < 1e-9, agreement, Json{{"subgroups", subs.size()}}));

  bool all_distinct = true;
  double min_separation = 1e300;
  for (std::size_t i = 0; i < towers.size(); ++i)
    for (std::size_t j = i + 1; j < towers.size(); ++j) {
      double sep = 0.0;
      for (std::size_t d = 0; d < towers[i].projectors.size(); ++d)
        sep = std::max(sep, (towers[i].projectors[d] - towers[j].projectors[d]).norm());
      min_separation = std::min(min_separation, sep);
      if (sep < 1e-6) all_distinct = false;
    }
  rep.add(make_check("fixed-towers-pairwise-distinct", "galois-injectivity", all_distinct,
                     0.0, Json{{"min_separation", min_separation}}));
  return rep;
}

Report d4_appear_v(int cutoff_hu, std::uint64_t seed) {
  Report rep;
  rep.command = "boson run d4_appear_v";
  rep.seed = seed;

  FockWindow w = fock_window(2, cutoff_hu, Sector::untwisted);
  DihedralData d4 = dihedral_on_colors();
  std::vector<Mat> gammas;
  for (const auto& m : d4.mats) gammas.push_back(automorphism_action(w, m).gamma);

  StructureAlgebra cg = group_algebra(d4.group);
  Decomposition reg = decompose(cg, regular_rep(cg), seed);
  const int n = d4.group.order;

  std::vector<std::vector<Complex>> chars;
  for (const Component& comp : reg.components) {
    std::vector<Complex> chi;
    for (int g = 0; g < n; ++g) chi.push_back(comp.irrep[g].trace());
    chars.push_back(std::move(chi));
  }
  rep.add(make_check("irreducible-class-count", "dihedral-irreps", chars.size() == 5, 0.0,
                     Json{{"count", chars.size()}}));

  std::vector<int> first_seen(chars.size(), -1);
  double worst_integrality = 0.0;
  for (int d = 0; d <= cutoff_hu; d += 2) {
    const int sz = w.graded_dims[d];
    for (std::size_t cls = 0; cls < chars.size(); ++cls) {
      Complex acc = 0.0;
      for (int g = 0; g < n; ++g) {
        Complex tr = gammas[g].block(w.degree_start[d], w.degree_start[d], sz, sz).trace();
        acc += chars[cls][d4.group.inv(g)] * tr;
      }
      double mult = (acc / static_cast<double>(n)).real();
      worst_integrality = std::max(worst_integrality, std::abs(mult - std::round(mult)));
      if (mult > 0.5 && first_seen[cls] < 0) first_seen[cls] = d / 2;
    }
  }
  bool all_appear = true;
  Json seen = Json::array();
  for (std::size_t cls = 0; cls < chars.size(); ++cls) {
    seen.push_back(first_seen[cls]);
    if (first_seen[cls] < 0) all_appear = false;
  }
  rep.add(make_check("all-classes-appear", "every-irreducible-appears", all_appear,
                     worst_integrality, Json{{"first_degree", seen}}));
  return rep;
}

// ---------------------------------------------------------------------------
// not0_check: sampled nonvanishing of sum Y(v^i, z) w^i
// ---------------------------------------------------------------------------
Report not0_check(int cutoff_hu, std::uint64_t seed) {
  Report rep;
  rep.command = "boson run not0_check";
  rep.seed = seed;
  Rng rng(seed ^ 0x0701ULL);

  for (int rank : {1, 2}) {
    FockWindow w = fock_window(rank, cutoff_hu, Sector::untwisted);
    // modes with room on interior vectors
    std::vector<std::pair<int, Mat>> modes;
    for (int n_hu = -4; n_hu <= 4; n_hu += 2) {
      if (n_hu == 0) continue;
      for (int c = 0; c < rank; ++c)
        modes.emplace_back(c, heisenberg_mode(w, c, n_hu).matrix);
    }
    const int trials = 10;
    int found = 0;
    double min_best = 1e300;
    for (int t = 0; t < trials; ++t) {
      // independent v-tuple = the rank generators; w-tuple random, interior
      std::vector<Vec> ws(rank, Vec::Zero(w.dim()));
      for (int c = 0; c < rank; ++c)
        for (int i = 0; i < w.dim(); ++i)
          if (w.degree_hu[i] + 4 <= w.cutoff_hu) ws[c](i) = rng.normal_complex();
      double best = 0.0;
      for (int n_hu = -4; n_hu <= 4; n_hu += 2) {
        if (n_hu == 0) continue;
        Vec acc = Vec::Zero(w.dim());
        for (int c = 0; c < rank; ++c)
          acc += heisenberg_mode(w, c, n_hu).matrix * ws[c];
        best = std::max(best, acc.norm());
      }
      min_best = std::min(min_best, best);
      if (best > 1e-9) ++found;
    }
    // adversarial pair: a1(-1) and a2(-1) images cancel at depth one but a
    // deeper mode separates them
    if (rank == 2) {
      Vec w1 = Vec::Zero(w.dim()), w2 = Vec::Zero(w.dim());
      BosonMonomial m1{{2, 1}};  // a2(-1) vacuum
      BosonMonomial m2{{2, 0}};  // a1(-1) vacuum
      w1(w.index.at(m1)) = 1.0;
      w2(w.index.at(m2)) = -1.0;
      double shallow = (heisenberg_mode(w, 0, -2).matrix * w1 +
                        heisenberg_mode(w, 1, -2).matrix * w2)
                           .norm();
      double deep = (heisenberg_mode(w, 0, -4).matrix * w1 +
                     heisenberg_mode(w, 1, -4).matrix * w2)
                        .norm();
      rep.add(make_check("cancellation-needs-deeper-modes", "nonzero-mode-combination",
                         shallow < 1e-12 && deep > 1e-9, shallow,
                         Json{{"shallow", shallow}, {"deep", deep}}));
    }
    rep.add(make_check("nonzero-rank" + std::to_string(rank), "nonzero-mode-combination",
                       found == trials, 0.0,
                       Json{{"trials", trials}, {"min_best_norm", min_best}}));
  }
  return rep;
}

}  // namespace

std::vector<std::string> scenario_names() {
  return {"z2_untwisted", "z2_twisted", "d4_galois", "d4_appear_v", "not0_check"};
}

int scenario_default_cutoff_hu(const std::string& name) {
  if (name == "z2_untwisted") return 12;
  if (name == "z2_twisted") return 11;
  if (name == "d4_galois") return 8;
  if (name == "d4_appear_v") return 8;
  if (name == "not0_check") return 12;
  throw Error("unknown scenario '" + name + "'");
}

Report run_scenario(const std::string& name, int cutoff_hu, std::uint64_t seed) {
  if (cutoff_hu < 0) cutoff_hu = scenario_default_cutoff_hu(name);
  if (name == "z2_untwisted") return z2_untwisted(cutoff_hu, seed);
  if (name == "z2_twisted") return z2_twisted(cutoff_hu, seed);
  if (name == "d4_galois") return d4_galois(cutoff_hu, seed);
  if (name == "d4_appear_v") return d4_appear_v(cutoff_hu, seed);
  if (name == "not0_check") return not0_check(cutoff_hu, seed);
  throw Error("unknown scenario '" + name + "'");
}

Report run_mode_calculus_checks(int cutoff_hu, std::uint64_t seed) {
  Report rep;
  rep.command = "boson mode-calculus";
  rep.seed = seed;

  for (Sector sector : {Sector::untwisted, Sector::twisted}) {
    const bool twisted = sector == Sector::twisted;
    const int cut = twisted ? cutoff_hu - 1 : cutoff_hu;
    FockWindow w = fock_window(1, cut, sector);
    std::string sec = twisted ? "twisted" : "untwisted";

    // bracket law on every valid pair
    double worst = 0.0;
    int pairs = 0;
    const int par = 2;  // mode lattice steps by a whole unit in both sectors
    const int start = twisted ? 1 : 2;
    std::vector<std::pair<int, ModeOp>> ops;
    for (int n = start; n <= cut; n += par) {
      ops.emplace_back(n, heisenberg_mode(w, 0, n));
      ops.emplace_back(-n, heisenberg_mode(w, 0, -n));
    }
    for (const auto& [m_hu, am] : ops)
      for (const auto& [n_hu, an] : ops) {
        // valid inputs for both composition orders
        int bound = std::min({am.valid_in_max_hu - std::max(0, -n_hu),
                              an.valid_in_max_hu - std::max(0, -m_hu),
                              w.cutoff_hu});
        if (bound < 0) continue;
        Mat proj = degree_projector(w, bound);
        Mat comm = (am.matrix * an.matrix - an.matrix * am.matrix) * proj;
        double expect = (m_hu + n_hu == 0) ? m_hu / 2.0 : 0.0;
        worst = std::max(worst, (comm - expect * proj).norm());
        ++pairs;
      }
    rep.add(make_check("bracket-law-" + sec, "heisenberg-bracket", worst < 1e-9, worst,
                       Json{{"pairs", pairs}}));

    // gamma conjugation and the invariance of h
    VOAAutomorphism theta = automorphism_action(w, minus_one_1d());
    double conj_worst = 0.0;
    for (const auto& [n_hu, op] : ops) {
      Mat proj = degree_projector(w, op.valid_in_max_hu);
      Mat lhs = theta.gamma * op.matrix * theta.gamma.inverse() * proj;
      conj_worst = std::max(conj_worst, (lhs + op.matrix * proj).norm());
    }
    for (int n_hu : {-2, 0, 2}) {
      ModeOp h = quadratic_mode(w, n_hu);
      Mat proj = degree_projector(w, h.valid_in_max_hu);
      Mat lhs = theta.gamma * h.matrix * theta.gamma.inverse() * proj;
      conj_worst = std::max(conj_worst, (lhs - h.matrix * proj).norm());
    }
    rep.add(make_check("automorphism-conjugation-" + sec, "mode-equivariance",
                       conj_worst < 1e-9, conj_worst));

    // weak associativity collapse samples
    std::vector<WeakAssocSample> samples = weak_assoc_samples(w, 50);
    WeakAssocReport war = weak_assoc_check(w, samples);
    rep.add(make_check("weak-associativity-" + sec, "weak-associativity-collapse",
                       war.max_residual < 1e-9 && war.samples_used >= 50, war.max_residual,
                       Json{{"samples", war.samples_used}}));
  }

  // rank-2 conjugation with a genuine color rotation
  {
    FockWindow w2 = fock_window(2, std::min(cutoff_hu, 8), Sector::untwisted);
    Eigen::MatrixXd rot(2, 2);
    rot << 0, -1, 1, 0;
    VOAAutomorphism g = automorphism_action(w2, rot);
    double worst = 0.0;
    for (int c = 0; c < 2; ++c)
      for (int n_hu : {-2, 2}) {
        ModeOp a = heisenberg_mode(w2, c, n_hu);
        Mat proj = degree_projector(w2, a.valid_in_max_hu);
        Mat expect = Mat::Zero(w2.dim(), w2.dim());
        for (int c2 = 0; c2 < 2; ++c2)
          if (rot(c2, c) != 0.0)
            expect += rot(c2, c) * heisenberg_mode(w2, c2, n_hu).matrix;
        worst = std::max(worst,
                         ((g.gamma * a.matrix * g.gamma.inverse() - expect) * proj).norm());
      }
    ModeOp hinv = quadratic_mode_invariant(w2, 2);
    Mat proj = degree_projector(w2, hinv.valid_in_max_hu);
    worst = std::max(worst,
                     ((g.gamma * hinv.matrix * g.gamma.inverse() - hinv.matrix) * proj).norm());
    rep.add(make_check("rank2-rotation-equivariance", "mode-equivariance", worst < 1e-9, worst,
                       Json{{"order", g.order}}));
  }
  return rep;
}

}  // namespace orbikit
