#include "orbikit/dualpair.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace orbikit {

namespace {

Complex frobenius_inner(const Mat& a, const Mat& b) { return (a.adjoint() * b).trace(); }

double ops_scale(const std::vector<Mat>& ops) {
  double s = 1.0;
  for (const Mat& m : ops) s = std::max(s, m.norm());
  return s;
}

Mat orthonormal_columns(const Mat& m, const ToleranceConfig& tol) {
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  double cutoff = tol.eps_rank * std::max(1.0, sv.size() ? sv(0) : 0.0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return svd.matrixU().leftCols(rank);
}

}  // namespace

CommutingPair make_commuting_pair(StructureAlgebra algebra, Representation rho,
                                  std::vector<Mat> b_ops, std::vector<Mat> ambient_ops,
                                  std::optional<FiniteGroup> phi_group, GroupRep phi,
                                  const ToleranceConfig& tol) {
  CommutingPair p;
  p.algebra = std::move(algebra);
  p.rho = std::move(rho);
  p.b_ops = std::move(b_ops);
  p.ambient_ops = std::move(ambient_ops);
  p.phi_group = std::move(phi_group);
  p.phi = std::move(phi);

  double scale = std::max(ops_scale(p.rho.rho), ops_scale(p.b_ops));
  double worst = 0.0;
  for (const Mat& r : p.rho.rho)
    for (const Mat& b : p.b_ops) worst = std::max(worst, (r * b - b * r).norm());
  if (worst > 10 * tol.eps_residual * scale * scale)
    throw Error("commuting pair: [rho, b] residual " + std::to_string(worst));

  if (p.phi_group) {
    if (static_cast<int>(p.phi.size()) != p.phi_group->order)
      throw Error("commuting pair: phi size mismatch");
  } else if (!p.phi.empty()) {
    throw Error("commuting pair: phi without a group");
  }
  return p;
}

IsotypicSplit isotypic_split(const CommutingPair& p, std::uint64_t seed,
                             const ToleranceConfig& tol) {
  IsotypicSplit split;
  split.dec = decompose(p.algebra, p.rho, seed, tol);
  double scale = ops_scale(p.b_ops);
  for (const Component& comp : split.dec.components) {
    Mat basis = orthonormal_columns(comp.embedding, tol);
    if (basis.cols() != comp.embedding.cols())
      throw PrecisionLoss("isotypic_split: embedding is rank deficient");
    for (const Mat& b : p.b_ops) {
      Mat image = b * basis;
      double res = (image - basis * (basis.adjoint() * image)).norm();
      split.b_invariance_residual = std::max(split.b_invariance_residual, res);
    }
    split.component_bases.push_back(std::move(basis));
  }
  if (split.b_invariance_residual > 100 * tol.eps_residual * std::max(1.0, scale))
    throw PrecisionLoss("isotypic_split: components not B-invariant, residual " +
                        std::to_string(split.b_invariance_residual));
  return split;
}

MultiplicitySpace multiplicity_action(const CommutingPair& p, const IsotypicSplit& split,
                                      int class_id, const ToleranceConfig& tol) {
  const Component* comp = nullptr;
  for (const Component& c : split.dec.components)
    if (c.class_id == class_id) comp = &c;
  if (!comp || comp->multiplicity == 0)
    throw AbsentClass("multiplicity_action: class " + std::to_string(class_id) +
                      " absent from the carrier");

  // Hom_A(W, M): F with rho(b_i) F = F W(b_i).
  std::vector<std::pair<Mat, Mat>> pairs;
  for (std::size_t i = 0; i < p.rho.rho.size(); ++i)
    pairs.emplace_back(p.rho.rho[i], comp->irrep[i]);
  std::vector<Mat> hom = hom_space(pairs, tol);
  MultiplicitySpace ms;
  ms.class_id = class_id;
  ms.multiplicity = static_cast<int>(hom.size());
  if (ms.multiplicity != comp->multiplicity)
    throw PrecisionLoss("multiplicity_action: hom dimension " + std::to_string(ms.multiplicity) +
                        " != multiplicity " + std::to_string(comp->multiplicity));
  ms.hom_basis = std::move(hom);

  const int m = ms.multiplicity;
  double scale = ops_scale(p.b_ops);
  for (const Mat& b : p.b_ops) {
    Mat action(m, m);
    for (int t = 0; t < m; ++t) {
      Mat image = b * ms.hom_basis[t];
      Mat recon = Mat::Zero(image.rows(), image.cols());
      for (int s = 0; s < m; ++s) {
        Complex coord = frobenius_inner(ms.hom_basis[s], image);
        action(s, t) = coord;
        recon += coord * ms.hom_basis[s];
      }
      ms.action_residual = std::max(ms.action_residual, (image - recon).norm());
    }
    ms.b_action.push_back(std::move(action));
  }
  if (ms.action_residual > 100 * tol.eps_residual * std::max(1.0, scale))
    throw PrecisionLoss("multiplicity_action: generator action leaves the hom space, residual " +
                        std::to_string(ms.action_residual));

  // theta: W (x) M_lambda -> carrier, (w, f) -> f(w); columns ordered t*w + b.
  const int w = comp->irrep_dim();
  Mat theta(p.carrier_dim(), w * m);
  for (int t = 0; t < m; ++t)
    for (int b = 0; b < w; ++b) theta.col(t * w + b) = ms.hom_basis[t].col(b);
  // A side: rho(b_i) theta = theta (I_m (x) W(b_i))
  for (std::size_t i = 0; i < p.rho.rho.size(); ++i) {
    Mat rhs = Mat::Zero(p.carrier_dim(), w * m);
    for (int t = 0; t < m; ++t)
      rhs.middleCols(t * w, w) = theta.middleCols(t * w, w) * comp->irrep[i];
    ms.theta_residual = std::max(ms.theta_residual, (p.rho.rho[i] * theta - rhs).norm());
  }
  // B side: b theta = theta (beta (x) I_w)
  for (std::size_t k = 0; k < p.b_ops.size(); ++k) {
    Mat rhs = Mat::Zero(p.carrier_dim(), w * m);
    for (int t = 0; t < m; ++t)
      for (int s = 0; s < m; ++s)
        rhs.middleCols(t * w, w) += ms.b_action[k](s, t) * theta.middleCols(s * w, w);
    ms.theta_residual = std::max(ms.theta_residual, (p.b_ops[k] * theta - rhs).norm());
  }
  return ms;
}

DualPairReport verify_dual_pair(const CommutingPair& p, int word_length, std::uint64_t seed,
                                const ToleranceConfig& tol, const IsotypicSplit* precomputed) {
  if (word_length <= 0) word_length = 2 * p.carrier_dim();
  DualPairReport report;
  report.word_length_max = word_length;

  IsotypicSplit split = precomputed ? *precomputed : isotypic_split(p, seed, tol);
  std::vector<MultiplicitySpace> spaces;
  for (const Component& comp : split.dec.components) {
    ClassReport cr;
    cr.class_id = comp.class_id;
    cr.irrep_dim = comp.irrep_dim();
    cr.multiplicity = comp.multiplicity;
    cr.present = comp.multiplicity > 0;
    if (!cr.present) {
      report.notes.push_back("class " + std::to_string(comp.class_id) +
                             " absent (neutral for the verdict)");
      report.classes.push_back(cr);
      continue;
    }
    MultiplicitySpace ms = multiplicity_action(p, split, comp.class_id, tol);
    cr.residual = std::max(ms.action_residual, ms.theta_residual);
    const int m = ms.multiplicity;
    WordSpan ws = grow_word_span(ms.b_action, word_length, tol);
    cr.word_span_dim = ws.dimension;
    cr.word_length_used = ws.stop_length;
    if (ws.dimension == m * m) {
      cr.irreducible = true;
    } else if (!ws.saturated) {
      cr.inconclusive = true;
      report.notes.push_back("class " + std::to_string(comp.class_id) +
                             ": word span still growing at length " +
                             std::to_string(word_length));
    }
    report.classes.push_back(cr);
    spaces.push_back(std::move(ms));
  }

  bool all_irreducible = true;
  for (const ClassReport& cr : report.classes)
    if (cr.present && !cr.irreducible) all_irreducible = false;

  bool pairwise_distinct = true;
  for (std::size_t i = 0; i < spaces.size(); ++i)
    for (std::size_t j = i + 1; j < spaces.size(); ++j) {
      DualPairReport::IsoEntry entry;
      entry.class_a = spaces[i].class_id;
      entry.class_b = spaces[j].class_id;
      Representation ri{spaces[i].multiplicity, spaces[i].b_action};
      Representation rj{spaces[j].multiplicity, spaces[j].b_action};
      entry.isomorphic = module_iso(ri, rj, tol, seed).has_value();
      if (entry.isomorphic) pairwise_distinct = false;
      report.iso_table.push_back(entry);
    }

  report.overall = all_irreducible && pairwise_distinct;
  return report;
}

Witness jacobson_witness(const StructureAlgebra& a, const std::vector<Representation>& reps,
                         const std::vector<WitnessSample>& samples,
                         const ToleranceConfig& tol) {
  if (reps.empty() || samples.empty()) throw Error("jacobson_witness: nothing to solve");

  // Hypothesis certificates: simple blocks, pairwise inequivalent.
  for (std::size_t i = 0; i < reps.size(); ++i) {
    std::vector<std::pair<Mat, Mat>> pairs;
    for (const Mat& m : reps[i].rho) pairs.emplace_back(m, m);
    if (hom_space(pairs, tol).size() != 1)
      throw NoWitness("jacobson_witness: block " + std::to_string(i) + " is not simple");
  }
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t j = i + 1; j < reps.size(); ++j) {
      if (reps[i].dim != reps[j].dim) continue;
      std::vector<std::pair<Mat, Mat>> pairs;
      for (std::size_t t = 0; t < reps[i].rho.size(); ++t)
        pairs.emplace_back(reps[j].rho[t], reps[i].rho[t]);
      if (!hom_space(pairs, tol).empty())
        throw NoWitness("jacobson_witness: blocks " + std::to_string(i) + " and " +
                        std::to_string(j) + " are equivalent");
    }

  int rows = 0;
  for (const WitnessSample& s : samples) {
    if (s.block < 0 || s.block >= static_cast<int>(reps.size()))
      throw Error("jacobson_witness: bad block index");
    rows += reps[s.block].dim;
  }
  Mat system(rows, a.dim);
  Vec rhs(rows);
  int at = 0;
  for (const WitnessSample& s : samples) {
    const Representation& rep = reps[s.block];
    for (int i = 0; i < a.dim; ++i) system.col(i).segment(at, rep.dim) = rep.rho[i] * s.x;
    rhs.segment(at, rep.dim) = s.y;
    at += rep.dim;
  }
  Eigen::JacobiSVD<Mat> svd(system, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Vec coeffs = svd.solve(rhs);

  Witness w;
  w.element = coeffs;
  for (const WitnessSample& s : samples) {
    const Representation& rep = reps[s.block];
    Mat op = Mat::Zero(rep.dim, rep.dim);
    for (int i = 0; i < a.dim; ++i) op += coeffs(i) * rep.rho[i];
    w.residual = std::max(w.residual, (op * s.x - s.y).norm());
  }
  double scale = 1.0;
  for (const WitnessSample& s : samples) scale = std::max(scale, s.y.norm());
  if (w.residual > 10 * tol.eps_residual * scale)
    throw NoWitness("jacobson_witness: no solution, residual " + std::to_string(w.residual));
  return w;
}

InvariantWitness invariant_witness(const CommutingPair& p, const Mat& x_basis,
                                   const Mat& f_on_x, int word_length,
                                   const WordSpan* precomputed_span,
                                   const ToleranceConfig& tol) {
  if (p.ambient_ops.empty() || !p.phi_group)
    throw Error("invariant_witness: pair has no ambient operators or group action");
  if (word_length <= 0) word_length = 2 * p.carrier_dim();
  const int d = p.carrier_dim();
  const int r = static_cast<int>(x_basis.cols());
  if (f_on_x.rows() != d || f_on_x.cols() != r)
    throw Error("invariant_witness: shape mismatch");

  WordSpan local;
  const WordSpan* span = precomputed_span;
  if (!span) {
    local = grow_word_span(p.ambient_ops, word_length, tol);
    span = &local;
  }

  double scale = std::max(1.0, f_on_x.norm());

  // Step 1: t in the span with t x = f(x) for the basis columns of X.
  Mat system(d * r, static_cast<int>(span->basis.size()));
  for (int j = 0; j < static_cast<int>(span->basis.size()); ++j) {
    Mat image = span->basis[j] * x_basis;
    system.col(j) = Eigen::Map<const Vec>(image.data(), d * r);
  }
  Vec rhs = Eigen::Map<const Vec>(f_on_x.data(), d * r);
  Eigen::JacobiSVD<Mat> svd(system, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Vec coeffs = svd.solve(rhs);
  Mat t = Mat::Zero(d, d);
  for (int j = 0; j < static_cast<int>(span->basis.size()); ++j)
    t += coeffs(j) * span->basis[j];
  double step1 = (t * x_basis - f_on_x).norm();
  if (step1 > 100 * tol.eps_residual * scale)
    throw NoAmbientWitness("invariant_witness: ambient span misses f at length " +
                           std::to_string(span->stop_length) + ", residual " +
                           std::to_string(step1));

  // Step 2: average over the projective action.
  const FiniteGroup& g = *p.phi_group;
  std::vector<Mat> phi_inv(g.order);
  for (int x = 0; x < g.order; ++x) phi_inv[x] = p.phi[x].inverse();
  Mat avg = Mat::Zero(d, d);
  for (int x = 0; x < g.order; ++x) avg += p.phi[x] * t * phi_inv[x];
  avg /= static_cast<double>(g.order);

  // Step 3: the average still realizes f and commutes with the action.
  InvariantWitness iw;
  iw.op = avg;
  iw.length_used = span->stop_length;
  double drift = (avg * x_basis - f_on_x).norm();
  double commute = 0.0;
  for (int x = 0; x < g.order; ++x)
    commute = std::max(commute, (avg * p.phi[x] - p.phi[x] * avg).norm());
  iw.residual = std::max({step1, drift, commute});
  double phi_scale = std::max(1.0, ops_scale(p.phi) * ops_scale(p.phi) * avg.norm());
  if (drift > 1e3 * tol.eps_residual * std::max(scale, avg.norm() * x_basis.norm()) ||
      commute > 1e3 * tol.eps_residual * phi_scale)
    throw AverageDrift("invariant_witness: average drifts from f (X not invariant or f not "
                       "equivariant), drift " +
                       std::to_string(drift) + ", commutator " + std::to_string(commute));

  // Express the average in the span basis (phi normalizes the span).
  iw.span_coords = Vec::Zero(static_cast<int>(span->basis.size()));
  Mat recon = Mat::Zero(d, d);
  for (int j = 0; j < static_cast<int>(span->basis.size()); ++j) {
    Complex coord = frobenius_inner(span->basis[j], avg);
    iw.span_coords(j) = coord;
    recon += coord * span->basis[j];
  }
  iw.span_residual = (recon - avg).norm();
  return iw;
}

}  // namespace orbikit
