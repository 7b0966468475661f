#include "orbikit/tga.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace orbikit {

MonomialAlgebra::Entry MonomialAlgebra::times(const Entry& a, int j) const {
  if (a.target < 0) return {};
  Entry e = prod[a.target][j];
  if (e.target < 0) return {};
  return {e.target, a.scalar * e.scalar};
}

bool MonomialAlgebra::associativity_exact() const {
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      Entry ij = prod[i][j];
      for (int k = 0; k < dim; ++k) {
        Entry lhs = times(ij, k);
        Entry jk = prod[j][k];
        Entry rhs{};
        if (jk.target >= 0) {
          Entry ijk = prod[i][jk.target];
          if (ijk.target >= 0) rhs = {ijk.target, jk.scalar * ijk.scalar};
        }
        if (!(lhs == rhs)) return false;
      }
    }
  return true;
}

bool MonomialAlgebra::unit_exact() const {
  // unit * b_j = b_j and b_j * unit = b_j; each product must hit b_j through
  // exactly one term of the unit sum, with scalar one.
  for (int j = 0; j < dim; ++j) {
    int hits_left = 0, hits_right = 0;
    for (const auto& [m, s] : unit) {
      Entry l = prod[m][j];
      if (l.target >= 0) {
        if (l.target != j || !(s * l.scalar).is_one()) return false;
        ++hits_left;
      }
      Entry r = prod[j][m];
      if (r.target >= 0) {
        if (r.target != j || !(s * r.scalar).is_one()) return false;
        ++hits_right;
      }
    }
    if (hits_left != 1 || hits_right != 1) return false;
  }
  return true;
}

StructureAlgebra MonomialAlgebra::to_structure_algebra() const {
  StructureAlgebra a;
  a.dim = dim;
  a.unit = Vec::Zero(dim);
  for (const auto& [m, s] : unit) a.unit(m) += s.value();
  a.left.assign(dim, Mat::Zero(dim, dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const Entry& e = prod[i][j];
      if (e.target >= 0) a.left[i](e.target, j) += e.scalar.value();
    }
  return a;
}

TwistedGroupAlgebra build_tga(const FiniteGroup& g, const TwoCocycle& alpha) {
  CocycleVerdict v = verify_cocycle(g, alpha);
  if (!v.ok) {
    const auto& bad = v.violations.front();
    throw CocycleInvalid("build_tga: cocycle fails at (" + std::to_string(bad.g) + "," +
                         std::to_string(bad.h) + "," + std::to_string(bad.k) + ")");
  }
  TwistedGroupAlgebra t;
  t.group = g;
  t.alpha = alpha;
  t.mono.dim = g.order;
  t.mono.unit = {{FiniteGroup::identity, RootOfUnity::one()}};
  t.mono.prod.assign(g.order, std::vector<MonomialAlgebra::Entry>(g.order));
  for (int x = 0; x < g.order; ++x)
    for (int y = 0; y < g.order; ++y) t.mono.prod[x][y] = {g.mul(x, y), alpha(x, y)};
  t.algebra = t.mono.to_structure_algebra();
  return t;
}

std::vector<SimpleModule> simples(const TwistedGroupAlgebra& t, std::uint64_t seed,
                                  const ToleranceConfig& tol) {
  Decomposition dec = decompose(t.algebra, regular_rep(t.algebra), seed, tol);
  std::vector<SimpleModule> out;
  int dimsq = 0;
  for (const Component& c : dec.components) {
    SimpleModule s;
    s.class_id = c.class_id;
    s.matrices = c.irrep;
    s.multiplicity = c.multiplicity;
    dimsq += c.irrep_dim() * c.irrep_dim();
    if (c.multiplicity != c.irrep_dim())
      throw PrecisionLoss("simples: multiplicity != dimension in the regular module");
    out.push_back(std::move(s));
  }
  if (dimsq != t.group.order)
    throw PrecisionLoss("simples: sum of squared dimensions misses |G|");
  return out;
}

CocycleExtraction extract_projective_cocycle(const FiniteGroup& g, const GroupRep& phi,
                                             const ToleranceConfig& tol, long long max_order) {
  if (static_cast<int>(phi.size()) != g.order) throw Error("extract: size mismatch");
  if (max_order <= 0) max_order = 2LL * g.order * g.order;
  const int d = static_cast<int>(phi.front().rows());
  const Mat eye = Mat::Identity(d, d);
  if ((phi[FiniteGroup::identity] - eye).norm() > 1e-9 * std::sqrt(static_cast<double>(d)))
    throw Error("extract: phi(identity) must be the identity");

  std::vector<Mat> inverses(g.order);
  for (int x = 0; x < g.order; ++x) {
    Eigen::JacobiSVD<Mat> svd(phi[x]);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= tol.eps_rank * std::max(1.0, sv(0)))
      throw Error("extract: phi(" + g.labels[x] + ") is singular");
    inverses[x] = phi[x].inverse();
  }

  CocycleExtraction ex;
  ex.raw.assign(g.order, std::vector<Complex>(g.order, 1.0));
  TwoCocycle snapped = TwoCocycle::trivial(g.order);
  bool all_snapped = true;
  for (int x = 0; x < g.order; ++x)
    for (int y = 0; y < g.order; ++y) {
      Mat defect = phi[x] * phi[y] * inverses[g.mul(x, y)];
      Complex scalar = defect.trace() / static_cast<double>(d);
      double dev = (defect - scalar * eye).norm();
      ex.worst_scalar_residual = std::max(ex.worst_scalar_residual, dev);
      if (dev > 1e-6 * std::max(1.0, defect.norm()))
        throw NonScalarDefect("extract: phi(" + g.labels[x] + ")phi(" + g.labels[y] +
                              ") defect is not scalar (deviation " + std::to_string(dev) + ")");
      ex.raw[x][y] = scalar;
      SnapResult snap = snap_to_root_of_unity(scalar, max_order, 1e-6);
      if (snap.ok) {
        snapped(x, y) = snap.root;
      } else {
        all_snapped = false;
        ex.warnings.push_back("scalar at (" + g.labels[x] + "," + g.labels[y] +
                              ") not near a root of unity of order <= " +
                              std::to_string(max_order));
      }
    }
  if (all_snapped) {
    CocycleVerdict v = verify_cocycle(g, snapped);
    if (v.ok) {
      ex.snapped = std::move(snapped);
    } else {
      ex.warnings.push_back("snapped table fails the cocycle identity; kept numeric");
    }
  }
  return ex;
}

TwoCocycle cocycle_of_projective(const FiniteGroup& g, const GroupRep& phi,
                                 const ToleranceConfig& tol) {
  CocycleExtraction ex = extract_projective_cocycle(g, phi, tol);
  if (!ex.snapped)
    throw Error("cocycle_of_projective: scalars did not snap to roots of unity: " +
                (ex.warnings.empty() ? std::string("unknown") : ex.warnings.front()));
  return *ex.snapped;
}

}  // namespace orbikit
