#include "orbikit/orbit.hpp"

#include <algorithm>

namespace orbikit {

OrbitAlgebra build_orbit_algebra(const FiniteGroup& g, const GroupAction& a,
                                 const CocycleFamily& fam) {
  FamilyVerdict fv = verify_family(g, a, fam);
  if (!fv.ok) {
    const auto& bad = fv.violations.front();
    throw FamilyViolation("orbit family relation fails at point " +
                          a.point_labels[bad.point] + ", (g,h,k) = (" + std::to_string(bad.g) +
                          "," + std::to_string(bad.h) + "," + std::to_string(bad.k) + ")");
  }
  OrbitAlgebra ua;
  ua.group = g;
  ua.action = a;
  ua.family = fam;
  ua.orbit_list = orbits(g, a);
  const int dim = g.order * a.points;
  ua.mono.dim = dim;
  ua.mono.prod.assign(dim, std::vector<MonomialAlgebra::Entry>(dim));
  for (int m = 0; m < a.points; ++m)
    for (int x = 0; x < g.order; ++x)
      for (int n = 0; n < a.points; ++n)
        for (int y = 0; y < g.order; ++y) {
          if (a.apply(m, y) != n) continue;  // e(M.h) e(N) = 0 unless M.h = N
          ua.mono.prod[ua.basis_index(x, m)][ua.basis_index(y, n)] = {
              ua.basis_index(g.mul(x, y), n), fam.slice(n)(x, y)};
        }
  for (int m = 0; m < a.points; ++m)
    ua.mono.unit.emplace_back(ua.basis_index(FiniteGroup::identity, m), RootOfUnity::one());
  ua.algebra = ua.mono.to_structure_algebra();
  return ua;
}

StabilizerAlgebra stabilizer_algebra(const OrbitAlgebra& a, int point) {
  StabilizerAlgebra s;
  s.base_point = point;
  s.stabilizer = orbit_and_stabilizer(a.group, a.action, point).stabilizer;
  s.sg = subgroup_as_group(a.group, s.stabilizer);
  TwoCocycle slice = restrict_cocycle(a.family.slice(point), s.sg);
  s.tga = build_tga(s.sg.group, slice);
  return s;
}

bool stabilizer_iso_exact(const OrbitAlgebra& a, const StabilizerAlgebra& s) {
  const int m = s.sg.group.order;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      // product of g_i (x) e(M) and g_j (x) e(M) inside the orbit algebra
      MonomialAlgebra::Entry lhs =
          a.mono.prod[a.basis_index(s.sg.to_parent[i], s.base_point)]
                     [a.basis_index(s.sg.to_parent[j], s.base_point)];
      MonomialAlgebra::Entry rhs = s.tga.mono.prod[i][j];
      if (lhs.target != a.basis_index(s.sg.to_parent[rhs.target], s.base_point)) return false;
      if (!(lhs.scalar == rhs.scalar)) return false;
    }
  return true;
}

InducedModule induce(const OrbitAlgebra& a, int point, const Representation& w) {
  if (w.dim <= 0) throw Error("induce: empty module");
  StabilizerAlgebra s = stabilizer_algebra(a, point);
  if (static_cast<int>(w.rho.size()) != s.sg.group.order)
    throw Error("induce: W is not an S(M)-module");

  InducedModule ind;
  ind.base_point = point;
  ind.transversal = right_transversal(a.group, s.stabilizer);
  ind.w_dim = w.dim;
  const int k = static_cast<int>(ind.transversal.size());
  const int dim = k * w.dim;
  const TwoCocycle& alpha_m = a.family.slice(point);

  std::vector<int> stab_local(a.group.order, -1);
  for (int i = 0; i < s.sg.group.order; ++i) stab_local[s.sg.to_parent[i]] = i;

  ind.rep.dim = dim;
  ind.rep.rho.assign(a.dim(), Mat::Zero(dim, dim));
  for (int n = 0; n < a.action.points; ++n) {
    // (g (x) e(N)) hits the block j with N = M . g_j, if any.
    int j = -1;
    for (int t = 0; t < k; ++t)
      if (a.action.apply(point, ind.transversal[t]) == n) j = t;
    if (j < 0) continue;  // N outside the orbit: acts as zero
    for (int x = 0; x < a.group.order; ++x) {
      int kk = a.group.mul(x, a.group.inv(ind.transversal[j]));
      int i = -1, sg_elem = -1;
      for (int t = 0; t < k && i < 0; ++t) {
        int cand = a.group.mul(ind.transversal[t], kk);
        if (stab_local[cand] >= 0) {
          i = t;
          sg_elem = cand;
        }
      }
      // scalar: alpha_M(g, g_j^{-1}) / alpha_M(g_i^{-1}, s)
      RootOfUnity coeff = alpha_m(x, a.group.inv(ind.transversal[j])) *
                          alpha_m(a.group.inv(ind.transversal[i]), sg_elem).inverse();
      ind.rep.rho[a.basis_index(x, n)].block(i * w.dim, j * w.dim, w.dim, w.dim) =
          coeff.value() * w.rho[stab_local[sg_elem]];
    }
  }
  return ind;
}

Representation restrict_to_point(const OrbitAlgebra& a, int point, const Representation& x,
                                 const ToleranceConfig& tol) {
  StabilizerAlgebra s = stabilizer_algebra(a, point);
  const Mat& idem = x.rho[a.basis_index(FiniteGroup::identity, point)];
  std::vector<Vec> fixed = kernel_basis(idem - Mat::Identity(x.dim, x.dim), tol);
  Representation out;
  out.dim = static_cast<int>(fixed.size());
  Mat basis(x.dim, out.dim);
  for (int i = 0; i < out.dim; ++i) basis.col(i) = fixed[i];
  out.rho.reserve(s.sg.group.order);
  for (int i = 0; i < s.sg.group.order; ++i) {
    const Mat& act = x.rho[a.basis_index(s.sg.to_parent[i], point)];
    out.rho.push_back(basis.adjoint() * act * basis);
  }
  return out;
}

std::vector<OrbitSimple> enumerate_simples(const OrbitAlgebra& a, std::uint64_t seed,
                                           const ToleranceConfig& tol) {
  std::vector<OrbitSimple> out;
  for (int oi = 0; oi < static_cast<int>(a.orbit_list.size()); ++oi) {
    int base = a.orbit_list[oi].front();
    StabilizerAlgebra s = stabilizer_algebra(a, base);
    std::vector<SimpleModule> stab_simples = simples(s.tga, seed ^ (0x51abULL * (oi + 1)), tol);
    for (const SimpleModule& w : stab_simples) {
      OrbitSimple os;
      os.orbit_index = oi;
      os.base_point = base;
      os.stab_class_id = w.class_id;
      os.stab_dim = w.dim();
      os.module = induce(a, base, Representation{w.dim(), w.matrices});
      out.push_back(std::move(os));
    }
  }

  // Certificates: each induced module irreducible (scalar commutant), all
  // pairwise non-isomorphic, and the dimension count exhausts the algebra.
  long long dimsq = 0;
  for (auto& os : out) {
    std::vector<std::pair<Mat, Mat>> pairs;
    for (const Mat& m : os.module.rep.rho) pairs.emplace_back(m, m);
    std::vector<Mat> comm = hom_space(pairs, tol);
    if (comm.size() != 1)
      throw PrecisionLoss("enumerate_simples: induced module has commutant of dimension " +
                          std::to_string(comm.size()));
    dimsq += static_cast<long long>(os.module.dim()) * os.module.dim();
  }
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = i + 1; j < out.size(); ++j) {
      if (out[i].module.dim() != out[j].module.dim()) continue;
      if (module_iso(out[i].module.rep, out[j].module.rep, tol, seed))
        throw PrecisionLoss("enumerate_simples: two induced simples are isomorphic");
    }
  if (dimsq != a.dim())
    throw PrecisionLoss("enumerate_simples: sum(dim^2) = " + std::to_string(dimsq) +
                        " misses dim A = " + std::to_string(a.dim()));
  return out;
}

BlockDecomposition block_decomposition(const OrbitAlgebra& a) {
  BlockDecomposition bd;
  std::vector<int> orbit_of_point(a.action.points, -1);
  for (int oi = 0; oi < static_cast<int>(a.orbit_list.size()); ++oi)
    for (int p : a.orbit_list[oi]) orbit_of_point[p] = oi;

  bd.blocks.assign(a.orbit_list.size(), {});
  bd.block_units.assign(a.orbit_list.size(), {});
  for (int idx = 0; idx < a.dim(); ++idx)
    bd.blocks[orbit_of_point[a.basis_point(idx)]].push_back(idx);
  for (int oi = 0; oi < static_cast<int>(a.orbit_list.size()); ++oi)
    for (int p : a.orbit_list[oi])
      bd.block_units[oi].push_back(a.basis_index(FiniteGroup::identity, p));

  bd.annihilate_exactly = true;
  for (int i = 0; i < a.dim() && bd.annihilate_exactly; ++i)
    for (int j = 0; j < a.dim(); ++j) {
      if (orbit_of_point[a.basis_point(i)] == orbit_of_point[a.basis_point(j)]) continue;
      if (a.mono.prod[i][j].target >= 0) {
        bd.annihilate_exactly = false;
        break;
      }
    }

  std::vector<int> all_units;
  for (const auto& u : bd.block_units) all_units.insert(all_units.end(), u.begin(), u.end());
  std::sort(all_units.begin(), all_units.end());
  std::vector<int> unit_indices;
  for (const auto& [m, s] : a.mono.unit)
    if (s.is_one()) unit_indices.push_back(m);
  std::sort(unit_indices.begin(), unit_indices.end());
  bd.units_sum_to_one = (all_units == unit_indices);
  return bd;
}

InducedModule natural_regular_module(const OrbitAlgebra& a, int point) {
  StabilizerAlgebra s = stabilizer_algebra(a, point);
  return induce(a, point, regular_rep(s.tga.algebra));
}

NaturalSimplicity natural_module_simplicity(const OrbitAlgebra& a, int point,
                                            const ToleranceConfig& tol) {
  InducedModule nat = natural_regular_module(a, point);
  NaturalSimplicity ns;
  ns.full_square = nat.dim() * nat.dim();
  ns.span_dim = span_dimension(nat.rep.rho, tol);
  ns.simple = (ns.span_dim == ns.full_square);
  return ns;
}

}  // namespace orbikit
