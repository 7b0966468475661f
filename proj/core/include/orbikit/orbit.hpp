#pragma once

#include <vector>

#include "orbikit/tga.hpp"

namespace orbikit {

/// The orbit algebra A_alpha(G, S): basis g (x) e(M) indexed by
/// point * |G| + g, with product
///   (g (x) e(M)) (h (x) e(N)) = alpha_N(g,h) delta_{M.h, N} (gh (x) e(N))
/// and unit sum_M 1 (x) e(M). Structure constants are exact roots of unity.
struct OrbitAlgebra {
  FiniteGroup group;
  GroupAction action;
  CocycleFamily family;
  MonomialAlgebra mono;
  StructureAlgebra algebra;
  std::vector<std::vector<int>> orbit_list;

  int dim() const { return group.order * action.points; }
  int basis_index(int g, int point) const { return point * group.order + g; }
  int basis_group(int idx) const { return idx % group.order; }
  int basis_point(int idx) const { return idx / group.order; }
};

/// Throws FamilyViolation when verify_family fails.
OrbitAlgebra build_orbit_algebra(const FiniteGroup& g, const GroupAction& a,
                                 const CocycleFamily& fam);

/// S(M) = span{ g (x) e(M) : g in G_M } together with the twisted group
/// algebra C^{alpha_M}[G_M] it is isomorphic to. The basis bijection
/// g (x) e(M) <-> bar g matches products exactly.
struct StabilizerAlgebra {
  int base_point = 0;
  Subgroup stabilizer;   // parent indices
  SubgroupGroup sg;      // stabilizer as its own group (index 0 = identity)
  TwistedGroupAlgebra tga;
};

StabilizerAlgebra stabilizer_algebra(const OrbitAlgebra& a, int point);

/// Exact check that the S(M) product table matches the twisted group algebra
/// through the basis bijection.
bool stabilizer_iso_exact(const OrbitAlgebra& a, const StabilizerAlgebra& s);

/// Induced module D(M) (x)_{S(M)} W, realized on the basis
/// { g_j^{-1} (x) w_b } with the deterministic right transversal. The result
/// is a representation of the full orbit algebra (blocks outside the orbit
/// act as zero).
struct InducedModule {
  int base_point = 0;
  std::vector<int> transversal;  // g_j, first = identity
  int w_dim = 0;
  Representation rep;            // of the full orbit algebra
  int dim() const { return static_cast<int>(transversal.size()) * w_dim; }
};

InducedModule induce(const OrbitAlgebra& a, int point, const Representation& w);

/// (1 (x) e(M)) X with the S(M)-action, as a representation of the
/// stabilizer twisted group algebra.
Representation restrict_to_point(const OrbitAlgebra& a, int point, const Representation& x,
                                 const ToleranceConfig& tol = {});

struct OrbitSimple {
  int orbit_index = 0;
  int base_point = 0;
  int stab_class_id = 0;
  int stab_dim = 0;
  InducedModule module;
  double commutant_residual = 0.0;
};

/// Simple modules of the orbit algebra: induced from stabilizer simples,
/// orbit by orbit, with irreducibility and pairwise non-isomorphism
/// certificates. Checks the exhaustion sum(dim^2) = dim A.
std::vector<OrbitSimple> enumerate_simples(const OrbitAlgebra& a, std::uint64_t seed = 0xD0A1,
                                           const ToleranceConfig& tol = {});

struct BlockDecomposition {
  std::vector<std::vector<int>> blocks;  // basis indices per orbit
  std::vector<std::vector<int>> block_units;  // basis indices of the unit summands
  bool annihilate_exactly = false;
  bool units_sum_to_one = false;
};

BlockDecomposition block_decomposition(const OrbitAlgebra& a);

/// The natural module over one orbit with the regular S(M)-module as the
/// per-label carrier: induce(A, M, regular C^{alpha_M}[G_M]). This is the
/// finite stand-in for the direct sum of the twisted modules in the orbit
/// (each of which contains every stabilizer simple).
InducedModule natural_regular_module(const OrbitAlgebra& a, int point);

struct NaturalSimplicity {
  int span_dim = 0;
  int full_square = 0;
  bool simple = false;  // span_dim == full_square
};

/// Word-span certificate: the natural module is simple iff the image of the
/// algebra fills End of the carrier.
NaturalSimplicity natural_module_simplicity(const OrbitAlgebra& a, int point,
                                            const ToleranceConfig& tol = {});

}  // namespace orbikit
