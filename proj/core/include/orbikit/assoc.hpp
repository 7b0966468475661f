#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orbikit/groups.hpp"
#include "orbikit/numerics.hpp"

namespace orbikit {

/// Finite-dimensional associative algebra by structure constants, stored as
/// left-multiplication matrices: left[i](k, j) = c[i][j][k], so that
/// b_i b_j = sum_k c[i][j][k] b_k and left[i] is the matrix of b_i acting on
/// the algebra itself.
struct StructureAlgebra {
  int dim = 0;
  std::vector<Mat> left;
  Vec unit;

  Complex c(int i, int j, int k) const { return left[i](k, j); }
  Vec multiply(const Vec& a, const Vec& b) const;
};

StructureAlgebra algebra_from_tensor(
    int dim, const std::vector<std::vector<std::vector<Complex>>>& c, Vec unit);

StructureAlgebra group_algebra(const FiniteGroup& g);

struct AlgebraVerdict {
  bool ok = false;
  double worst_residual = 0.0;
  std::string detail;
};

/// Associativity and two-sided unit law, within eps_residual (scaled by the
/// magnitude of the structure constants).
AlgebraVerdict verify_algebra(const StructureAlgebra& a, const ToleranceConfig& tol = {});

/// Matrices rho[i], one per algebra basis element, acting on a carrier of
/// dimension dim.
struct Representation {
  int dim = 0;
  std::vector<Mat> rho;
};

double representation_residual(const StructureAlgebra& a, const Representation& rep);
bool verify_representation(const StructureAlgebra& a, const Representation& rep,
                           const ToleranceConfig& tol = {});

/// Left multiplication on the algebra itself.
Representation regular_rep(const StructureAlgebra& a);

/// Trace-form criterion: Tr(L_a L_b) nondegenerate within eps_rank.
bool is_semisimple(const StructureAlgebra& a, const ToleranceConfig& tol = {});

struct Component {
  int class_id = 0;
  std::vector<Mat> irrep;  // W matrices per algebra basis element
  int multiplicity = 0;
  /// carrier_dim x (w * multiplicity); column t*w + b is the image of
  /// (basis vector b of W) in the t-th copy.
  Mat embedding;
  int irrep_dim() const { return static_cast<int>(irrep.empty() ? 0 : irrep.front().rows()); }
};

struct Decomposition {
  std::vector<Component> components;
  Mat assembled;  // all embeddings side by side; square and invertible
  double reconstruction_residual = 0.0;
  std::vector<std::uint64_t> draw_log;  // seeds of the random splits used
};

/// Isotypic decomposition of a representation of a semisimple algebra.
/// Splits along eigenspaces of random commutant elements (Hermitian
/// symmetrized whenever the commutant is adjoint-closed, which holds for
/// every unitary-monomial algebra this kit builds), recursing until each
/// block has scalar commutant, then groups isomorphic blocks.
Decomposition decompose(const StructureAlgebra& a, const Representation& rep,
                        std::uint64_t seed = 0xD0A1, const ToleranceConfig& tol = {});

/// Invertible T with rho2(a) T = T rho1(a) for all basis elements, gauge
/// fixed: unit Frobenius norm, first nonzero entry of the first column made
/// real positive. nullopt when the hom space has no invertible element.
std::optional<Mat> module_iso(const Representation& rep1, const Representation& rep2,
                              const ToleranceConfig& tol = {}, std::uint64_t seed = 0xD0A1);

/// One matrix per group element.
using GroupRep = std::vector<Mat>;

/// A group representation viewed as a representation of the group algebra.
Representation rep_of_group(const GroupRep& rep);

struct TensorCoverEntry {
  int class_id = 0;
  int irrep_dim = 0;
  int power = 0;  // smallest n with the class contained in rep^{tensor n}
  std::vector<Complex> character;
};

/// For a faithful group representation, the smallest tensor power in which
/// each irreducible class appears (n = 0 is the trivial class). Throws
/// NotFaithful when some non-identity element acts as the identity.
std::vector<TensorCoverEntry> faithful_tensor_cover(const FiniteGroup& g, const GroupRep& rep,
                                                    std::uint64_t seed = 0xD0A1,
                                                    const ToleranceConfig& tol = {});

/// Linear span dimension of a set of matrices (flattened rank).
int span_dimension(const std::vector<Mat>& mats, const ToleranceConfig& tol = {});

struct WordSpan {
  std::vector<Mat> basis;  // orthonormal in the flattened inner product
  int dimension = 0;
  bool saturated = false;  // growth stopped (or the full matrix algebra was hit)
  int stop_length = 0;
};

/// Span of all products of at most max_length generators (identity included).
/// Stabilization certifies the span equals the full generated algebra.
WordSpan grow_word_span(const std::vector<Mat>& gens, int max_length,
                        const ToleranceConfig& tol = {});

}  // namespace orbikit
