#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orbikit/assoc.hpp"

namespace orbikit {

/// A carrier with two commuting structures: a semisimple algebra acting
/// through rho, and a finite list of generator operators standing for the
/// fixed-subalgebra modes. Optionally a larger ambient operator list with a
/// projective group action phi normalizing its span.
struct CommutingPair {
  StructureAlgebra algebra;
  Representation rho;
  std::vector<Mat> b_ops;
  std::vector<Mat> ambient_ops;          // may be empty
  std::optional<FiniteGroup> phi_group;  // present iff phi is
  GroupRep phi;

  int carrier_dim() const { return rho.dim; }
};

/// Validates the commutation [rho(b_i), b] = 0 for every generator; throws
/// Error with the worst residual on violation.
CommutingPair make_commuting_pair(StructureAlgebra algebra, Representation rho,
                                  std::vector<Mat> b_ops, std::vector<Mat> ambient_ops = {},
                                  std::optional<FiniteGroup> phi_group = std::nullopt,
                                  GroupRep phi = {}, const ToleranceConfig& tol = {});

struct IsotypicSplit {
  Decomposition dec;
  std::vector<Mat> component_bases;  // orthonormal basis per component
  double b_invariance_residual = 0.0;
};

/// Isotypic decomposition under the algebra, with every component checked
/// invariant under every B generator.
IsotypicSplit isotypic_split(const CommutingPair& p, std::uint64_t seed = 0xD0A1,
                             const ToleranceConfig& tol = {});

struct MultiplicitySpace {
  int class_id = 0;
  int multiplicity = 0;
  std::vector<Mat> hom_basis;  // orthonormal F_t: W -> carrier
  std::vector<Mat> b_action;   // per generator, multiplicity x multiplicity
  double action_residual = 0.0;
  double theta_residual = 0.0;
};

/// Hom_A(W_lambda, carrier) with the generator action (b.f)(w) = b(f(w)).
/// Throws AbsentClass when the multiplicity is zero. The theta map
/// w (x) f -> f(w) is verified to intertwine both actions.
MultiplicitySpace multiplicity_action(const CommutingPair& p, const IsotypicSplit& split,
                                      int class_id, const ToleranceConfig& tol = {});

struct ClassReport {
  int class_id = 0;
  int irrep_dim = 0;
  int multiplicity = 0;
  bool present = false;
  bool irreducible = false;
  bool inconclusive = false;  // word span still growing at L
  int word_length_used = 0;
  int word_span_dim = 0;
  double residual = 0.0;
};

struct DualPairReport {
  std::vector<ClassReport> classes;
  struct IsoEntry {
    int class_a = 0, class_b = 0;
    bool isomorphic = false;
  };
  std::vector<IsoEntry> iso_table;
  bool overall = false;
  int word_length_max = 0;
  std::vector<std::string> notes;
};

/// Certifies the two dual-pair conditions on the present classes:
/// (1) each multiplicity space irreducible under the generated operator
///     algebra (word-span saturation at the full matrix algebra);
/// (2) multiplicity spaces of distinct classes pairwise non-isomorphic.
/// Absent classes are reported but stay neutral. A still-growing span at L is
/// reported as inconclusive, never as a failure. A precomputed split may be
/// passed to avoid repeating the decomposition.
DualPairReport verify_dual_pair(const CommutingPair& p, int word_length = 0 /* 2*dim */,
                                std::uint64_t seed = 0xD0A1, const ToleranceConfig& tol = {},
                                const IsotypicSplit* precomputed = nullptr);

struct WitnessSample {
  int block = 0;  // index into the reps list
  Vec x;
  Vec y;  // prescribed image f(x)
};

struct Witness {
  Vec element;  // coordinates over the algebra basis
  double residual = 0.0;
};

/// Density witness: an algebra element realizing the prescription x -> y on
/// every sample, across pairwise inequivalent simple modules. Throws
/// NoWitness when the hypotheses fail (non-simple block, two equivalent
/// blocks, or no solution within tolerance).
Witness jacobson_witness(const StructureAlgebra& a, const std::vector<Representation>& reps,
                         const std::vector<WitnessSample>& samples,
                         const ToleranceConfig& tol = {});

struct InvariantWitness {
  Mat op;           // averaged operator on the carrier
  Vec span_coords;  // coordinates in the ambient word-span basis
  int length_used = 0;
  double residual = 0.0;       // worst of step-1 solve and step-3 checks
  double span_residual = 0.0;  // distance of the average from the span
};

/// Realizes an A-equivariant prescription f on an A-invariant subspace X by
/// an operator from the ambient word span, averaged over phi to commute with
/// the group action: t_bar = (1/|G|) sum phi(g) t phi(g)^{-1}.
/// Throws NoAmbientWitness when step 1 fails at the length bound and
/// AverageDrift when the average stops matching f on X (signals violated
/// preconditions).
InvariantWitness invariant_witness(const CommutingPair& p, const Mat& x_basis,
                                   const Mat& f_on_x, int word_length = 0,
                                   const WordSpan* precomputed_span = nullptr,
                                   const ToleranceConfig& tol = {});

}  // namespace orbikit
