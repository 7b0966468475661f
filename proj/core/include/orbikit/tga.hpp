#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orbikit/assoc.hpp"
#include "orbikit/cocycles.hpp"

namespace orbikit {

/// Algebra whose basis products are single basis elements scaled by exact
/// roots of unity, or zero. Associativity and the unit law can be checked
/// exactly, with no floating point involved.
struct MonomialAlgebra {
  struct Entry {
    int target = -1;  // -1 means the product is zero
    RootOfUnity scalar;
    bool operator==(const Entry&) const = default;
  };
  int dim = 0;
  std::vector<std::vector<Entry>> prod;            // prod[i][j]
  std::vector<std::pair<int, RootOfUnity>> unit;   // sparse sum of basis elements

  Entry times(const Entry& a, int j) const;  // (a) * b_j
  bool associativity_exact() const;
  bool unit_exact() const;
  StructureAlgebra to_structure_algebra() const;
};

struct TwistedGroupAlgebra {
  FiniteGroup group;
  TwoCocycle alpha;
  MonomialAlgebra mono;
  StructureAlgebra algebra;
};

/// C^alpha[G] with basis indexed by group elements and product
/// b_g b_h = alpha(g,h) b_{gh}. Throws CocycleInvalid when alpha fails
/// verify_cocycle.
TwistedGroupAlgebra build_tga(const FiniteGroup& g, const TwoCocycle& alpha);

struct SimpleModule {
  int class_id = 0;
  std::vector<Mat> matrices;  // per basis element of the algebra
  int multiplicity = 0;       // multiplicity in the regular module
  int dim() const { return static_cast<int>(matrices.empty() ? 0 : matrices.front().rows()); }
};

/// Simple modules with multiplicities, obtained from the regular module.
/// Checks sum(dim^2) = |G| and multiplicity = dimension; PrecisionLoss
/// otherwise.
std::vector<SimpleModule> simples(const TwistedGroupAlgebra& t, std::uint64_t seed = 0xD0A1,
                                  const ToleranceConfig& tol = {});

struct CocycleExtraction {
  std::vector<std::vector<Complex>> raw;  // raw[g][h], scalar of phi(g)phi(h)phi(gh)^{-1}
  std::optional<TwoCocycle> snapped;
  std::vector<std::string> warnings;
  double worst_scalar_residual = 0.0;
};

/// Scalar defect table of a projective representation. Scalars within 1e-6 of
/// a root of unity of order <= max_order are snapped; the snapped table is
/// re-verified as a cocycle. Throws NonScalarDefect when some
/// phi(g)phi(h)phi(gh)^{-1} is not scalar within tolerance.
CocycleExtraction extract_projective_cocycle(const FiniteGroup& g, const GroupRep& phi,
                                             const ToleranceConfig& tol = {},
                                             long long max_order = 0 /* default 2|G|^2 */);

/// The snapped cocycle of extract_projective_cocycle; throws when snapping
/// failed for some entry.
TwoCocycle cocycle_of_projective(const FiniteGroup& g, const GroupRep& phi,
                                 const ToleranceConfig& tol = {});

}  // namespace orbikit
