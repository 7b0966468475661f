#pragma once

#include <optional>
#include <vector>

#include "orbikit/groups.hpp"
#include "orbikit/numerics.hpp"

namespace orbikit {

/// Normalized 2-cocycle table alpha[g][h] with exact root-of-unity values.
struct TwoCocycle {
  int group_order = 1;
  std::vector<std::vector<RootOfUnity>> val;

  static TwoCocycle trivial(int group_order);
  const RootOfUnity& operator()(int g, int h) const { return val[g][h]; }
  RootOfUnity& operator()(int g, int h) { return val[g][h]; }
  bool operator==(const TwoCocycle&) const = default;
};

struct CocycleViolation {
  enum class Kind { normalization, identity };
  Kind kind;
  int g = 0, h = 0, k = 0;  // identity violations use all three
};

struct CocycleVerdict {
  bool ok = true;
  std::vector<CocycleViolation> violations;
};

/// Exact check of normalization alpha(g,1) = alpha(1,g) = 1 and the cocycle
/// identity alpha(g,h) alpha(gh,k) = alpha(g,hk) alpha(h,k).
CocycleVerdict verify_cocycle(const FiniteGroup& g, const TwoCocycle& alpha);

/// d(beta)(g,h) = beta(g) beta(h) / beta(gh); requires beta[identity] = 1.
TwoCocycle coboundary(const FiniteGroup& g, const std::vector<RootOfUnity>& beta);

TwoCocycle cocycle_product(const TwoCocycle& a, const TwoCocycle& b);
TwoCocycle cocycle_ratio(const TwoCocycle& a, const TwoCocycle& b);  // a / b

/// A subgroup as a standalone group plus the index map into the parent.
struct SubgroupGroup {
  FiniteGroup group;
  std::vector<int> to_parent;  // to_parent[i] = parent element index
};
SubgroupGroup subgroup_as_group(const FiniteGroup& g, const Subgroup& h);

TwoCocycle restrict_cocycle(const TwoCocycle& alpha, const SubgroupGroup& sg);

struct CohomologyResult {
  /// beta with alpha2 = alpha1 * d(beta), verified exactly, when it exists
  /// with values in the mu_modulus searched.
  std::optional<std::vector<RootOfUnity>> beta;
  long long modulus = 1;
};

/// Exact cohomology test. Values of both cocycles lie in mu_m for
/// m = lcm of their orders; the coboundary search runs over mu_{m |G|},
/// which is complete: a cocycle trivial over C* always has a coboundary
/// certificate with values in mu_{m |G|}.
CohomologyResult are_cohomologous(const FiniteGroup& g, const TwoCocycle& alpha1,
                                  const TwoCocycle& alpha2);

/// S-indexed cocycle family: one normalized slice per module label.
struct CocycleFamily {
  int points = 0;
  int group_order = 1;
  std::vector<TwoCocycle> slices;  // indexed by point

  static CocycleFamily trivial(int points, int group_order);
  bool is_trivial() const;
  const TwoCocycle& slice(int point) const { return slices[point]; }
};

struct FamilyViolationRecord {
  int point = 0;  // N
  int g = 0, h = 0, k = 0;
  bool normalization = false;
};

struct FamilyVerdict {
  bool ok = true;
  std::vector<FamilyViolationRecord> violations;
};

/// Exact check of the compatibility relation
///   alpha_N(g,hk) alpha_N(h,k) = alpha_M(g,h) alpha_N(gh,k),
/// where M = N . k^{-1} under the right action, plus per-slice normalization.
FamilyVerdict verify_family(const FiniteGroup& g, const GroupAction& a,
                            const CocycleFamily& fam);

}  // namespace orbikit
