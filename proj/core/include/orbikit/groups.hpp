#pragma once

#include <string>
#include <vector>

#include "orbikit/errors.hpp"

namespace orbikit {

/// Finite group by Cayley table. Element 0 is the identity. The table is
/// validated on construction: associativity on all triples, identity row and
/// column, an inverse for every element.
struct FiniteGroup {
  int order = 1;
  std::vector<std::vector<int>> table;  // table[g][h] = g * h
  std::vector<int> inverse;
  std::vector<std::string> labels;

  static constexpr int identity = 0;
  int mul(int g, int h) const { return table[g][h]; }
  int inv(int g) const { return inverse[g]; }
};

/// Validates the table and fills the inverse map. Labels default to e0, e1, ...
FiniteGroup group_from_table(std::vector<std::vector<int>> table,
                             std::vector<std::string> labels = {});

/// Breadth-first closure of permutation generators, starting from the
/// identity and visiting generators in the given order, so element numbering
/// is deterministic. Composition is left-to-right: (p*q)(x) = q(p(x)).
FiniteGroup group_from_permutations(const std::vector<std::vector<int>>& generators,
                                    int order_cap = 1024);

/// Sorted member indices, always containing the identity, closed under the
/// parent table and inverses.
struct Subgroup {
  std::vector<int> members;
  int order() const { return static_cast<int>(members.size()); }
  bool contains(int g) const;
};

Subgroup make_subgroup(const FiniteGroup& g, std::vector<int> members);
Subgroup trivial_subgroup();
Subgroup full_subgroup(const FiniteGroup& g);
/// Closure of the given seed elements.
Subgroup generated_subgroup(const FiniteGroup& g, const std::vector<int>& seed);

Subgroup center(const FiniteGroup& g);

/// Every subgroup exactly once, sorted by (order, member indices).
/// Requires |G| <= 24; throws GroupTooLarge beyond that.
std::vector<Subgroup> all_subgroups(const FiniteGroup& g);

/// One representative per right coset Hg, the smallest element index in each
/// coset, ordered by that index. representatives[0] is the identity.
std::vector<int> right_transversal(const FiniteGroup& g, const Subgroup& h);

bool is_subgroup_of(const FiniteGroup& g, const Subgroup& h);
Subgroup conjugate_subgroup(const FiniteGroup& g, const Subgroup& h, int by);

/// Right action of a group on a finite point set: act[s][g], validated
/// against identity and the right-action law act[s][gh] = act[act[s][g]][h].
struct GroupAction {
  int points = 0;
  std::vector<std::vector<int>> act;  // act[s][g]
  std::vector<std::string> point_labels;

  int apply(int s, int g) const { return act[s][g]; }
};

GroupAction make_action(const FiniteGroup& g, std::vector<std::vector<int>> act,
                        std::vector<std::string> point_labels = {});
GroupAction trivial_action(const FiniteGroup& g, int points);

struct OrbitStabilizer {
  std::vector<int> orbit;  // sorted point indices
  Subgroup stabilizer;
};

OrbitStabilizer orbit_and_stabilizer(const FiniteGroup& g, const GroupAction& a, int point);

/// All orbits, each sorted, ordered by smallest member.
std::vector<std::vector<int>> orbits(const FiniteGroup& g, const GroupAction& a);

// Cayley-table constructions used throughout the tests and scenarios.
FiniteGroup cyclic_group(int n);
FiniteGroup klein_four_group();
FiniteGroup dihedral_group(int n);   // order 2n, rotations first
FiniteGroup symmetric_group_s3();

}  // namespace orbikit
