#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orbikit/assoc.hpp"
#include "orbikit/cocycles.hpp"
#include "orbikit/groups.hpp"

namespace orbikit {

/// Dual-pair instance payload: operators on a common carrier.
struct PairData {
  int carrier = 0;
  std::vector<Mat> rho;      // one per algebra basis element
  std::vector<Mat> b_ops;
  std::vector<Mat> ambient;  // optional
  std::vector<Mat> phi;      // optional, one per group element
};

/// Typed contents of an instance file. Sections are optional; commands check
/// for what they need.
struct Instance {
  std::optional<FiniteGroup> group;
  std::optional<GroupAction> action;
  std::optional<TwoCocycle> cocycle;
  std::optional<CocycleFamily> family;
  std::optional<StructureAlgebra> algebra;
  std::optional<Representation> rep;
  std::optional<PairData> pair;
};

/// Parses the section/key=value text format. Throws ParseError with line and
/// column for malformed text and SemanticError for cross-reference failures
/// (unknown group elements, action law violations, family relation
/// violations).
Instance parse_instance(const std::string& text);

/// Deterministic text round-trip: parse(serialize(x)) reproduces x.
std::string serialize_instance(const Instance& inst);

}  // namespace orbikit
