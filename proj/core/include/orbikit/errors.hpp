#pragma once

#include <stdexcept>
#include <string>

namespace orbikit {

/// Base class for all failures the kit raises deliberately.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// numerics
struct DefectiveMatrix : Error {
  using Error::Error;
};

// groups
struct ClosureTooLarge : Error {
  using Error::Error;
};
struct GroupTooLarge : Error {
  using Error::Error;
};

// assoc / decomposition
struct PrecisionLoss : Error {
  using Error::Error;
};

// tga
struct NonScalarDefect : Error {
  using Error::Error;
};
struct NotFaithful : Error {
  using Error::Error;
};

// cocycles / tga
struct CocycleInvalid : Error {
  using Error::Error;
};

// orbit
struct FamilyViolation : Error {
  using Error::Error;
};

// dualpair
struct AbsentClass : Error {
  using Error::Error;
};
struct NoWitness : Error {
  using Error::Error;
};
struct NoAmbientWitness : Error {
  using Error::Error;
};
struct AverageDrift : Error {
  using Error::Error;
};
struct Inconclusive : Error {
  using Error::Error;
};

// boson
struct SectorMismatch : Error {
  using Error::Error;
};
struct NotStable : Error {
  using Error::Error;
};
struct WindowTooSmall : Error {
  using Error::Error;
};

// cli / instance files
struct ParseError : Error {
  int line = 0;
  int column = 0;
  ParseError(int line_, int column_, const std::string& what_)
      : Error("parse error at " + std::to_string(line_) + ":" + std::to_string(column_) + ": " + what_),
        line(line_),
        column(column_) {}
};
struct SemanticError : Error {
  using Error::Error;
};

}  // namespace orbikit
