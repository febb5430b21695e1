#pragma once

#include <stdexcept>
#include <string>

namespace homocone {

/// Base of every error raised by the library.
class ConeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define HOMOCONE_DEFINE_ERROR(Name)            \
  class Name : public ConeError {              \
   public:                                     \
    explicit Name(const std::string& what)     \
        : ConeError(#Name ": " + what) {}      \
  }

/// Malformed input: bad JSON, wrong dimensions, unknown names.
HOMOCONE_DEFINE_ERROR(InvalidInput);
/// A product of structured matrices left Z_V beyond tolerance.
HOMOCONE_DEFINE_ERROR(ClosureViolation);
HOMOCONE_DEFINE_ERROR(NotInCone);
/// Dense Cholesky factor does not project cleanly onto the triangular group.
HOMOCONE_DEFINE_ERROR(StructureLeak);
HOMOCONE_DEFINE_ERROR(NotInDualCone);
HOMOCONE_DEFINE_ERROR(NotInGindikinSet);
HOMOCONE_DEFINE_ERROR(NonRegularStratum);
HOMOCONE_DEFINE_ERROR(EmptyBlock);
HOMOCONE_DEFINE_ERROR(PreconditionViolation);
HOMOCONE_DEFINE_ERROR(OutOfDomain);
HOMOCONE_DEFINE_ERROR(DegenerateScale);
HOMOCONE_DEFINE_ERROR(InconsistentCharacter);

#undef HOMOCONE_DEFINE_ERROR

}  // namespace homocone
