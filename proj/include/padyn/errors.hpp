#pragma once

#include <stdexcept>
#include <string>

namespace padyn {

// Root of every error raised by the library. Callers that only need a
// message can catch this; the subclasses exist so tests and the CLI can
// tell failure modes apart.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define PADYN_DEFINE_ERROR(Name)        \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  };

PADYN_DEFINE_ERROR(ContextMismatch)
PADYN_DEFINE_ERROR(DimensionMismatch)
PADYN_DEFINE_ERROR(NotAUnit)
PADYN_DEFINE_ERROR(NotInvertible)
PADYN_DEFINE_ERROR(ConstantTermNotDivisible)
PADYN_DEFINE_ERROR(TailNotCertified)
PADYN_DEFINE_ERROR(PrecisionExhausted)
PADYN_DEFINE_ERROR(DivisibilityFailure)
PADYN_DEFINE_ERROR(ConditionViolated)
PADYN_DEFINE_ERROR(NoPrimeFound)
PADYN_DEFINE_ERROR(NotUnramifiedAtResidue)
PADYN_DEFINE_ERROR(ZeroLeadingCoefficient)
PADYN_DEFINE_ERROR(ParseError)
PADYN_DEFINE_ERROR(InvalidModel)

#undef PADYN_DEFINE_ERROR

}  // namespace padyn
