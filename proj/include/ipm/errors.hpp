#pragma once

#include <stdexcept>
#include <string>

namespace ipm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define IPM_DECLARE_ERROR(name)             \
  class name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  };

IPM_DECLARE_ERROR(DomainError)
IPM_DECLARE_ERROR(ResolutionError)
IPM_DECLARE_ERROR(UnsupportedOrderError)
IPM_DECLARE_ERROR(ParityError)
IPM_DECLARE_ERROR(DegenerateDomainError)
IPM_DECLARE_ERROR(PreconditionError)
IPM_DECLARE_ERROR(NoConvergenceError)
IPM_DECLARE_ERROR(NoRootError)
IPM_DECLARE_ERROR(MonotonicityError)
IPM_DECLARE_ERROR(ImpossibleTargetError)
IPM_DECLARE_ERROR(BracketError)
IPM_DECLARE_ERROR(StepSizeError)
IPM_DECLARE_ERROR(MemoryGuardError)
IPM_DECLARE_ERROR(UsageError)

#undef IPM_DECLARE_ERROR

// Thrown by the time stepper when the solution leaves the representable range.
class BlowupReached : public Error {
 public:
  BlowupReached(const std::string& what, double t) : Error(what), time(t) {}
  double time;
};

}  // namespace ipm
