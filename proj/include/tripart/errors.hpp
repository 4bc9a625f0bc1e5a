#pragma once

#include <stdexcept>
#include <string>

namespace tripart {

// Base class for every error the library raises. name() is the stable,
// machine-readable identifier that ends up in CLI reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* name() const noexcept = 0;
};

// Caller-side contract violations: bad indices, mismatched shapes, invalid
// density matrices, unparsable files.
class UsageError : public Error {
  using Error::Error;
};

// Algorithm-level failures: the inputs are well formed but do not determine a
// unique pure state within the configured tolerances.
class AlgorithmError : public Error {
  using Error::Error;
};

#define TRIPART_DEFINE_ERROR(Name, Base)                          \
  class Name : public Base {                                      \
   public:                                                        \
    using Base::Base;                                             \
    const char* name() const noexcept override { return #Name; } \
  }

TRIPART_DEFINE_ERROR(IndexError, UsageError);
TRIPART_DEFINE_ERROR(ContractError, UsageError);
TRIPART_DEFINE_ERROR(NumericalError, AlgorithmError);
TRIPART_DEFINE_ERROR(SpectrumMismatch, AlgorithmError);
TRIPART_DEFINE_ERROR(GenericityViolation, AlgorithmError);
TRIPART_DEFINE_ERROR(PhaseGraphDisconnected, AlgorithmError);
TRIPART_DEFINE_ERROR(PhaseInconsistency, AlgorithmError);
TRIPART_DEFINE_ERROR(MarginalInconsistency, AlgorithmError);
TRIPART_DEFINE_ERROR(ExpansionLeakage, AlgorithmError);

#undef TRIPART_DEFINE_ERROR

}  // namespace tripart
