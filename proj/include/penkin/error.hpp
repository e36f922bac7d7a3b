#pragma once

#include <stdexcept>
#include <string>

namespace penkin {

// Every failure the library reports derives from Error so callers (the CLI in
// particular) can map them to a single exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define PENKIN_DEFINE_ERROR(Name)          \
  class Name : public Error {              \
   public:                                 \
    explicit Name(const std::string& msg)  \
        : Error(#Name ": " + msg) {}       \
  }

PENKIN_DEFINE_ERROR(InvalidArgument);
PENKIN_DEFINE_ERROR(DisplacementTooLarge);
PENKIN_DEFINE_ERROR(NegativeDistribution);
PENKIN_DEFINE_ERROR(QuadratureNotConverged);
PENKIN_DEFINE_ERROR(InvalidFrequency);
PENKIN_DEFINE_ERROR(ModeMismatch);
PENKIN_DEFINE_ERROR(GridMismatch);
PENKIN_DEFINE_ERROR(NonConvergence);
PENKIN_DEFINE_ERROR(WindowViolation);
PENKIN_DEFINE_ERROR(UnstableData);
PENKIN_DEFINE_ERROR(MissingDiagnostics);
PENKIN_DEFINE_ERROR(InvalidLevels);
PENKIN_DEFINE_ERROR(SchemaError);
PENKIN_DEFINE_ERROR(IoError);

#undef PENKIN_DEFINE_ERROR

}  // namespace penkin
