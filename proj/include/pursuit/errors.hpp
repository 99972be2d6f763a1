#pragma once

#include <stdexcept>
#include <string>

namespace pursuit {

/// Base of every error thrown by the planner library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define PURSUIT_DEFINE_ERROR(Name)        \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
    explicit Name() : Error(#Name) {}     \
  }

PURSUIT_DEFINE_ERROR(InvalidEnvironment);
PURSUIT_DEFINE_ERROR(PointOutsideEnvironment);
PURSUIT_DEFINE_ERROR(EmptyRegion);
PURSUIT_DEFINE_ERROR(InvalidEdge);
PURSUIT_DEFINE_ERROR(InvalidConfig);
PURSUIT_DEFINE_ERROR(EmptyGraph);
PURSUIT_DEFINE_ERROR(CoverageStall);
PURSUIT_DEFINE_ERROR(NoRoot);
PURSUIT_DEFINE_ERROR(Timeout);
PURSUIT_DEFINE_ERROR(NotASolution);
PURSUIT_DEFINE_ERROR(ResolutionTooCoarse);
PURSUIT_DEFINE_ERROR(FormatError);

#undef PURSUIT_DEFINE_ERROR

}  // namespace pursuit
