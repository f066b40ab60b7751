#pragma once

#include "fgclock/errors.hpp"

namespace fgclock::cli {

// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitValidation = 3,
  kExitNumerical = 4,  // convergence and grid-coverage failures
  kExitIo = 5,
};

}  // namespace fgclock::cli
