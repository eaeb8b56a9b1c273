#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace idelek {

/* Every throw carries a short machine-readable kind ("IndexDivisorError",
 * "NotRamified", ...) so callers and the CLI can map failures to exit codes
 * without string-matching free-form messages. */
struct Error : std::runtime_error {
  std::string kind;
  Error(std::string k, const std::string& msg)
      : std::runtime_error(k + ": " + msg), kind(std::move(k)) {}
};

/* Bad input data or broken preconditions. CLI exit code 1. */
struct ValidationError : Error {
  using Error::Error;
};

/* Inputs outside the decidable fragment (field degree, component kind).
 * CLI exit code 2. */
struct UnsupportedError : Error {
  using Error::Error;
};

/* Numeric equality could not be decided at the precision cap. CLI exit 3. */
struct PrecisionExhausted : Error {
  explicit PrecisionExhausted(const std::string& msg)
      : Error("PrecisionExhausted", msg) {}
};

}  // namespace idelek
