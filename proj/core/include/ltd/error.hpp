#pragma once

#include <stdexcept>
#include <string>

namespace ltd {

enum class ErrorCode {
  DimensionMismatch,
  InvalidInput,
  DegenerateInput,
  NumericFailure,
  Io,
  BadMagic,
  Truncated,
  NonFinite,
  Config,
};

const char *to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above; the CLI
// maps them onto distinct exit statuses.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what)
    : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace ltd
