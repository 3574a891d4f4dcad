#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lqu {

enum class ErrorKind {
  NotHermitian,
  NoConvergence,
  NotPSD,
  DimensionMismatch,
  DegenerateDirection,
  DegenerateSpectrum,
  WrongDimension,
  ParamOutOfRange,
  TraceNotOne,
  ParseError,
};

std::string_view error_kind_name(ErrorKind kind) noexcept;

// Every failure in the library is reported through this type; what() starts
// with the kind name so command-line callers can print it verbatim.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

}  // namespace lqu
