#pragma once

#include <stdexcept>
#include <string>

namespace tsrl {

enum class Errc {
  NotCoprime,
  BadShape,
  ModulusTooLarge,
  NotPrimitive,
  RangeTooLarge,
  DerivOrderTooHigh,
  PreconditionViolated,
  SizeTooLarge,
  MissingGolden,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace tsrl
