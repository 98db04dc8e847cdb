#pragma once

#include <stdexcept>
#include <string>

namespace tamm {

enum class Errc {
  dimension_mismatch,
  degenerate_parameter,
  domain,
  parse,
  verification,
  budget_exceeded,
  io,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, Errc code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace tamm
