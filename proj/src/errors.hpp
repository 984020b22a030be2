#pragma once

#include <stdexcept>
#include <string>

namespace pushlex {

// Error categories mirror the status codes of the C API so exceptions can be
// translated at the library boundary without string matching.
enum class ErrorCode {
    invalid_argument,
    parse,
    unknown_name,
    io,
    precondition,
    internal,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

} // namespace pushlex
