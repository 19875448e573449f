#pragma once

#include <stdexcept>
#include <string>

namespace fisherlab {

// Exit-code taxonomy shared by the library and the CLI. Library code throws
// Error with the category; the CLI maps it straight to a process exit code.
enum class ExitCode : int {
    ok = 0,
    tolerance = 1,
    io = 2,
    resource = 3,
    bad_state = 4,
    usage = 64,
};

class Error : public std::runtime_error {
  public:
    Error(ExitCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    ExitCode code() const { return code_; }

  private:
    ExitCode code_;
};

[[noreturn]] inline void fail_usage(const std::string& msg) { throw Error(ExitCode::usage, msg); }
[[noreturn]] inline void fail_io(const std::string& msg) { throw Error(ExitCode::io, msg); }
[[noreturn]] inline void fail_resource(const std::string& msg) { throw Error(ExitCode::resource, msg); }
[[noreturn]] inline void fail_bad_state(const std::string& msg) { throw Error(ExitCode::bad_state, msg); }
[[noreturn]] inline void fail_tolerance(const std::string& msg) { throw Error(ExitCode::tolerance, msg); }

}  // namespace fisherlab
