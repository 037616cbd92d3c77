#pragma once

#include <iosfwd>

namespace hankel::cli {

/// Exit codes: 0 success, 1 verification failure, 2 input error,
/// 3 numerical failure.
enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kInputError = 2, kNumericalError = 3 };

inline constexpr const char* kToolVersion = "1.0.0";

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hankel::cli
