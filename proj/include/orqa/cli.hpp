// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace orqa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Entry point of the `orqa` tool. `args` excludes the program name.
/// Returns 0 on success, 1 on usage errors, 2 on data errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace orqa::cli
