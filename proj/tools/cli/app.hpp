// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hwk::cli {

/// Runs the `hwk` front-end. Returns the process exit code: 0 on success, 2
/// after printing `error: code=<code> message="..."` to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hwk::cli
