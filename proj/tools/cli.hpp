#pragma once

#include <iosfwd>

namespace lrs::cli {

// Exit codes: 0 success or accept, 1 verification reject or failed check,
// 2 usage or data error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lrs::cli
