#pragma once

namespace maca::cli {

// Exit codes: 0 success, 2 usage, 3 data error, 4 capacity.
int run(int argc, char** argv);

}  // namespace maca::cli
