#pragma once

namespace cantor {

/// Exit codes: 0 success or pass, 1 verified violation or refuted formula,
/// 2 input or format error, 3 construction failure.
int run_command(int argc, char** argv);

}  // namespace cantor
