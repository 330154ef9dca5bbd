#pragma once

#include <ostream>

namespace cosym {

/// Entry point of the `cosym` executable. Returns the process exit code:
/// 0 all verdicts pass, 1 a verdict fails or a step errors, 2 invalid input.
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace cosym
