#pragma once

namespace turbda {

int run_cli(int argc, const char* const* argv);

}  // namespace turbda
