/*
  Command-line surface. Every subcommand is a thin composition of library
  calls; outputs are byte-stable JSON/CSV for fixed seeds and inputs.

  Exit codes: 0 ok, 1 usage, 2 data error, 3 internal invariant violation.
*/
#pragma once

namespace dowker {

int cli_dispatch(int argc, const char* const* argv);

}  // namespace dowker
