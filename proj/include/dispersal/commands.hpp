#pragma once

namespace dispersal {

enum ExitCode : int {
    exit_ok = 0,
    exit_validation = 2,
    exit_parse = 3,
    exit_solver = 4,
    exit_postcondition = 5,
};

/// Entry point of the dispersal_lab binary:
///   dispersal_lab <command> [--config PATH | --preset NAME] [--out DIR] [--set k=v ...]
/// Commands: validate, figure1, steady, hamiltonian, hj, canonical, converge.
int run_cli(int argc, const char* const* argv);

}  // namespace dispersal
