#pragma once

#include <exception>
#include <iosfwd>
#include <string>

#include "hip/config.hpp"

namespace hip::cli {

/// Process exit codes.
enum ExitCode : int {
    exit_ok = 0,
    exit_verify_failed = 1,
    exit_config = 2,
    exit_gradient_floor = 3,
    exit_solver = 4,
    exit_divergence = 5,
};

/// Most specific library error class, e.g. "GradientFloorViolated".
std::string error_name(const std::exception& e);
/// Exit code for an exception escaping a command.
int exit_code_for(const std::exception& e);

// Each command writes its files under config.out, prints a report to `out`
// and returns an exit code. Library errors propagate.
int cmd_forward(const ExperimentConfig& config, std::ostream& out);
int cmd_verify(const ExperimentConfig& config, std::ostream& out);
int cmd_reconstruct(const ExperimentConfig& config, std::ostream& out);
int cmd_sweep_linear(const ExperimentConfig& config, std::ostream& out);
int cmd_sweep_nonlinear(const ExperimentConfig& config, std::ostream& out);
int cmd_plan(const ExperimentConfig& config, std::ostream& out);

/// Dispatches by command name and maps escaping errors to exit codes,
/// reporting them on `err`. Unknown names give exit_config.
int run_command(const std::string& name, const ExperimentConfig& config, std::ostream& out,
                std::ostream& err);

}  // namespace hip::cli
