#pragma once

#include <iosfwd>
#include <string>

#include "ppdim/cli/config.hpp"
#include "ppdim/spectra.hpp"
#include "ppdim/states.hpp"

namespace ppdim::cli {

enum class Command { gaps, scan, subseq, dynamics, verify };

[[nodiscard]] Command command_from_string(const std::string& name);

[[nodiscard]] EigenvalueFamily make_family(const FamilyConfig& c);
[[nodiscard]] BoundState make_state(const StateConfig& c, const RunConfig& run);

/// Writes the command's files under cfg.run.out and a short report to `log`.
/// Returns 0 when every gated check passes, 1 otherwise. Throws ConfigError
/// for invalid settings.
int run_command(Command cmd, const ExperimentConfig& cfg, std::ostream& log);

int run_gaps(const ExperimentConfig& cfg, std::ostream& log);
int run_scan(const ExperimentConfig& cfg, std::ostream& log);
int run_subseq(const ExperimentConfig& cfg, std::ostream& log);
int run_dynamics(const ExperimentConfig& cfg, std::ostream& log);
int run_verify(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace ppdim::cli
