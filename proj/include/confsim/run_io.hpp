#pragma once

#include <string>

#include "confsim/config.hpp"
#include "confsim/grid.hpp"
#include "confsim/simulator.hpp"

namespace confsim {

/// Two-column (x, value) text with a "# t = ..." header line.
[[nodiscard]] std::string field_text(const Grid& grid, const Field& f, double t);
/// Returns the values column and stores the header time in `t`.
[[nodiscard]] Field parse_field_text(const std::string& text, double* t = nullptr);

/// Writes frames/S_<k>.csv, frames/u_<k>.csv, frames/index.csv,
/// diagnostics.csv, weak_residual.csv, meta.txt and, in both-verify mode,
/// elasticity_check.csv into `dir`.
void write_run(const std::string& dir, const SimulationConfig& config, const RunResult& result);

/// Contents of meta.txt: the config echo plus comment lines with the hash,
/// the effective time step and the termination status.  Re-parses as a config.
[[nodiscard]] std::string meta_text(const SimulationConfig& config, const TerminationStatus& status);

struct PersistedRun {
    SimulationConfig config;
    Trajectory trajectory;
    std::string config_hash;  // as recorded in meta.txt
};

/// Reads meta.txt and every frame listed in frames/index.csv.
[[nodiscard]] PersistedRun read_run(const std::string& dir);

}  // namespace confsim
