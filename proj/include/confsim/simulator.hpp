#pragma once

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "confsim/config.hpp"
#include "confsim/diagnostics.hpp"
#include "confsim/elasticity.hpp"
#include "confsim/grid.hpp"
#include "confsim/order_parameter.hpp"

namespace confsim {

struct TerminationStatus {
    bool completed = true;
    std::optional<double> rejected_at;  // set when a step was rejected
    std::string message;
};

struct RunResult {
    Trajectory trajectory;
    DiagnosticsReport diagnostics;
    TerminationStatus status;
    /// Max |u_direct - u_green| per saved frame (both-verify mode only).
    std::vector<double> elasticity_discrepancy;
};

/// Resumable state between two time steps.
struct Snapshot {
    static constexpr int format_version = 1;

    std::string config_hash;
    long step = 0;
    Field S;
    std::deque<Field> history;  // mollifier buffer, newest first
};

[[nodiscard]] std::string serialize(const Snapshot& snapshot);
/// Throws ChecksumMismatch or VersionMismatch.
[[nodiscard]] Snapshot deserialize_snapshot(const std::string& text);
void save_snapshot(const Snapshot& snapshot, const std::string& path);
[[nodiscard]] Snapshot load_snapshot(const std::string& path);

/// Coupled time marching: mollify S history, solve elasticity, build the
/// configurational force, step S.  Frame k of the trajectory holds S(t_k)
/// and the displacement computed from the mollified history at t_k.
class Simulator {
public:
    explicit Simulator(SimulationConfig config);
    Simulator(SimulationConfig config, const Snapshot& snapshot);

    /// Processes frames and steps while step_index() < stop_step; the final
    /// frame (step == total_steps()) ends the run.  Returns false if a step
    /// was rejected.
    bool advance(long stop_step);
    bool run_to_end() { return advance(total_steps_ + 1); }

    [[nodiscard]] long step_index() const { return step_; }
    [[nodiscard]] long total_steps() const { return total_steps_; }
    [[nodiscard]] double time() const { return static_cast<double>(step_) * dt_; }
    [[nodiscard]] bool finished() const { return finished_; }

    [[nodiscard]] const Trajectory& trajectory() const { return trajectory_; }
    [[nodiscard]] const std::vector<double>& elasticity_discrepancy() const { return discrepancy_; }
    [[nodiscard]] const TerminationStatus& status() const { return status_; }
    [[nodiscard]] const SimulationConfig& config() const { return config_; }
    [[nodiscard]] const Grid& grid() const { return grid_; }
    [[nodiscard]] const MaterialParams& material() const { return material_; }
    [[nodiscard]] const RegularizationParams& regularization() const { return reg_; }

    /// Frames written before a restart; later frames are appended to them.
    void restore_frames(Trajectory frames, std::vector<double> discrepancy = {}) {
        trajectory_ = std::move(frames);
        discrepancy_ = std::move(discrepancy);
    }

    /// State before processing the current step's frame.
    [[nodiscard]] Snapshot snapshot() const;

    /// Displacement for a given (mollified) order parameter at time t.
    [[nodiscard]] Field displacement(const Field& S_moll, double t, double* discrepancy = nullptr) const;

    [[nodiscard]] RunResult result() const;

private:
    SimulationConfig config_;
    Grid grid_;
    MaterialParams material_;
    RegularizationParams reg_;
    GreenKernel<double> kernel_;
    double dt_;
    long total_steps_;

    long step_ = 0;
    Field S_;
    MollifierState mollifier_;
    bool finished_ = false;

    Trajectory trajectory_;
    std::vector<double> discrepancy_;
    TerminationStatus status_;
};

/// Whole run from t = 0 to T_e; never throws StepRejected (see status).
[[nodiscard]] RunResult run(const SimulationConfig& config);

}  // namespace confsim
