#pragma once

#include <string>
#include <vector>

#include "confsim/config.hpp"
#include "confsim/simulator.hpp"

namespace confsim {

/// Worker count for concurrent member runs: CONFSIM_THREADS if set and
/// positive, otherwise the number of logical processors.
[[nodiscard]] unsigned study_threads();

/// Runs every config; results keep the input order.
[[nodiscard]] std::vector<RunResult> run_all(const std::vector<SimulationConfig>& configs);

/// Frames of `fine` restricted to the nodes and save times of `coarse`.
/// Throws MismatchedGrids unless the grids nest and every coarse time has a
/// fine counterpart.
[[nodiscard]] Trajectory restrict_to(const Grid& fine_grid, const Trajectory& fine, const Grid& coarse_grid,
                                     const Trajectory& coarse);

struct KappaDistance {
    double flux = 0.0;       // ||1/2 S_x|S_x| - ref||, L^{4/3}(0,T;L^2)
    double primitive = 0.0;  // same for the kappa-primitive of S_x
};

[[nodiscard]] KappaDistance kappa_distance(const Grid& grid, const Trajectory& run, double kappa,
                                           const Grid& ref_grid, const Trajectory& ref, double ref_kappa);

struct KappaStudyRow {
    double kappa = 0.0;
    double h = 0.0;
    double dt = 0.0;
    KappaDistance distance;
    double max_principle_margin = 0.0;
    double sup_energy = 0.0;
    double weak_residual_max = 0.0;
};

struct KappaStudy {
    std::vector<SimulationConfig> configs;
    std::vector<RunResult> runs;
    std::vector<KappaStudyRow> rows;
    /// D over the non-reference members is strictly decreasing.
    bool strictly_decreasing = false;
};

[[nodiscard]] KappaStudy kappa_study(const StudyConfig& study);
/// Same aggregation over runs that were already computed.
[[nodiscard]] KappaStudy kappa_study(const StudyConfig& study, std::vector<RunResult> runs);

/// kappa,h,dt,D_kappa,max_principle_margin,sup_energy,weak_residual_max
[[nodiscard]] std::string study_csv(const KappaStudy& study);

/// Members of a joint (h, dt, kappa) -> (h/2, dt/2, kappa/2) refinement path.
[[nodiscard]] StudyConfig refinement_path(const SimulationConfig& base, std::size_t levels);

enum class MmsFamily { elasticity_direct, elasticity_green, parabolic_space, parabolic_time, parabolic_exact };

[[nodiscard]] std::string to_string(MmsFamily family);
[[nodiscard]] MmsFamily mms_family_from(const std::string& name);

struct MmsResult {
    MmsFamily family{};
    std::vector<double> steps;   // h or dt per level
    std::vector<double> errors;  // max-norm error per level
    double order = 0.0;          // least-squares slope of log error vs log step
    /// Errors are at rounding level, so the slope carries no information.
    bool machine_precision = false;
};

[[nodiscard]] MmsResult mms_convergence(MmsFamily family, int levels = 4);

/// Least-squares slope of log(errors) against log(steps).
[[nodiscard]] double fitted_order(const std::vector<double>& steps, const std::vector<double>& errors);

}  // namespace confsim
