#pragma once

#include <string>
#include <vector>

#include "confsim/grid.hpp"
#include "confsim/material.hpp"
#include "confsim/order_parameter.hpp"

namespace confsim {

struct MaxPrincipleResult {
    double margin = 0.0;  // max_{t,x}|S| - max_x|S_0|
    bool pass = true;

    static constexpr double tolerance = 1e-8;
};

[[nodiscard]] MaxPrincipleResult max_principle_check(const Trajectory& traj);

/// ||S_x(t)||^2 and int_0^t int |S_x|_kappa S_xx^2 per saved frame.
struct EnergySeries {
    std::vector<double> sx_squared;
    std::vector<double> dissipation;
    double sup_energy = 0.0;
    // d/dt ||S_x||^2 <= growth ||S_x||^2 + offset, constants fitted to the data.
    double growth = 0.0;
    double offset = 0.0;
    bool bound_holds = true;
};

[[nodiscard]] EnergySeries energy_monitor(const Grid& grid, const Trajectory& traj, const RegularizationParams& reg);

/// Cumulative mixed norms over (0, t_k) for each saved frame.
struct AprioriNorms {
    std::vector<double> st_l43;         // ||S_t||_{L^{4/3}(Q_t)}
    std::vector<double> sx_l83_linf;    // ||S_x||_{L^{8/3}(0,t;L^inf)}
    std::vector<double> flux_div_l43;   // ||(|S_x| S_x)_x||_{L^{4/3}(Q_t)}
    std::vector<double> primitive_w143; // ||int_0^{S_x}|y|_kappa dy||_{L^{4/3}(0,t;W^{1,4/3})}

    [[nodiscard]] bool all_finite() const;
};

[[nodiscard]] AprioriNorms apriori_norms(const Grid& grid, const Trajectory& traj, const RegularizationParams& reg);

/// Separable space-time test function
///   phi(t, x) = amplitude * eta(t / T) * sin(mode * pi * (x - a)/(d - a)),
/// with eta(s) = (1 - s)^power, or cos(pi s / 2) when power == 0.
struct TestFunction {
    int mode = 1;
    int power = 2;
    double amplitude = 1.0;

    [[nodiscard]] double time_factor(double s) const;
    [[nodiscard]] double time_factor_derivative(double s) const;  // d/ds
};

/// Fixed basket of five test functions vanishing at x = a, d and t = T.
[[nodiscard]] std::vector<TestFunction> default_test_set();

/// Residual of the weak formulation
///   (S, phi_t) - (c nu / 2)(|S_x| S_x, phi_x) - (F |S_x|, phi) + (S_0, phi(0))
/// evaluated by space-time trapezoidal quadrature over the saved frames.
[[nodiscard]] std::vector<double> weak_residual(const Grid& grid, const Trajectory& traj, const MaterialParams& params,
                                                const std::vector<TestFunction>& test_set);

/// Smooth functions with phi = phi' = 0 at both ends, normalised to unit
/// discrete H^2 norm.
[[nodiscard]] std::vector<Field> default_dual_basis(const Grid& grid, int count = 4);

/// Cumulative int_0^{t_k} max_phi |((1/2 S_x|S_x|)_t, phi)| dt over the basis:
/// a lower-bound proxy for the L^1(0,t;H^{-2}) norm, not the norm itself.
[[nodiscard]] std::vector<double> dual_norm_series(const Grid& grid, const Trajectory& traj,
                                                   const std::vector<Field>& basis);
[[nodiscard]] double dual_norm_estimate(const Grid& grid, const Trajectory& traj, const std::vector<Field>& basis);

/// Every monitor, as a function of the saved trajectory only.
struct DiagnosticsReport {
    std::vector<double> times;
    std::vector<double> max_abs_S;
    std::vector<double> sx_squared;
    std::vector<double> dissipation;
    AprioriNorms norms;
    std::vector<double> dual_proxy;
    std::vector<double> weak_residuals;  // per test function, over the whole run
    MaxPrincipleResult max_principle;
    EnergySeries energy;

    [[nodiscard]] double weak_residual_max() const;
    [[nodiscard]] bool all_finite() const;
};

[[nodiscard]] DiagnosticsReport compute_diagnostics(const Grid& grid, const Trajectory& traj,
                                                    const MaterialParams& params, const RegularizationParams& reg);

/// Per-frame time series, one row per saved frame.
[[nodiscard]] std::string diagnostics_csv(const DiagnosticsReport& report);
/// One row per test function.
[[nodiscard]] std::string weak_residual_csv(const DiagnosticsReport& report);

}  // namespace confsim
