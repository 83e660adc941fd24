#pragma once

#include <cmath>
#include <deque>
#include <limits>

#include "confsim/grid.hpp"
#include "confsim/material.hpp"

namespace confsim {

/// |p|_kappa = sqrt(kappa^2 + p^2).
template <typename Scalar>
[[nodiscard]] Scalar abs_kappa(Scalar p, Scalar kappa) {
    return std::hypot(kappa, p);
}

/// int_0^p |y|_kappa dy = 1/2 (p |p|_kappa + kappa^2 asinh(p / kappa)).
template <typename Scalar>
[[nodiscard]] Scalar primitive_abs_kappa(Scalar p, Scalar kappa) {
    if (kappa == Scalar(0)) return Scalar(0.5) * p * std::abs(p);
    return Scalar(0.5) * (p * abs_kappa(p, kappa) + kappa * kappa * std::asinh(p / kappa));
}

struct RegularizationParams {
    double kappa = 0.25;
    double kappa_m = 0.25;  // mollifier width
    double dt = 1e-4;
    double theta = 1.0;
    double dt_max = 1e-2;
    double max_increment = 0.05;  // L-infinity guard on a single step
};

/// Causal smoothing kernel chi on [0,1): exp(-1/(4s(1-s))), unit mass.  Its
/// first moment is 1/2 by symmetry about s = 1/2.
[[nodiscard]] double mollifier_profile(double s);

/// Discrete weights w_j for the frames S(t - j dt), j = 0..m, m = floor(kappa_m/dt).
/// Nonnegative and summing to one; a window narrower than two steps
/// degenerates to the identity on the newest frame.
[[nodiscard]] Eigen::VectorXd mollifier_weights(double kappa_m, double dt);

/// Ring buffer of past S frames together with the kernel weights.
class MollifierState {
public:
    MollifierState() = default;
    MollifierState(double kappa_m, double dt);

    /// Fills the whole window with copies of `initial` (history before t = 0).
    void prime(const Field& initial);
    /// Adds the newest frame, discarding the oldest once the window is full.
    void push(Field frame);

    [[nodiscard]] const Eigen::VectorXd& weights() const { return weights_; }
    [[nodiscard]] std::size_t window() const { return static_cast<std::size_t>(weights_.size()); }
    [[nodiscard]] const std::deque<Field>& history() const { return history_; }
    [[nodiscard]] double width() const { return width_; }

    /// Restores a buffer, newest frame first.
    void set_history(std::deque<Field> history) { history_ = std::move(history); }

private:
    Eigen::VectorXd weights_;
    std::deque<Field> history_;  // newest first
    double width_ = 0.0;
};

/// Weighted sum of buffered frames.  Throws InsufficientHistory if the buffer
/// is shorter than the kernel window.
[[nodiscard]] Field mollify(const MollifierState& state);

/// Configurational force calF = calF_1 - (2 c nu / x) S_x with
/// calF_1 = c(-lambda (u_x + 2u/x) + e S + psi'(S)).
[[nodiscard]] Field compute_calF(const Grid& grid, const Field& u, const Field& u_x, const Field& S, const Field& S_x,
                                 const MaterialParams& params);

/// One theta-step of S_t = a(x) S_xx + r(x) with S = 0 at both ends:
/// (I - theta dt a d2) S_new = S + dt ((1 - theta) a d2 S + r).
[[nodiscard]] Field implicit_diffusion_step(const Grid& grid, const Field& S, const Field& coefficient,
                                            const Field& source, double dt, double theta);

/// Semi-implicit step of S_t - c nu |S_x|_kappa S_xx = -F (|S_x|_kappa - kappa)
/// with the diffusion coefficient frozen at the current state.  Throws
/// StepRejected when the L-infinity increment exceeds reg.max_increment.
[[nodiscard]] Field step(const Grid& grid, const Field& S, const Field& F, const MaterialParams& params,
                         const RegularizationParams& reg, double t = 0.0);

}  // namespace confsim
