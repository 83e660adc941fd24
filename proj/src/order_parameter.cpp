#include "confsim/order_parameter.hpp"

#include "confsim/tridiagonal.hpp"

namespace confsim {

double mollifier_profile(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    return std::exp(-1.0 / (4.0 * s * (1.0 - s)));
}

Eigen::VectorXd mollifier_weights(double kappa_m, double dt) {
    const auto m = static_cast<Eigen::Index>(std::floor(kappa_m / dt + 1e-9));
    Eigen::VectorXd w = Eigen::VectorXd::Zero(std::max<Eigen::Index>(m, 0) + 1);
    if (m >= 1) {
        const double scale = static_cast<double>(m);
        for (Eigen::Index j = 0; j <= m; ++j) w(j) = mollifier_profile(static_cast<double>(j) / scale);
    }
    const double total = w.sum();
    if (!(total > 0.0)) {
        w.setZero();
        w(0) = 1.0;
        return w;
    }
    return w / total;
}

MollifierState::MollifierState(double kappa_m, double dt) : weights_(mollifier_weights(kappa_m, dt)), width_(kappa_m) {}

void MollifierState::prime(const Field& initial) {
    history_.assign(window(), initial);
}

void MollifierState::push(Field frame) {
    history_.push_front(std::move(frame));
    while (history_.size() > window()) history_.pop_back();
}

Field mollify(const MollifierState& state) {
    const auto& hist = state.history();
    const auto& w = state.weights();
    if (hist.size() < state.window())
        throw InsufficientHistory("mollifier window needs " + std::to_string(state.window()) + " frames, have " +
                                  std::to_string(hist.size()));
    Field out = Field::Zero(hist.front().size());
    for (Eigen::Index j = 0; j < w.size(); ++j)
        if (w(j) != 0.0) out += w(j) * hist[static_cast<std::size_t>(j)];
    return out;
}

Field compute_calF(const Grid& grid, const Field& u, const Field& u_x, const Field& S, const Field& S_x,
                   const MaterialParams& params) {
    const int n = grid.n();
    Field F(n);
    for (int i = 0; i < n; ++i) {
        const double x = grid.x(i);
        const double f1 = params.c * (-params.lambda * (u_x(i) + 2.0 * u(i) / x) + params.e * S(i) +
                                      params.well_derivative(S(i)));
        F(i) = f1 - 2.0 * params.c * params.nu / x * S_x(i);
    }
    return F;
}

Field implicit_diffusion_step(const Grid& grid, const Field& S, const Field& coefficient, const Field& source,
                              double dt, double theta) {
    const int n = grid.n();
    const double h2 = grid.h() * grid.h();
    Tridiagonal<double> A(n);
    Field rhs(n);
    for (int i = 1; i < n - 1; ++i) {
        const double r = dt * coefficient(i) / h2;
        A.lower(i) = -theta * r;
        A.upper(i) = -theta * r;
        A.diag(i) = 1.0 + 2.0 * theta * r;
        const double lap = S(i + 1) - 2.0 * S(i) + S(i - 1);
        rhs(i) = S(i) + (1.0 - theta) * r * lap + dt * source(i);
    }
    A.pin(0);
    A.pin(n - 1);
    rhs(0) = 0.0;
    rhs(n - 1) = 0.0;
    Field out = solve_tridiagonal(A, rhs);
    out(0) = 0.0;
    out(n - 1) = 0.0;
    return out;
}

Field step(const Grid& grid, const Field& S, const Field& F, const MaterialParams& params,
           const RegularizationParams& reg, double t) {
    const Field S_x = d1(grid, S);
    const int n = grid.n();
    Field coefficient(n);
    Field source(n);
    for (int i = 0; i < n; ++i) {
        const double ak = abs_kappa(S_x(i), reg.kappa);
        coefficient(i) = params.c * params.nu * ak;
        source(i) = -F(i) * (ak - reg.kappa);
    }
    Field next = implicit_diffusion_step(grid, S, coefficient, source, reg.dt, reg.theta);
    const double increment = norm_Linf(next - S);
    if (!next.allFinite() || increment > reg.max_increment) throw StepRejected(t, increment, reg.max_increment);
    return next;
}

}  // namespace confsim
