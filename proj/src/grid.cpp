#include "confsim/grid.hpp"

#include <cmath>
#include <string>

namespace confsim {

Grid::Grid(double a, double d, int n) : a_(a), d_(d), n_(n), h_(0.0) {
    if (!(a > 0.0)) throw ValidationError("grid: a must be positive");
    if (!(a < d)) throw ValidationError("grid: a<d required");
    if (n < 3) throw ValidationError("grid: n must be at least 3");
    h_ = (d - a) / (n - 1);
}

Field Grid::nodes() const {
    return sample([](double x) { return x; });
}

Field Grid::trapezoid_weights() const {
    Field w = Field::Constant(n_, h_);
    w(0) *= 0.5;
    w(n_ - 1) *= 0.5;
    return w;
}

Trajectory Trajectory::truncated(double t_end) const {
    Trajectory out;
    for (std::size_t k = 0; k < times.size(); ++k)
        if (times[k] <= t_end + 1e-12) out.push(times[k], S[k], u[k]);
    return out;
}

Field d1(const Grid& grid, const Field& f) {
    const int n = grid.n();
    const double h = grid.h();
    Field out(n);
    for (int i = 1; i < n - 1; ++i) out(i) = (f(i + 1) - f(i - 1)) / (2.0 * h);
    out(0) = (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h);
    out(n - 1) = (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * h);
    return out;
}

Field d2(const Grid& grid, const Field& f) {
    const int n = grid.n();
    const double h2 = grid.h() * grid.h();
    Field out(n);
    for (int i = 1; i < n - 1; ++i) out(i) = (f(i + 1) - 2.0 * f(i) + f(i - 1)) / h2;
    if (n >= 4) {
        out(0) = (2.0 * f(0) - 5.0 * f(1) + 4.0 * f(2) - f(3)) / h2;
        out(n - 1) = (2.0 * f(n - 1) - 5.0 * f(n - 2) + 4.0 * f(n - 3) - f(n - 4)) / h2;
    } else {
        out(0) = out(1);
        out(n - 1) = out(n - 2);
    }
    return out;
}

Exponent Exponent::from_value(double p) {
    constexpr double tol = 1e-12;
    if (std::isinf(p) && p > 0) return infinity();
    for (double candidate : {1.0, 4.0 / 3.0, 2.0, 8.0 / 3.0})
        if (std::abs(p - candidate) < tol) return Exponent(candidate);
    throw UnsupportedExponent("unsupported Lebesgue exponent " + std::to_string(p));
}

double norm_L2(const Grid& grid, const Field& f) {
    return std::sqrt(grid.trapezoid_weights().dot(f.cwiseAbs2()));
}

double norm_Linf(const Field& f) { return f.size() == 0 ? 0.0 : f.cwiseAbs().maxCoeff(); }

double norm_Lq(const Grid& grid, const Field& f, Exponent q) {
    if (q.is_infinite()) return norm_Linf(f);
    const double p = q.value();
    return std::pow(grid.trapezoid_weights().dot(f.cwiseAbs().array().pow(p).matrix()), 1.0 / p);
}

double norm_Lp_time_Lq_space(const Grid& grid, const std::vector<double>& times, const std::vector<Field>& frames,
                             Exponent p, Exponent q) {
    if (frames.empty()) return 0.0;
    std::vector<double> spatial(frames.size());
    for (std::size_t k = 0; k < frames.size(); ++k) spatial[k] = norm_Lq(grid, frames[k], q);
    if (p.is_infinite()) {
        double m = 0.0;
        for (double v : spatial) m = std::max(m, v);
        return m;
    }
    const double e = p.value();
    if (frames.size() == 1) return spatial.front();
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < frames.size(); ++k)
        acc += 0.5 * (times[k + 1] - times[k]) * (std::pow(spatial[k], e) + std::pow(spatial[k + 1], e));
    return std::pow(acc, 1.0 / e);
}

double norm_Lp_time_Lq_space(const Grid& grid, const Trajectory& traj, Exponent p, Exponent q) {
    return norm_Lp_time_Lq_space(grid, traj.times, traj.S, p, q);
}

}  // namespace confsim
