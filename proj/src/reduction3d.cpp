#include "confsim/reduction3d.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "confsim/errors.hpp"
#include "confsim/tridiagonal.hpp"

namespace confsim {

CubicSpline::CubicSpline(const Grid& grid, const Field& values) : a_(grid.a()), h_(grid.h()), y_(values) {
    const int n = grid.n();
    if (values.size() != n) throw MismatchedGrids("spline: value count does not match the grid");
    Tridiagonal<double> A(n);
    Field rhs = Field::Zero(n);
    A.pin(0);
    A.pin(n - 1);
    for (int i = 1; i < n - 1; ++i) {
        A.lower(i) = 1.0;
        A.diag(i) = 4.0;
        A.upper(i) = 1.0;
        rhs(i) = 6.0 * (y_(i + 1) - 2.0 * y_(i) + y_(i - 1)) / (h_ * h_);
    }
    m_ = solve_tridiagonal(A, rhs);
}

double CubicSpline::operator()(double x) const {
    const auto last = static_cast<int>(y_.size()) - 2;
    const int i = std::clamp(static_cast<int>(std::floor((x - a_) / h_)), 0, last);
    const double t = (x - a_) / h_ - i;
    const double s = 1.0 - t;
    const double h2 = h_ * h_;
    return s * y_(i) + t * y_(i + 1) + h2 / 6.0 * ((s * s * s - s) * m_(i) + (t * t * t - t) * m_(i + 1));
}

RadialLift RadialLift::from_frame(const Grid& grid, const Field& S, const Field& u, const Field& b,
                                  const MaterialParams& material) {
    RadialLift lift;
    lift.a = grid.a();
    lift.d = grid.d();
    lift.u = CubicSpline(grid, u);
    lift.S = CubicSpline(grid, S);
    lift.b = CubicSpline(grid, b);
    lift.material = material;
    return lift;
}

LiftedFields lift_fields(const RadialLift& lift, const Vector3& x) {
    const double r = x.norm();
    if (!(r > lift.a && r < lift.d)) throw OutOfDomain("lift: |x| = " + std::to_string(r) + " outside the shell");
    const Vector3 e = x / r;
    return {lift.u(r) * e, lift.S(r), lift.b(r) * e};
}

std::vector<Vector3> shell_points(double a, double d, int count, double margin, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> radius(a + margin, d - margin);
    std::vector<Vector3> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        Vector3 v(normal(rng), normal(rng), normal(rng));
        out.push_back(radius(rng) * v.normalized());
    }
    return out;
}

namespace {

Vector3 displacement(const RadialLift& lift, const Vector3& x) { return lift_fields(lift, x).u; }

// Cartesian gradient G(i, k) = d u_i / d x_k from central differences along
// the frame columns.
Eigen::Matrix3d gradient(const RadialLift& lift, const Vector3& x, double h, const Eigen::Matrix3d& frame) {
    Eigen::Matrix3d directional;
    for (int m = 0; m < 3; ++m)
        directional.col(m) =
            (displacement(lift, x + h * frame.col(m)) - displacement(lift, x - h * frame.col(m))) / (2.0 * h);
    return directional * frame.transpose();
}

Eigen::Matrix3d strain(const RadialLift& lift, const Vector3& x, double h, const Eigen::Matrix3d& frame) {
    const Eigen::Matrix3d G = gradient(lift, x, h, frame);
    return 0.5 * (G + G.transpose());
}

Eigen::Matrix3d stress(const RadialLift& lift, const Vector3& x, double h, const Eigen::Matrix3d& frame) {
    const Matrix3& eps_bar = lift.material.misfit;
    return lift.material.tensor.apply(strain(lift, x, h, frame) - eps_bar * lift.S(x.norm()));
}

double scalar_S(const RadialLift& lift, const Vector3& x) { return lift_fields(lift, x).S; }

}  // namespace

std::vector<double> elasticity_residuals_3d(const RadialLift& lift, const std::vector<Vector3>& points, double h3,
                                            const Eigen::Matrix3d& frame) {
    std::vector<double> out;
    out.reserve(points.size());
    for (const Vector3& x : points) {
        // (div T)_l = sum_k d_k T(k, l) = sum_m v_m . d_{v_m} T(., l)
        Vector3 div = Vector3::Zero();
        for (int m = 0; m < 3; ++m) {
            const Vector3 v = frame.col(m);
            const Eigen::Matrix3d dT = (stress(lift, x + h3 * v, h3, frame) - stress(lift, x - h3 * v, h3, frame)) /
                                       (2.0 * h3);
            div += dT.transpose() * v;
        }
        out.push_back((div - lift_fields(lift, x).b).norm());
    }
    return out;
}

double residual_elasticity_3d(const RadialLift& lift, const std::vector<Vector3>& points, double h3,
                              const Eigen::Matrix3d& frame) {
    const auto r = elasticity_residuals_3d(lift, points, h3, frame);
    return r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
}

std::vector<double> order_residuals_3d(const RadialLift& now, const RadialLift& next,
                                       const std::vector<Vector3>& points, double h3, double dt,
                                       const Eigen::Matrix3d& frame) {
    const MaterialParams& p = now.material;
    const Matrix3& eps_bar = p.misfit;
    std::vector<double> out;
    out.reserve(points.size());
    for (const Vector3& x : points) {
        const double S = scalar_S(now, x);
        const double S_t = (scalar_S(next, x) - S) / dt;
        Vector3 grad = Vector3::Zero();
        double lap = 0.0;
        for (int m = 0; m < 3; ++m) {
            const Vector3 v = frame.col(m);
            const double plus = scalar_S(now, x + h3 * v);
            const double minus = scalar_S(now, x - h3 * v);
            grad += (plus - minus) / (2.0 * h3) * v;
            lap += (plus - 2.0 * S + minus) / (h3 * h3);
        }
        const Matrix3 elastic = strain(now, x, h3, frame) - eps_bar * S;
        const double psi_S = -0.5 * (p.tensor.contract(elastic, eps_bar) + p.tensor.contract(eps_bar, elastic)) +
                             p.well_derivative(S);
        out.push_back(std::abs(S_t + p.c * (psi_S - p.nu * lap) * grad.norm()));
    }
    return out;
}

double residual_order_3d(const RadialLift& now, const RadialLift& next, const std::vector<Vector3>& points,
                         double h3, double dt, const Eigen::Matrix3d& frame) {
    const auto r = order_residuals_3d(now, next, points, h3, dt, frame);
    return r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
}

double identity_residual(const RadialLift& lift, const RadialProfile& du, const std::vector<Vector3>& points,
                         double h3, const Eigen::Matrix3d& frame) {
    double worst = 0.0;
    for (const Vector3& x : points) {
        const double r = x.norm();
        const double lhs = lift.material.tensor.contract(strain(lift, x, h3, frame), lift.material.misfit);
        const double rhs = lift.material.lambda * (du(r) + 2.0 * lift.u(r) / r);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

}  // namespace confsim
