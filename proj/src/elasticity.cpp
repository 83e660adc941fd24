#include "confsim/elasticity.hpp"

#include <cmath>
#include <random>

namespace confsim {

Field compute_calG(const Field& S_x, const Field& b, const MaterialParams& params) {
    return (params.lambda / params.mu) * S_x + b / params.mu;
}

Tridiagonal<double> elasticity_matrix(const Grid& grid) {
    const int n = grid.n();
    const double h = grid.h();
    Tridiagonal<double> A(n);
    for (int i = 1; i < n - 1; ++i) {
        const double x_minus = grid.x(i) - 0.5 * h;
        const double x_plus = grid.x(i) + 0.5 * h;
        const double p_minus = x_minus * x_minus;
        const double p_plus = x_plus * x_plus;
        A.lower(i) = p_minus;
        A.upper(i) = p_plus;
        A.diag(i) = -(p_minus + p_plus) - 2.0 * h * h;
    }
    A.pin(0);
    A.pin(n - 1);
    return A;
}

namespace {

Field scaled_rhs(const Grid& grid, const Field& calG) {
    const int n = grid.n();
    const double h2 = grid.h() * grid.h();
    Field rhs(n);
    for (int i = 0; i < n; ++i) rhs(i) = h2 * grid.x(i) * grid.x(i) * calG(i);
    rhs(0) = 0.0;
    rhs(n - 1) = 0.0;
    return rhs;
}

}  // namespace

Field solve_direct(const Grid& grid, const Field& calG) {
    Field u = solve_tridiagonal(elasticity_matrix(grid), scaled_rhs(grid, calG));
    u(0) = 0.0;
    u(grid.n() - 1) = 0.0;
    return u;
}

double elasticity_residual(const Grid& grid, const Field& u, const Field& calG) {
    const Field r = elasticity_matrix(grid).multiply(u) - scaled_rhs(grid, calG);
    return norm_Linf(r);
}

Field solve_via_green(const GreenKernel<double>& kernel, const Grid& grid, const Field& S_moll, const Field& b,
                      const MaterialParams& params) {
    // G(x,y) = u1(min) u2(max) / C separates, so both halves of the split
    // quadrature are cumulative trapezoidal sums of
    //   g(y) = v(y) y^2 b / mu - (lambda/mu) (2 v(y) y + v'(y) y^2) S(y)
    // with v = u1 on [a, x] and v = u2 on [x, d].
    const int n = grid.n();
    const double h = grid.h();
    const double inv_mu = 1.0 / params.mu;
    const double ratio = params.lambda / params.mu;
    const auto& u1 = kernel.left();
    const auto& u2 = kernel.right();

    Field g1(n);
    Field g2(n);
    for (int j = 0; j < n; ++j) {
        const double y = grid.x(j);
        const double y2 = y * y;
        g1(j) = u1.value(y) * y2 * b(j) * inv_mu - ratio * (2.0 * u1.value(y) * y + u1.derivative(y) * y2) * S_moll(j);
        g2(j) = u2.value(y) * y2 * b(j) * inv_mu - ratio * (2.0 * u2.value(y) * y + u2.derivative(y) * y2) * S_moll(j);
    }

    Field left_integral(n);   // int_a^{x_i} g1
    Field right_integral(n);  // int_{x_i}^d g2
    left_integral(0) = 0.0;
    for (int i = 1; i < n; ++i) left_integral(i) = left_integral(i - 1) + 0.5 * h * (g1(i - 1) + g1(i));
    right_integral(n - 1) = 0.0;
    for (int i = n - 2; i >= 0; --i) right_integral(i) = right_integral(i + 1) + 0.5 * h * (g2(i) + g2(i + 1));

    Field u(n);
    const double C = kernel.normalization();
    for (int i = 0; i < n; ++i) {
        const double x = grid.x(i);
        u(i) = (u2.value(x) * left_integral(i) + u1.value(x) * right_integral(i)) / C;
    }
    u(0) = 0.0;
    u(n - 1) = 0.0;
    return u;
}

GreenPropertyReport green_property_report(const GreenKernel<double>& kernel, int samples, unsigned long long seed) {
    const double a = kernel.a();
    const double d = kernel.d();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> inner(a + 0.05 * (d - a), d - 0.05 * (d - a));
    GreenPropertyReport r;
    r.samples = samples;
    const double pw = kernel.p_wronskian(a);
    for (int k = 0; k < samples; ++k) {
        const double x = inner(rng);
        const double y = inner(rng);
        r.symmetry = std::max(r.symmetry, std::abs(kernel(x, y) - kernel(y, x)));
        r.boundary = std::max({r.boundary, std::abs(kernel(a, y)), std::abs(kernel(d, y))});
        if (std::abs(x - y) > 1e-3)
            r.operator_residual = std::max(
                r.operator_residual, std::abs(radial_operator(x, kernel(x, y), kernel.dx(x, y), kernel.dxx(x, y))));
        r.wronskian_spread = std::max(r.wronskian_spread, std::abs(kernel.p_wronskian(x) - pw));

        const double delta = 1e-4;
        auto jump = [&](double h) { return kernel.dx(y + h, y) - kernel.dx(y - h, y); };
        const double extrapolated = 2.0 * jump(0.5 * delta) - jump(delta);
        r.jump = std::max(r.jump, std::abs(extrapolated - 1.0 / (y * y)));
    }
    return r;
}

}  // namespace confsim
