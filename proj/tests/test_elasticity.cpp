#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "confsim/config.hpp"
#include "confsim/elasticity.hpp"

using namespace confsim;

namespace {

// u* = (x-1)(2-x) on (1,2) and its operator image.
double u_star(double x) { return (x - 1.0) * (2.0 - x); }
double calG_star(double x) {
    const double u1 = 3.0 - 2.0 * x;
    return -2.0 + 2.0 * u1 / x - 2.0 * u_star(x) / (x * x);
}

MaterialParams material(double lambda) {
    MaterialParams p = MaterialSpec{}.build();
    p.lambda = lambda;
    return p;
}

}  // namespace

TEST(Elasticity, HomogeneousSolutions) {
    const auto [u1, u2] = homogeneous_solutions(1.0, 2.0);
    EXPECT_EQ(u1.value(1.0), 0.0);
    EXPECT_EQ(u2.value(2.0), 0.0);
    for (double x : {1.1, 1.5, 1.9}) {
        EXPECT_LT(std::abs(radial_operator(x, u1.value(x), u1.derivative(x), u1.second_derivative(x))), 1e-10);
        EXPECT_LT(std::abs(radial_operator(x, u2.value(x), u2.derivative(x), u2.second_derivative(x))), 1e-10);
    }
}

TEST(Elasticity, EulerExponents) {
    // L[x^m] = (m^2 + m - 2) x^m vanishes for m = 1 and m = -2 only.
    for (double m : {1.0, -2.0, 2.0, 0.5}) {
        for (double x : {1.2, 1.7}) {
            const double v = std::pow(x, m);
            const double lhs = radial_operator(x, v, m * std::pow(x, m - 1), m * (m - 1) * std::pow(x, m - 2));
            EXPECT_NEAR(lhs, (m * m + m - 2) * v, 1e-12);
        }
    }
}

TEST(Elasticity, WronskianConstant) {
    const GreenKernel<double> G(1.0, 2.0);
    EXPECT_DOUBLE_EQ(G.normalization(), 21.0);
    for (int k = 0; k < 10; ++k) EXPECT_NEAR(G.p_wronskian(1.0 + 0.1 * k), 21.0, 1e-10);
}

TEST(Elasticity, GreenBasicProperties) {
    const GreenKernel<double> G(1.0, 2.0);
    EXPECT_EQ(G(1.0, 1.5), 0.0);
    EXPECT_EQ(G(2.0, 1.5), 0.0);
    EXPECT_LT(std::abs(G(1.3, 1.7) - G(1.7, 1.3)), 1e-12);
    EXPECT_THROW((void)G(0.9, 1.5), OutOfDomain);
    EXPECT_THROW((void)G(1.5, 2.1), OutOfDomain);
}

TEST(Elasticity, GreenJumpConverges) {
    const GreenKernel<double> G(1.0, 2.0);
    const double y = 1.5;
    double prev = 1.0;
    for (double delta : {1e-2, 5e-3, 2.5e-3}) {
        // Finite-difference derivatives on either side of the diagonal.
        const double e = 1e-7;
        const double right = (G(y + delta + e, y) - G(y + delta - e, y)) / (2 * e);
        const double left = (G(y - delta + e, y) - G(y - delta - e, y)) / (2 * e);
        const double err = std::abs(right - left - 1.0 / (y * y));
        EXPECT_LT(err, prev);
        prev = err;
    }
    EXPECT_NEAR(G.dx(y, y, true) - G.dx(y, y, false), 1.0 / (y * y), 1e-14);
}

TEST(Elasticity, GreenPropertyReport) {
    const GreenPropertyReport r = green_property_report(GreenKernel<double>(1.0, 2.0), 20);
    EXPECT_LT(r.symmetry, 1e-12);
    EXPECT_LT(r.boundary, 1e-14);
    EXPECT_LT(r.jump, 1e-6);
    EXPECT_LT(r.operator_residual, 1e-8);
    EXPECT_LT(r.wronskian_spread, 1e-10);
}

TEST(Elasticity, CalGPointwise) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1, 1);
    const MaterialParams p = material(0.3);
    Field Sx(7), b(7);
    for (int i = 0; i < 7; ++i) {
        Sx(i) = u(rng);
        b(i) = u(rng);
    }
    const Field g = compute_calG(Sx, b, p);
    for (int i = 0; i < 7; ++i) EXPECT_NEAR(g(i), p.lambda / p.mu * Sx(i) + b(i) / p.mu, 1e-15);
    EXPECT_EQ(norm_Linf(compute_calG(Field::Zero(7), Field::Zero(7), p)), 0.0);
    EXPECT_EQ(compute_calG(Sx, b, material(0.0)), b / p.mu);
}

TEST(Elasticity, DirectSolveBasics) {
    const Grid g(1.0, 2.0, 65);
    EXPECT_EQ(norm_Linf(solve_direct(g, g.zeros())), 0.0);
    const Field G1 = g.sample([](double x) { return std::sin(3 * x); });
    const Field G2 = g.sample([](double x) { return x * x; });
    const Field lhs = solve_direct(g, 2.0 * G1 - 0.7 * G2);
    const Field rhs = 2.0 * solve_direct(g, G1) - 0.7 * solve_direct(g, G2);
    EXPECT_LT(norm_Linf(lhs - rhs), 1e-10);
    const Field u = solve_direct(g, G1);
    EXPECT_EQ(u(0), 0.0);
    EXPECT_EQ(u(g.n() - 1), 0.0);
    EXPECT_LT(elasticity_residual(g, u, G1), 1e-12);
}

TEST(Elasticity, ManufacturedDirectRate) {
    std::vector<double> err;
    for (int n : {33, 65, 129, 257}) {
        const Grid g(1.0, 2.0, n);
        err.push_back(norm_Linf(solve_direct(g, g.sample(calG_star)) - g.sample(u_star)));
    }
    for (std::size_t k = 1; k < err.size(); ++k) EXPECT_NEAR(std::log2(err[k - 1] / err[k]), 2.0, 0.2);
}

TEST(Elasticity, ManufacturedGreenRate) {
    const MaterialParams p = material(0.0);
    std::vector<double> err;
    for (int n : {33, 65, 129, 257}) {
        const Grid g(1.0, 2.0, n);
        const Field b = p.mu * g.sample(calG_star);
        err.push_back(norm_Linf(solve_via_green(GreenKernel<double>(1.0, 2.0), g, g.zeros(), b, p) - g.sample(u_star)));
    }
    for (std::size_t k = 1; k < err.size(); ++k) EXPECT_GE(std::log2(err[k - 1] / err[k]), 1.8);
}

TEST(Elasticity, GreenZeroInput) {
    const Grid g(1.0, 2.0, 33);
    const Field u = solve_via_green(GreenKernel<double>(1.0, 2.0), g, g.zeros(), g.zeros(), material(0.2));
    EXPECT_EQ(norm_Linf(u), 0.0);
}

TEST(Elasticity, PathsAgree) {
    const Grid g(1.0, 2.0, 129);
    const MaterialParams p = material(0.2);
    const Field S = g.sample([](double x) { return std::sin(M_PI * (x - 1.0)) * (0.3 + x); });
    const Field b = g.sample([](double x) { return 1.0 - 0.5 * x * x; });
    const Field direct = solve_direct(g, compute_calG(d1(g, S), b, p));
    const Field green = solve_via_green(GreenKernel<double>(1.0, 2.0), g, S, b, p);
    EXPECT_LT(norm_Linf(direct - green), std::max(1e-6, 5 * g.h() * g.h()));
    EXPECT_EQ(green(0), 0.0);
    EXPECT_EQ(green(g.n() - 1), 0.0);
}

TEST(Elasticity, DiscreteEnergyIdentity) {
    // sum (x^2 u_x^2 + 2 u^2) h = -sum x^2 calG u h up to O(h^2).
    std::vector<double> gap;
    for (int n : {65, 129, 257}) {
        const Grid g(1.0, 2.0, n);
        const Field calG = g.sample([](double x) { return std::cos(2 * x) + x; });
        const Field u = solve_direct(g, calG);
        const Field ux = d1(g, u);
        const Field x = g.nodes();
        const Field w = g.trapezoid_weights();
        const double lhs = (w.array() * (x.array().square() * ux.array().square() + 2 * u.array().square())).sum();
        const double rhs = -(w.array() * x.array().square() * calG.array() * u.array()).sum();
        gap.push_back(std::abs(lhs - rhs));
    }
    EXPECT_GE(std::log2(gap[0] / gap[1]), 1.8);
    EXPECT_GE(std::log2(gap[1] / gap[2]), 1.8);
}
