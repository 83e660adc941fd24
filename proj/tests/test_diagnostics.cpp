#include <gtest/gtest.h>

#include <cmath>

#include "confsim/diagnostics.hpp"
#include "confsim/simulator.hpp"

using namespace confsim;

namespace {

SimulationConfig base() {
    SimulationConfig c;
    c.n = 65;
    c.T_e = 0.01;
    return c;
}

}  // namespace

TEST(Diagnostics, ZeroRunIsAllZero) {
    SimulationConfig c = base();
    c.initial.amplitude = 0.0;
    const RunResult r = run(c);
    const DiagnosticsReport& d = r.diagnostics;
    EXPECT_EQ(d.max_principle.margin, 0.0);
    EXPECT_TRUE(d.max_principle.pass);
    for (double v : d.sx_squared) EXPECT_EQ(v, 0.0);
    for (double v : d.dissipation) EXPECT_EQ(v, 0.0);
    EXPECT_EQ(d.norms.st_l43.back(), 0.0);
    EXPECT_EQ(d.norms.sx_l83_linf.back(), 0.0);
    EXPECT_EQ(d.norms.flux_div_l43.back(), 0.0);
    EXPECT_EQ(d.norms.primitive_w143.back(), 0.0);
    EXPECT_EQ(d.dual_proxy.back(), 0.0);
    for (double v : d.weak_residuals) EXPECT_LT(std::abs(v), 1e-12);
}

TEST(Diagnostics, DiffusionOnlyRunKeepsMaximum) {
    SimulationConfig c = base();
    c.material.misfit = {0, 0, 0, 0, 0, 0};
    c.material.well_weight = 1e-300;
    c.material.nu = 1.0;
    const RunResult r = run(c);
    EXPECT_TRUE(r.diagnostics.max_principle.pass);
    EXPECT_LE(r.diagnostics.max_principle.margin, 1e-12);
}

TEST(Diagnostics, MaxPrincipleNegativeControl) {
    const Grid g(1.0, 2.0, 9);
    Trajectory tr;
    tr.push(0.0, g.sample([](double x) { return (x - 1) * (2 - x); }), g.zeros());
    tr.push(1.0, 2.0 * g.sample([](double x) { return (x - 1) * (2 - x); }), g.zeros());
    const MaxPrincipleResult r = max_principle_check(tr);
    EXPECT_FALSE(r.pass);
    EXPECT_NEAR(r.margin, 0.25, 1e-15);
}

TEST(Diagnostics, DissipationNondecreasingAndFinite) {
    const RunResult r = run(base());
    const auto& dis = r.diagnostics.dissipation;
    for (std::size_t k = 1; k < dis.size(); ++k) EXPECT_GE(dis[k], dis[k - 1]);
    EXPECT_TRUE(r.diagnostics.all_finite());
    EXPECT_TRUE(r.diagnostics.norms.all_finite());
    EXPECT_TRUE(r.diagnostics.energy.bound_holds);
    EXPECT_EQ(r.diagnostics.sx_squared.size(), r.trajectory.size());
}

TEST(Diagnostics, NormsMonotoneUnderTruncation) {
    const SimulationConfig c = base();
    const RunResult r = run(c);
    const Trajectory half = r.trajectory.truncated(0.5 * c.T_e);
    const AprioriNorms full = apriori_norms(c.grid(), r.trajectory, c.regularization());
    const AprioriNorms part = apriori_norms(c.grid(), half, c.regularization());
    EXPECT_LE(part.st_l43.back(), full.st_l43.back());
    EXPECT_LE(part.sx_l83_linf.back(), full.sx_l83_linf.back());
    EXPECT_LE(part.flux_div_l43.back(), full.flux_div_l43.back());
    EXPECT_LE(part.primitive_w143.back(), full.primitive_w143.back());
    for (std::size_t k = 1; k < full.st_l43.size(); ++k) EXPECT_GE(full.st_l43[k], full.st_l43[k - 1]);
}

TEST(Diagnostics, SxLinfNormOracle) {
    // S = t x (x-1)(2-x): check ||S_x||_{L^{8/3}(0,T;L^inf)} on a coarse trajectory by hand.
    const Grid g(1.0, 2.0, 11);
    Trajectory tr;
    std::vector<double> sup;
    for (int k = 0; k <= 4; ++k) {
        const double t = 0.25 * k;
        const Field S = g.sample([t](double x) { return t * (x - 1) * (2 - x); });
        tr.push(t, S, g.zeros());
        sup.push_back(d1(g, S).cwiseAbs().maxCoeff());
    }
    double integral = 0.0;
    for (int k = 1; k <= 4; ++k) integral += 0.125 * (std::pow(sup[k - 1], 8.0 / 3.0) + std::pow(sup[k], 8.0 / 3.0));
    RegularizationParams reg;
    EXPECT_NEAR(apriori_norms(g, tr, reg).sx_l83_linf.back(), std::pow(integral, 3.0 / 8.0), 1e-14);
}

TEST(Diagnostics, WeakResidualZeroTestFunction) {
    const SimulationConfig c = base();
    const RunResult r = run(c);
    TestFunction zero;
    zero.amplitude = 0.0;
    const auto res = weak_residual(c.grid(), r.trajectory, c.material.build(), {zero});
    ASSERT_EQ(res.size(), 1u);
    EXPECT_EQ(res[0], 0.0);
    EXPECT_EQ(default_test_set().size(), 5u);
}

TEST(Diagnostics, WeakResidualSmallOnDefaultRun) {
    const RunResult r = run(base());
    EXPECT_LT(r.diagnostics.weak_residual_max(), 1e-3);
}

TEST(Diagnostics, TestFunctionsVanishAtFinalTime) {
    for (const auto& tf : default_test_set()) {
        EXPECT_NEAR(tf.time_factor(1.0), 0.0, 1e-15);
        EXPECT_EQ(tf.time_factor(0.0), 1.0);
        const double h = 1e-6;
        EXPECT_NEAR(tf.time_factor_derivative(0.4), (tf.time_factor(0.4 + h) - tf.time_factor(0.4 - h)) / (2 * h),
                    1e-8);
    }
}

TEST(Diagnostics, DualBasisAndProxy) {
    const Grid g(1.0, 2.0, 65);
    const auto basis = default_dual_basis(g);
    EXPECT_EQ(basis.size(), 4u);
    for (const Field& phi : basis) {
        EXPECT_EQ(phi(0), 0.0);
        EXPECT_NEAR(phi(g.n() - 1), 0.0, 1e-15);
    }
    const RunResult r = run(base());
    EXPECT_EQ(dual_norm_estimate(g, r.trajectory, {g.zeros()}), 0.0);
    EXPECT_GT(dual_norm_estimate(g, r.trajectory, basis), 0.0);
    const auto series = dual_norm_series(g, r.trajectory, basis);
    for (std::size_t k = 1; k < series.size(); ++k) EXPECT_GE(series[k], series[k - 1]);
}

TEST(Diagnostics, CsvShape) {
    const RunResult r = run(base());
    const std::string csv = diagnostics_csv(r.diagnostics);
    EXPECT_EQ(csv.rfind("t,max_abs_S,", 0), 0u);
    EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), r.trajectory.size() + 1);
    const std::string weak = weak_residual_csv(r.diagnostics);
    EXPECT_EQ(std::count(weak.begin(), weak.end(), '\n'), 6);
}
