#include <gtest/gtest.h>

#include <filesystem>

#include "confsim/run_io.hpp"
#include "confsim/simulator.hpp"

using namespace confsim;

namespace {

SimulationConfig small() {
    SimulationConfig c;
    c.n = 65;
    c.T_e = 0.005;
    c.dt = 1e-4;
    return c;
}

bool same(const Trajectory& a, const Trajectory& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a.times[k] != b.times[k] || a.S[k] != b.S[k] || a.u[k] != b.u[k]) return false;
    return true;
}

}  // namespace

TEST(Simulator, RestStateIsFixedPoint) {
    SimulationConfig c = small();
    c.initial.amplitude = 0.0;
    const RunResult r = run(c);
    ASSERT_TRUE(r.status.completed);
    for (std::size_t k = 0; k < r.trajectory.size(); ++k) {
        EXPECT_EQ(norm_Linf(r.trajectory.S[k]), 0.0);
        EXPECT_EQ(norm_Linf(r.trajectory.u[k]), 0.0);
    }
}

TEST(Simulator, FramesAndTimes) {
    SimulationConfig c = small();
    c.save_every = 7;
    const RunResult r = run(c);
    const long N = c.steps();
    EXPECT_EQ(r.trajectory.times.front(), 0.0);
    EXPECT_NEAR(r.trajectory.times.back(), c.T_e, 1e-15);
    EXPECT_EQ(r.trajectory.size(), static_cast<std::size_t>(N / 7 + 1 + (N % 7 != 0)));
    for (std::size_t k = 0; k < r.trajectory.size(); ++k) {
        EXPECT_EQ(r.trajectory.S[k](0), 0.0);
        EXPECT_EQ(r.trajectory.S[k](c.n - 1), 0.0);
        EXPECT_EQ(r.trajectory.u[k](0), 0.0);
        EXPECT_EQ(r.trajectory.u[k](c.n - 1), 0.0);
    }
    EXPECT_EQ(r.diagnostics.times.size(), r.trajectory.size());
}

TEST(Simulator, DecouplesWhenLambdaVanishes) {
    SimulationConfig c = small();
    c.material.misfit = {0, 0, 0, 0, 0, 0};
    c.body.family = BodyFamily::polynomial;
    c.body.coeffs = {0.5, -0.25};
    const RunResult r = run(c);
    const Grid g = c.grid();
    const MaterialParams p = c.material.build();
    ASSERT_EQ(p.lambda, 0.0);
    for (std::size_t k = 0; k < r.trajectory.size(); ++k) {
        const Field b_only = solve_direct(g, compute_calG(g.zeros(), c.body.sample(g, r.trajectory.times[k]), p));
        EXPECT_LT(norm_Linf(r.trajectory.u[k] - b_only), 1e-12);
    }
}

TEST(Simulator, SavedDisplacementsSolveElasticity) {
    SimulationConfig c = small();
    c.body.family = BodyFamily::constant;
    c.body.value = 0.3;
    Simulator sim(c);
    sim.run_to_end();
    const Grid g = c.grid();
    const MaterialParams p = c.material.build();
    // Rebuild the mollified field from the stored S frames (save_every = 1).
    const Trajectory& tr = sim.trajectory();
    MollifierState m(sim.regularization().kappa_m, c.effective_dt());
    m.prime(tr.S[0]);
    for (std::size_t k = 0; k < tr.size(); ++k) {
        m.push(tr.S[k]);
        const Field calG = compute_calG(d1(g, mollify(m)), c.body.sample(g, tr.times[k]), p);
        EXPECT_LT(elasticity_residual(g, tr.u[k], calG), 1e-10);
    }
}

TEST(Simulator, Deterministic) {
    const RunResult a = run(small());
    const RunResult b = run(small());
    EXPECT_TRUE(same(a.trajectory, b.trajectory));
}

TEST(Simulator, SplitRunMatchesWholeRun) {
    SimulationConfig c = small();
    c.n = 129;
    c.T_e = 0.01;
    const RunResult whole = run(c);

    Simulator first(c);
    first.advance(37);
    const std::string text = serialize(first.snapshot());
    Simulator second(c, deserialize_snapshot(text));
    second.restore_frames(first.trajectory());
    second.run_to_end();
    EXPECT_TRUE(same(second.trajectory(), whole.trajectory));
}

TEST(Simulator, SnapshotRoundTripAndCorruption) {
    Simulator sim(small());
    sim.advance(10);
    const Snapshot snap = sim.snapshot();
    const std::string text = serialize(snap);
    const Snapshot back = deserialize_snapshot(text);
    EXPECT_EQ(back.step, snap.step);
    EXPECT_EQ(back.S, snap.S);
    EXPECT_EQ(back.config_hash, snap.config_hash);
    ASSERT_EQ(back.history.size(), snap.history.size());
    for (std::size_t k = 0; k < snap.history.size(); ++k) EXPECT_EQ(back.history[k], snap.history[k]);

    std::string bad = text;
    bad[text.find("step") + 5] ^= 1;
    EXPECT_THROW((void)deserialize_snapshot(bad), ChecksumMismatch);

    std::string old = text.substr(0, text.rfind("checksum "));
    old.replace(old.find(" 1\n"), 3, " 9\n");
    EXPECT_THROW((void)deserialize_snapshot(old + "checksum " + fnv1a_hex(old) + "\n"), VersionMismatch);
}

TEST(Simulator, SnapshotForOtherConfigRejected) {
    Simulator sim(small());
    sim.advance(3);
    SimulationConfig other = small();
    other.kappa = 0.125;
    EXPECT_THROW(Simulator(other, sim.snapshot()), ValidationError);
}

TEST(Simulator, StepRejectionIsReported) {
    SimulationConfig c = small();
    c.max_increment = 1e-6;
    const RunResult r = run(c);
    EXPECT_FALSE(r.status.completed);
    ASSERT_TRUE(r.status.rejected_at.has_value());
    EXPECT_EQ(*r.status.rejected_at, 0.0);
    EXPECT_EQ(r.trajectory.size(), 1u);
}

TEST(Simulator, BothVerifyRecordsDiscrepancy) {
    SimulationConfig c = small();
    c.elasticity_path = ElasticityPath::both_verify;
    const RunResult r = run(c);
    ASSERT_EQ(r.elasticity_discrepancy.size(), r.trajectory.size());
    for (double v : r.elasticity_discrepancy) EXPECT_LT(v, std::max(1e-6, 5 * c.grid().h() * c.grid().h()));
    SimulationConfig direct = c;
    direct.elasticity_path = ElasticityPath::direct;
    EXPECT_TRUE(same(run(direct).trajectory, r.trajectory));
}

TEST(Simulator, GreenPathRuns) {
    SimulationConfig c = small();
    c.elasticity_path = ElasticityPath::green;
    const RunResult r = run(c);
    EXPECT_TRUE(r.status.completed);
    EXPECT_TRUE(r.diagnostics.all_finite());
}

TEST(RunIo, PersistedRunReproducesDiagnostics) {
    const SimulationConfig c = small();
    const RunResult r = run(c);
    const auto dir = std::filesystem::temp_directory_path() / "confsim_test_runio";
    std::filesystem::remove_all(dir);
    write_run(dir.string(), c, r);
    const PersistedRun back = read_run(dir.string());
    EXPECT_EQ(back.config, c);
    EXPECT_EQ(back.config_hash, config_hash(c));
    EXPECT_TRUE(same(back.trajectory, r.trajectory));
    const DiagnosticsReport again =
        compute_diagnostics(c.grid(), back.trajectory, c.material.build(), c.regularization());
    EXPECT_EQ(diagnostics_csv(again), read_text_file((dir / "diagnostics.csv").string()));
    std::filesystem::remove_all(dir);
}
