#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "confsim/config.hpp"
#include "confsim/elasticity.hpp"
#include "confsim/reduction3d.hpp"
#include "confsim/run_io.hpp"
#include "confsim/simulator.hpp"
#include "confsim/study.hpp"

namespace fs = std::filesystem;
using namespace confsim;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kNumerical = 2;

struct RunOptions {
    std::string config;
    std::string out;
    std::vector<std::string> overrides;
    long checkpoint_step = -1;
    std::string resume;
};

struct StudyOptions {
    std::string config;
    std::string out = ".";
    std::vector<std::string> overrides;
};

struct GreenOptions {
    double a = 1.0;
    double d = 2.0;
    int n = 129;
    int samples = 20;
    int pairs = 10;
};

struct ReductionOptions {
    std::string run;
    int samples = 50;
    double h3 = 1e-2;
    unsigned long long seed = 7;
};

struct MmsOptions {
    std::string family = "all";
    int levels = 4;
};

void print_row(const std::string& name, double value, const std::string& extra = "") {
    std::printf("  %-28s %-24.10g %s\n", name.c_str(), value, extra.c_str());
}

int cmd_run(const RunOptions& opt) {
    const SimulationConfig config = parse_simulation_config(read_text_file(opt.config), opt.overrides);
    config.validate();

    std::unique_ptr<Simulator> sim;
    if (opt.resume.empty()) {
        sim = std::make_unique<Simulator>(config);
    } else {
        sim = std::make_unique<Simulator>(config, load_snapshot(opt.resume));
        if (fs::exists(fs::path(opt.out) / "frames" / "index.csv")) {
            const PersistedRun earlier = read_run(opt.out);
            Trajectory kept;
            const double t0 = sim->time() - 0.5 * config.effective_dt();
            for (std::size_t k = 0; k < earlier.trajectory.size(); ++k)
                if (earlier.trajectory.times[k] < t0)
                    kept.push(earlier.trajectory.times[k], earlier.trajectory.S[k], earlier.trajectory.u[k]);
            sim->restore_frames(std::move(kept));
        }
    }

    if (opt.checkpoint_step >= 0 && opt.checkpoint_step > sim->step_index()) {
        sim->advance(opt.checkpoint_step);
        if (!sim->finished()) {
            fs::create_directories(opt.out);
            const fs::path path = fs::path(opt.out) / ("checkpoint_" + std::to_string(sim->step_index()) + ".snap");
            save_snapshot(sim->snapshot(), path.string());
            std::printf("checkpoint written: %s\n", path.string().c_str());
        }
    }
    sim->run_to_end();
    const RunResult result = sim->result();
    write_run(opt.out, config, result);

    std::printf("run %s  hash %s\n", opt.out.c_str(), config_hash(config).c_str());
    print_row("steps", static_cast<double>(sim->step_index()));
    print_row("saved frames", static_cast<double>(result.trajectory.size()));
    print_row("max principle margin", result.diagnostics.max_principle.margin,
              result.diagnostics.max_principle.pass ? "pass" : "FAIL");
    print_row("sup ||S_x||^2", result.diagnostics.energy.sup_energy);
    print_row("weak residual max", result.diagnostics.weak_residual_max());
    if (!result.elasticity_discrepancy.empty()) {
        double worst = 0.0;
        for (double v : result.elasticity_discrepancy) worst = std::max(worst, v);
        print_row("direct vs green (max)", worst);
    }
    if (!result.status.completed) {
        std::fprintf(stderr, "step rejected: %s\n", result.status.message.c_str());
        return kNumerical;
    }
    return kOk;
}

int cmd_study(const StudyOptions& opt) {
    const StudyConfig study = parse_study_config(read_text_file(opt.config), opt.overrides);
    study.validate();
    const KappaStudy result = kappa_study(study);

    fs::create_directories(opt.out);
    std::ofstream(fs::path(opt.out) / "study.csv") << study_csv(result);
    std::string meta = "# kappa study; refine_h and refine_dt set the (h, dt) coupling per level\n";
    for (std::size_t i = 0; i < result.configs.size(); ++i)
        meta += "# member " + std::to_string(i) + " config_hash = " + config_hash(result.configs[i]) + "\n";
    meta += echo(study);
    std::ofstream(fs::path(opt.out) / "study_meta.txt") << meta;

    std::printf("%-12s %-12s %-12s %-14s %-14s %-12s %-12s %-12s\n", "kappa", "h", "dt", "D_kappa", "D_primitive",
                "margin", "sup_energy", "weak_res");
    for (const auto& r : result.rows)
        std::printf("%-12.6g %-12.6g %-12.6g %-14.6e %-14.6e %-12.3e %-12.6g %-12.3e\n", r.kappa, r.h, r.dt,
                    r.distance.flux, r.distance.primitive, r.max_principle_margin, r.sup_energy,
                    r.weak_residual_max);
    std::printf("D strictly decreasing: %s\n", result.strictly_decreasing ? "yes" : "no");
    for (const auto& r : result.runs)
        if (!r.status.completed) return kNumerical;
    return kOk;
}

int cmd_verify_green(const GreenOptions& opt) {
    const GreenKernel<double> kernel(opt.a, opt.d);
    const GreenPropertyReport rep = green_property_report(kernel, opt.samples);
    bool ok = true;
    auto row = [&](const char* name, double value, double tol) {
        const bool pass = value < tol;
        ok = ok && pass;
        std::printf("  %-26s %-14.6e < %-10.1e %s\n", name, value, tol, pass ? "pass" : "FAIL");
    };
    std::printf("green kernel on [%g, %g], %d samples\n", opt.a, opt.d, opt.samples);
    row("symmetry", rep.symmetry, 1e-12);
    row("boundary vanishing", rep.boundary, 1e-14);
    row("derivative jump - 1/y^2", rep.jump, 1e-6);
    row("L[G] off-diagonal", rep.operator_residual, 1e-8);
    row("p W spread", rep.wronskian_spread, 1e-10);

    const Grid grid(opt.a, opt.d, opt.n);
    const MaterialParams params = MaterialSpec{}.build();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < opt.pairs; ++k) {
        const double s1 = coef(rng), s2 = coef(rng), b0 = coef(rng), b1 = coef(rng);
        const Field S = grid.sample([&](double x) {
            const double xi = (x - opt.a) / (opt.d - opt.a);
            return s1 * std::sin(std::numbers::pi * xi) + s2 * std::sin(2.0 * std::numbers::pi * xi);
        });
        const Field b = grid.sample([&](double x) { return b0 + b1 * x; });
        const Field direct = solve_direct(grid, compute_calG(d1(grid, S), b, params));
        const Field green = solve_via_green(kernel, grid, S, b, params);
        worst = std::max(worst, norm_Linf(direct - green));
    }
    row("direct vs green (Linf)", worst, std::max(1e-6, 5.0 * grid.h() * grid.h()));
    return ok ? kOk : kNumerical;
}

int cmd_check_reduction(const ReductionOptions& opt) {
    const PersistedRun run = read_run(opt.run);
    if (run.trajectory.size() < 2) throw ValidationError("check-reduction needs at least two saved frames");
    const Grid grid = run.config.grid();
    const MaterialParams material = run.config.material.build();
    const std::size_t last = run.trajectory.size() - 1;
    const Trajectory& tr = run.trajectory;
    auto lift_at = [&](std::size_t k) {
        return RadialLift::from_frame(grid, tr.S[k], tr.u[k], run.config.body.sample(grid, tr.times[k]), material);
    };
    const RadialLift now = lift_at(last - 1);
    const RadialLift next = lift_at(last);
    const auto points = shell_points(grid.a(), grid.d(), opt.samples, 3.0 * opt.h3, opt.seed);
    const double dt = tr.times[last] - tr.times[last - 1];

    std::printf("reduction residuals, %d shell points, h3 = %g\n", opt.samples, opt.h3);
    std::printf("  %-14s %-14s %-16s %-16s\n", "t", "dt", "elasticity", "order");
    std::printf("  %-14.8g %-14.8g %-16.6e %-16.6e\n", tr.times[last - 1], dt,
                residual_elasticity_3d(now, points, opt.h3), residual_order_3d(now, next, points, opt.h3, dt));
    return kOk;
}

int cmd_mms(const MmsOptions& opt) {
    std::vector<MmsFamily> families;
    if (opt.family == "all")
        families = {MmsFamily::elasticity_direct, MmsFamily::elasticity_green, MmsFamily::parabolic_space,
                    MmsFamily::parabolic_time, MmsFamily::parabolic_exact};
    else
        families = {mms_family_from(opt.family)};
    for (const MmsFamily f : families) {
        const MmsResult r = mms_convergence(f, opt.levels);
        std::printf("%s\n", to_string(f).c_str());
        for (std::size_t i = 0; i < r.steps.size(); ++i) std::printf("  step %-12.6g error %.6e\n", r.steps[i], r.errors[i]);
        if (r.machine_precision)
            std::printf("  errors at machine precision, order undefined\n");
        else
            std::printf("  observed order %.3f\n", r.order);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"confsim: radial phase-field simulator for martensitic transformations"};
    app.require_subcommand(1);

    RunOptions run_opt;
    auto* run_cmd = app.add_subcommand("run", "simulate one configuration");
    run_cmd->add_option("--config", run_opt.config, "config file")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--out", run_opt.out, "output directory")->required();
    run_cmd->add_option("--set", run_opt.overrides, "key=value override (repeatable)");
    run_cmd->add_option("--checkpoint-step", run_opt.checkpoint_step, "write a snapshot at this step");
    run_cmd->add_option("--resume", run_opt.resume, "continue from a snapshot file")->check(CLI::ExistingFile);

    StudyOptions study_opt;
    auto* study_cmd = app.add_subcommand("study", "kappa study over a sequence of regularizations");
    study_cmd->add_option("--config", study_opt.config, "study config file")->required()->check(CLI::ExistingFile);
    study_cmd->add_option("--out", study_opt.out, "output directory");
    study_cmd->add_option("--set", study_opt.overrides, "key=value override (repeatable)");

    GreenOptions green_opt;
    auto* green_cmd = app.add_subcommand("verify-green", "Green function property report");
    green_cmd->add_option("--a", green_opt.a, "inner radius");
    green_cmd->add_option("--d", green_opt.d, "outer radius");
    green_cmd->add_option("--n", green_opt.n, "grid nodes for the cross-check");
    green_cmd->add_option("--samples", green_opt.samples, "random (x, y) pairs");
    green_cmd->add_option("--pairs", green_opt.pairs, "random (S, b) pairs for the cross-check");

    ReductionOptions red_opt;
    auto* red_cmd = app.add_subcommand("check-reduction", "3D residuals of a lifted radial run");
    red_cmd->add_option("--run", red_opt.run, "run output directory")->required()->check(CLI::ExistingDirectory);
    red_cmd->add_option("--samples", red_opt.samples, "random shell points");
    red_cmd->add_option("--h3", red_opt.h3, "finite-difference step in 3D");
    red_cmd->add_option("--seed", red_opt.seed, "sample seed");

    MmsOptions mms_opt;
    auto* mms_cmd = app.add_subcommand("mms", "manufactured-solution convergence orders");
    mms_cmd->add_option("--family", mms_opt.family,
                        "all | elasticity-direct | elasticity-green | parabolic-space | parabolic-time | parabolic-exact");
    mms_cmd->add_option("--levels", mms_opt.levels, "refinement levels")->check(CLI::Range(2, 8));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        if (*run_cmd) return cmd_run(run_opt);
        if (*study_cmd) return cmd_study(study_opt);
        if (*green_cmd) return cmd_verify_green(green_opt);
        if (*red_cmd) return cmd_check_reduction(red_opt);
        if (*mms_cmd) return cmd_mms(mms_opt);
    } catch (const StepRejected& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const SingularSystem& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const InsufficientHistory& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const ParseError& e) {
        std::cerr << "config error at line " << e.line() << ", column " << e.column() << ": " << e.what() << "\n";
        return kInvalid;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    }
    return kInvalid;
}
