#include "confsim/study.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <thread>

#include "confsim/elasticity.hpp"

namespace confsim {

unsigned study_threads() {
    if (const char* env = std::getenv("CONFSIM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<RunResult> run_all(const std::vector<SimulationConfig>& configs) {
    std::vector<RunResult> results(configs.size());
    std::vector<std::exception_ptr> errors(configs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            try {
                results[i] = run(configs[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned count = std::min<unsigned>(study_threads(), static_cast<unsigned>(configs.size()));
    if (count <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned k = 0; k < count; ++k) pool.emplace_back(worker);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

Trajectory restrict_to(const Grid& fine_grid, const Trajectory& fine, const Grid& coarse_grid,
                       const Trajectory& coarse) {
    if (fine_grid.a() != coarse_grid.a() || fine_grid.d() != coarse_grid.d() ||
        (fine_grid.n() - 1) % (coarse_grid.n() - 1) != 0)
        throw MismatchedGrids("grids on [" + format_real(coarse_grid.a()) + "," + format_real(coarse_grid.d()) +
                              "] with " + std::to_string(coarse_grid.n()) + " and " +
                              std::to_string(fine_grid.n()) + " nodes do not nest");
    const int stride = (fine_grid.n() - 1) / (coarse_grid.n() - 1);
    const double t_tol = 1e-9 * std::max(1.0, coarse.empty() ? 1.0 : std::abs(coarse.times.back()));

    Trajectory out;
    std::size_t j = 0;
    for (const double t : coarse.times) {
        while (j < fine.size() && fine.times[j] < t - t_tol) ++j;
        if (j == fine.size() || std::abs(fine.times[j] - t) > t_tol)
            throw MismatchedGrids("no reference frame at t = " + format_real(t));
        Field S(coarse_grid.n());
        Field u(coarse_grid.n());
        for (int i = 0; i < coarse_grid.n(); ++i) {
            S(i) = fine.S[j](i * stride);
            u(i) = fine.u[j](i * stride);
        }
        out.push(t, std::move(S), std::move(u));
    }
    return out;
}

namespace {

Field half_flux(const Grid& grid, const Field& S) {
    const Field Sx = d1(grid, S);
    return 0.5 * Sx.cwiseProduct(Sx.cwiseAbs());
}

Field primitive_field(const Grid& grid, const Field& S, double kappa) {
    return d1(grid, S).unaryExpr([kappa](double p) { return primitive_abs_kappa(p, kappa); });
}

}  // namespace

KappaDistance kappa_distance(const Grid& grid, const Trajectory& run, double kappa, const Grid& ref_grid,
                             const Trajectory& ref, double ref_kappa) {
    const bool ref_finer = ref_grid.n() >= grid.n();
    const Grid& g = ref_finer ? grid : ref_grid;
    const Trajectory a = ref_finer ? run : restrict_to(grid, run, ref_grid, ref);
    const Trajectory b = ref_finer ? restrict_to(ref_grid, ref, grid, run) : ref;

    std::vector<Field> flux(a.size());
    std::vector<Field> prim(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        flux[k] = half_flux(g, a.S[k]) - half_flux(g, b.S[k]);
        prim[k] = primitive_field(g, a.S[k], kappa) - primitive_field(g, b.S[k], ref_kappa);
    }
    const auto p = Exponent::four_thirds();
    const auto q = Exponent::two();
    return {norm_Lp_time_Lq_space(g, a.times, flux, p, q), norm_Lp_time_Lq_space(g, a.times, prim, p, q)};
}

KappaStudy kappa_study(const StudyConfig& study) {
    study.validate();
    std::vector<SimulationConfig> configs;
    for (std::size_t i = 0; i < study.kappas.size(); ++i) configs.push_back(study.level(i));
    return kappa_study(study, run_all(configs));
}

KappaStudy kappa_study(const StudyConfig& study, std::vector<RunResult> runs) {
    KappaStudy out;
    for (std::size_t i = 0; i < study.kappas.size(); ++i) out.configs.push_back(study.level(i));
    out.runs = std::move(runs);
    const std::size_t ref = study.reference_index();
    const Grid ref_grid = out.configs[ref].grid();

    for (std::size_t i = 0; i < out.configs.size(); ++i) {
        const SimulationConfig& cfg = out.configs[i];
        const RunResult& r = out.runs[i];
        KappaStudyRow row;
        row.kappa = cfg.kappa;
        row.h = cfg.grid().h();
        row.dt = cfg.effective_dt();
        row.distance = kappa_distance(cfg.grid(), r.trajectory, cfg.kappa, ref_grid, out.runs[ref].trajectory,
                                      out.configs[ref].kappa);
        row.max_principle_margin = r.diagnostics.max_principle.margin;
        row.sup_energy = r.diagnostics.energy.sup_energy;
        row.weak_residual_max = r.diagnostics.weak_residual_max();
        out.rows.push_back(row);
    }
    out.strictly_decreasing = ref >= 2;
    for (std::size_t i = 1; i < ref; ++i)
        if (!(out.rows[i].distance.flux < out.rows[i - 1].distance.flux)) out.strictly_decreasing = false;
    return out;
}

std::string study_csv(const KappaStudy& study) {
    std::string out = "kappa,h,dt,D_kappa,max_principle_margin,sup_energy,weak_residual_max\n";
    for (const auto& r : study.rows)
        out += format_real(r.kappa) + "," + format_real(r.h) + "," + format_real(r.dt) + "," +
               format_real(r.distance.flux) + "," + format_real(r.max_principle_margin) + "," +
               format_real(r.sup_energy) + "," + format_real(r.weak_residual_max) + "\n";
    return out;
}

StudyConfig refinement_path(const SimulationConfig& base, std::size_t levels) {
    StudyConfig study;
    study.base = base;
    study.kappas.clear();
    double kappa = base.kappa;
    for (std::size_t i = 0; i < levels; ++i, kappa *= 0.5) study.kappas.push_back(kappa);
    study.refine_h = 2;
    study.refine_dt = 2;
    return study;
}

// ---------------------------------------------------------------------------
// Manufactured solutions

std::string to_string(MmsFamily family) {
    switch (family) {
        case MmsFamily::elasticity_direct: return "elasticity-direct";
        case MmsFamily::elasticity_green: return "elasticity-green";
        case MmsFamily::parabolic_space: return "parabolic-space";
        case MmsFamily::parabolic_time: return "parabolic-time";
        case MmsFamily::parabolic_exact: return "parabolic-exact";
    }
    return "unknown";
}

MmsFamily mms_family_from(const std::string& name) {
    for (auto f : {MmsFamily::elasticity_direct, MmsFamily::elasticity_green, MmsFamily::parabolic_space,
                   MmsFamily::parabolic_time, MmsFamily::parabolic_exact})
        if (to_string(f) == name) return f;
    throw ValidationError("unknown mms family '" + name + "'");
}

double fitted_order(const std::vector<double>& steps, const std::vector<double>& errors) {
    const auto n = static_cast<double>(steps.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const double x = std::log(steps[i]);
        const double y = std::log(errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

constexpr double kA = 1.0;
constexpr double kD = 2.0;
constexpr double kPi = std::numbers::pi;

double xi(double x) { return (x - kA) / (kD - kA); }

// u = x sin(pi xi) and S = xi^2 (1 - xi) with a 0.1 misfit diagonal material.
double elasticity_error(int n, bool green) {
    const Grid grid(kA, kD, n);
    const MaterialParams params = MaterialSpec{}.build();
    const double k = kPi / (kD - kA);
    auto u = [&](double x) { return x * std::sin(k * (x - kA)); };
    auto calG = [&](double x) {
        const double s = std::sin(k * (x - kA));
        const double c = std::cos(k * (x - kA));
        const double u1 = s + x * k * c;
        const double u2 = 2.0 * k * c - x * k * k * s;
        return u2 + 2.0 * u1 / x - 2.0 * u(x) / (x * x);
    };
    const Field exact = grid.sample(u);
    Field numeric;
    if (green) {
        const Field S = grid.sample([](double x) { return xi(x) * xi(x) * (1.0 - xi(x)); });
        const Field b = grid.sample([&](double x) {
            const double s = xi(x);
            const double Sx = (2.0 * s - 3.0 * s * s) / (kD - kA);
            return params.mu * calG(x) - params.lambda * Sx;
        });
        numeric = solve_via_green(GreenKernel<double>(kA, kD), grid, S, b, params);
    } else {
        numeric = solve_direct(grid, grid.sample(calG));
    }
    return norm_Linf(numeric - exact);
}

double coefficient(double x) { return 0.5 + 0.25 * x; }

struct Manufactured {
    std::function<double(double, double)> value;   // S(t, x)
    std::function<double(double, double)> source;  // S_t - a S_xx
};

Manufactured decaying_mode() {
    const double k = kPi / (kD - kA);
    return {[k](double t, double x) { return std::exp(-t) * std::sin(k * (x - kA)); },
            [k](double t, double x) {
                return std::exp(-t) * std::sin(k * (x - kA)) * (-1.0 + coefficient(x) * k * k);
            }};
}

Manufactured quadratic_mode() {
    return {[](double t, double x) { return (x - kA) * (kD - x) * (1.0 + t); },
            [](double t, double x) { return (x - kA) * (kD - x) + 2.0 * coefficient(x) * (1.0 + t); }};
}

// Backward Euler with the source at the new time level.
Field march(const Grid& grid, const Manufactured& m, double T, long steps) {
    const double dt = T / static_cast<double>(steps);
    const Field a = grid.sample(coefficient);
    Field S = grid.sample([&](double x) { return m.value(0.0, x); });
    for (long s = 1; s <= steps; ++s) {
        const double t = static_cast<double>(s) * dt;
        S = implicit_diffusion_step(grid, S, a, grid.sample([&](double x) { return m.source(t, x); }), dt, 1.0);
    }
    return S;
}

}  // namespace

MmsResult mms_convergence(MmsFamily family, int levels) {
    MmsResult out;
    out.family = family;
    constexpr double T = 0.1;
    for (int l = 0; l < levels; ++l) {
        const int n = (16 << l) + 1;
        const double h = (kD - kA) / (n - 1);
        switch (family) {
            case MmsFamily::elasticity_direct:
            case MmsFamily::elasticity_green:
                out.steps.push_back(h);
                out.errors.push_back(elasticity_error(n, family == MmsFamily::elasticity_green));
                break;
            case MmsFamily::parabolic_space: {
                const Grid grid(kA, kD, n);
                const Manufactured m = decaying_mode();
                const Field S = march(grid, m, T, 10L << (2 * l));
                out.steps.push_back(h);
                out.errors.push_back(norm_Linf(S - grid.sample([&](double x) { return m.value(T, x); })));
                break;
            }
            case MmsFamily::parabolic_time: {
                const Grid grid(kA, kD, 129);
                const Manufactured m = decaying_mode();
                const long steps = 5L << l;
                const Field reference = march(grid, m, T, (5L << (levels - 1)) * 16);
                out.steps.push_back(T / static_cast<double>(steps));
                out.errors.push_back(norm_Linf(march(grid, m, T, steps) - reference));
                break;
            }
            case MmsFamily::parabolic_exact: {
                const Grid grid(kA, kD, n);
                const Manufactured m = quadratic_mode();
                const Field S = march(grid, m, T, 10);
                out.steps.push_back(h);
                out.errors.push_back(norm_Linf(S - grid.sample([&](double x) { return m.value(T, x); })));
                break;
            }
        }
    }
    double worst = 0.0;
    for (double e : out.errors) worst = std::max(worst, e);
    out.machine_precision = worst < 1e-11;
    out.order = out.machine_precision ? std::numeric_limits<double>::quiet_NaN() : fitted_order(out.steps, out.errors);
    return out;
}

}  // namespace confsim
