#include "confsim/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "confsim/config.hpp"

namespace confsim {

namespace {

/// Cumulative trapezoid in time of per-frame values.
std::vector<double> cumulative(const std::vector<double>& times, const std::vector<double>& values) {
    std::vector<double> out(values.size(), 0.0);
    for (std::size_t k = 1; k < values.size(); ++k)
        out[k] = out[k - 1] + 0.5 * (times[k] - times[k - 1]) * (values[k] + values[k - 1]);
    return out;
}

double integral_pow(const Field& weights, const Field& f, double p) {
    return weights.dot(f.cwiseAbs().array().pow(p).matrix());
}

Field flux(const Field& S_x) { return S_x.cwiseProduct(S_x.cwiseAbs()); }

}  // namespace

MaxPrincipleResult max_principle_check(const Trajectory& traj) {
    MaxPrincipleResult result;
    if (traj.empty()) return result;
    const double initial = norm_Linf(traj.S.front());
    double peak = 0.0;
    for (const auto& frame : traj.S) peak = std::max(peak, norm_Linf(frame));
    result.margin = peak - initial;
    result.pass = result.margin <= MaxPrincipleResult::tolerance;
    return result;
}

EnergySeries energy_monitor(const Grid& grid, const Trajectory& traj, const RegularizationParams& reg) {
    EnergySeries out;
    const Field w = grid.trapezoid_weights();
    std::vector<double> dissipation_density;
    for (const auto& S : traj.S) {
        const Field S_x = d1(grid, S);
        const Field S_xx = d2(grid, S);
        out.sx_squared.push_back(w.dot(S_x.cwiseAbs2()));
        Field integrand(grid.n());
        for (int i = 0; i < grid.n(); ++i) integrand(i) = abs_kappa(S_x(i), reg.kappa) * S_xx(i) * S_xx(i);
        dissipation_density.push_back(w.dot(integrand));
    }
    out.dissipation = cumulative(traj.times, dissipation_density);
    for (double e : out.sx_squared) out.sup_energy = std::max(out.sup_energy, e);

    // Least-squares fit of the discrete rate against the energy, then the
    // smallest offset that makes the linear bound hold on every interval.
    const std::size_t m = traj.size() > 0 ? traj.size() - 1 : 0;
    if (m >= 1) {
        std::vector<double> rate(m);
        for (std::size_t k = 0; k < m; ++k)
            rate[k] = (out.sx_squared[k + 1] - out.sx_squared[k]) / (traj.times[k + 1] - traj.times[k]);
        double se = 0, sr = 0, see = 0, ser = 0;
        for (std::size_t k = 0; k < m; ++k) {
            se += out.sx_squared[k];
            sr += rate[k];
            see += out.sx_squared[k] * out.sx_squared[k];
            ser += out.sx_squared[k] * rate[k];
        }
        const double denom = m * see - se * se;
        double slope = denom > 1e-300 ? (m * ser - se * sr) / denom : 0.0;
        out.growth = std::max(0.0, slope);
        double offset = 0.0;
        for (std::size_t k = 0; k < m; ++k) offset = std::max(offset, rate[k] - out.growth * out.sx_squared[k]);
        out.offset = offset;
    }
    out.bound_holds = std::isfinite(out.growth) && std::isfinite(out.offset) && std::isfinite(out.sup_energy);
    return out;
}

bool AprioriNorms::all_finite() const {
    for (const auto* series : {&st_l43, &sx_l83_linf, &flux_div_l43, &primitive_w143})
        for (double v : *series)
            if (!std::isfinite(v)) return false;
    return true;
}

AprioriNorms apriori_norms(const Grid& grid, const Trajectory& traj, const RegularizationParams& reg) {
    constexpr double p43 = 4.0 / 3.0;
    constexpr double p83 = 8.0 / 3.0;
    const Field w = grid.trapezoid_weights();
    const std::size_t frames = traj.size();
    AprioriNorms out;
    if (frames == 0) return out;

    std::vector<double> sx_linf(frames), flux_div(frames), primitive(frames);
    for (std::size_t k = 0; k < frames; ++k) {
        const Field S_x = d1(grid, traj.S[k]);
        sx_linf[k] = std::pow(norm_Linf(S_x), p83);
        flux_div[k] = integral_pow(w, d1(grid, flux(S_x)), p43);
        Field P(grid.n());
        for (int i = 0; i < grid.n(); ++i) P(i) = primitive_abs_kappa(S_x(i), reg.kappa);
        primitive[k] = integral_pow(w, P, p43) + integral_pow(w, d1(grid, P), p43);
    }

    std::vector<double> st(frames, 0.0);
    for (std::size_t k = 1; k < frames; ++k) {
        const double dt = traj.times[k] - traj.times[k - 1];
        st[k] = st[k - 1] + dt * integral_pow(w, (traj.S[k] - traj.S[k - 1]) / dt, p43);
    }

    const auto sx_cum = cumulative(traj.times, sx_linf);
    const auto flux_cum = cumulative(traj.times, flux_div);
    const auto prim_cum = cumulative(traj.times, primitive);
    for (std::size_t k = 0; k < frames; ++k) {
        out.st_l43.push_back(std::pow(st[k], 1.0 / p43));
        out.sx_l83_linf.push_back(std::pow(sx_cum[k], 1.0 / p83));
        out.flux_div_l43.push_back(std::pow(flux_cum[k], 1.0 / p43));
        out.primitive_w143.push_back(std::pow(prim_cum[k], 1.0 / p43));
    }
    return out;
}

double TestFunction::time_factor(double s) const {
    if (power == 0) return std::cos(0.5 * M_PI * s);
    return std::pow(1.0 - s, power);
}

double TestFunction::time_factor_derivative(double s) const {
    if (power == 0) return -0.5 * M_PI * std::sin(0.5 * M_PI * s);
    return -power * std::pow(1.0 - s, power - 1);
}

std::vector<TestFunction> default_test_set() {
    return {{1, 2, 1.0}, {2, 2, 1.0}, {3, 2, 1.0}, {1, 0, 1.0}, {2, 3, 1.0}};
}

std::vector<double> weak_residual(const Grid& grid, const Trajectory& traj, const MaterialParams& params,
                                  const std::vector<TestFunction>& test_set) {
    std::vector<double> residuals(test_set.size(), 0.0);
    if (traj.size() < 2) return residuals;
    const Field w = grid.trapezoid_weights();
    const double T = traj.times.back();
    const double L = grid.length();
    const std::size_t frames = traj.size();

    // Per-frame spatial fields independent of the test function.
    std::vector<Field> flux_frames(frames), force_frames(frames);
    for (std::size_t k = 0; k < frames; ++k) {
        const Field S_x = d1(grid, traj.S[k]);
        const Field u_x = d1(grid, traj.u[k]);
        const Field F = compute_calF(grid, traj.u[k], u_x, traj.S[k], S_x, params);
        flux_frames[k] = flux(S_x);
        force_frames[k] = F.cwiseProduct(S_x.cwiseAbs());
    }

    for (std::size_t m = 0; m < test_set.size(); ++m) {
        const TestFunction& phi = test_set[m];
        if (phi.amplitude == 0.0) continue;
        const double k_x = phi.mode * M_PI / L;
        const Field zeta = grid.sample([&](double x) { return std::sin(k_x * (x - grid.a())); });
        const Field zeta_x = grid.sample([&](double x) { return k_x * std::cos(k_x * (x - grid.a())); });

        std::vector<double> density(frames);
        for (std::size_t k = 0; k < frames; ++k) {
            const double s = traj.times[k] / T;
            const double eta = phi.time_factor(s);
            const double eta_t = phi.time_factor_derivative(s) / T;
            const double pair_t = eta_t * w.dot(traj.S[k].cwiseProduct(zeta));
            const double pair_flux = eta * w.dot(flux_frames[k].cwiseProduct(zeta_x));
            const double pair_force = eta * w.dot(force_frames[k].cwiseProduct(zeta));
            density[k] = pair_t - 0.5 * params.c * params.nu * pair_flux - pair_force;
        }
        const auto integral = cumulative(traj.times, density);
        const double initial = phi.time_factor(0.0) * w.dot(traj.S.front().cwiseProduct(zeta));
        residuals[m] = phi.amplitude * (integral.back() + initial);
    }
    return residuals;
}

std::vector<Field> default_dual_basis(const Grid& grid, int count) {
    std::vector<Field> basis;
    const Field w = grid.trapezoid_weights();
    for (int m = 1; m <= count; ++m) {
        const double k = m * M_PI / grid.length();
        Field phi = grid.sample([&](double x) {
            const double s = std::sin(k * (x - grid.a()));
            return s * s;
        });
        const Field phi_x = d1(grid, phi);
        const Field phi_xx = d2(grid, phi);
        const double h2 = std::sqrt(w.dot(phi.cwiseAbs2()) + w.dot(phi_x.cwiseAbs2()) + w.dot(phi_xx.cwiseAbs2()));
        basis.push_back(phi / h2);
    }
    return basis;
}

std::vector<double> dual_norm_series(const Grid& grid, const Trajectory& traj, const std::vector<Field>& basis) {
    std::vector<double> out(traj.size(), 0.0);
    const Field w = grid.trapezoid_weights();
    Field previous;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const Field g = 0.5 * flux(d1(grid, traj.S[k]));
        if (k > 0) {
            const Field change = g - previous;  // (g_t, phi) dt over the interval
            double best = 0.0;
            for (const auto& phi : basis) best = std::max(best, std::abs(w.dot(change.cwiseProduct(phi))));
            out[k] = out[k - 1] + best;
        }
        previous = g;
    }
    return out;
}

double dual_norm_estimate(const Grid& grid, const Trajectory& traj, const std::vector<Field>& basis) {
    const auto series = dual_norm_series(grid, traj, basis);
    return series.empty() ? 0.0 : series.back();
}

double DiagnosticsReport::weak_residual_max() const {
    double m = 0.0;
    for (double r : weak_residuals) m = std::max(m, std::abs(r));
    return m;
}

bool DiagnosticsReport::all_finite() const {
    for (const auto* series : {&max_abs_S, &sx_squared, &dissipation, &dual_proxy, &weak_residuals})
        for (double v : *series)
            if (!std::isfinite(v)) return false;
    return norms.all_finite();
}

DiagnosticsReport compute_diagnostics(const Grid& grid, const Trajectory& traj, const MaterialParams& params,
                                      const RegularizationParams& reg) {
    DiagnosticsReport report;
    report.times = traj.times;
    for (const auto& S : traj.S) report.max_abs_S.push_back(norm_Linf(S));
    report.energy = energy_monitor(grid, traj, reg);
    report.sx_squared = report.energy.sx_squared;
    report.dissipation = report.energy.dissipation;
    report.norms = apriori_norms(grid, traj, reg);
    report.dual_proxy = dual_norm_series(grid, traj, default_dual_basis(grid));
    report.weak_residuals = weak_residual(grid, traj, params, default_test_set());
    report.max_principle = max_principle_check(traj);
    return report;
}

std::string diagnostics_csv(const DiagnosticsReport& report) {
    std::string out =
        "t,max_abs_S,sx_l2_squared,dissipation,st_l43,sx_l83_linf,flux_div_l43,primitive_w143,dual_proxy\n";
    for (std::size_t k = 0; k < report.times.size(); ++k) {
        out += format_real(report.times[k]) + ',' + format_real(report.max_abs_S[k]) + ',' +
               format_real(report.sx_squared[k]) + ',' + format_real(report.dissipation[k]) + ',' +
               format_real(report.norms.st_l43[k]) + ',' + format_real(report.norms.sx_l83_linf[k]) + ',' +
               format_real(report.norms.flux_div_l43[k]) + ',' + format_real(report.norms.primitive_w143[k]) + ',' +
               format_real(report.dual_proxy[k]) + '\n';
    }
    return out;
}

std::string weak_residual_csv(const DiagnosticsReport& report) {
    const auto tests = default_test_set();
    std::string out = "mode,power,residual\n";
    for (std::size_t m = 0; m < report.weak_residuals.size(); ++m)
        out += std::to_string(tests[m].mode) + ',' + std::to_string(tests[m].power) + ',' +
               format_real(report.weak_residuals[m]) + '\n';
    return out;
}

}  // namespace confsim
