#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "confsim/grid.hpp"
#include "confsim/material.hpp"
#include "confsim/order_parameter.hpp"

namespace confsim {

enum class TensorKind { diagonal, isotropic, explicit_entries };
enum class InitialFamily { bump, plateau };
enum class BodyFamily { zero, constant, polynomial, ramp };
enum class ElasticityPath { direct, green, both_verify };

struct MaterialSpec {
    double c = 1.0;
    double nu = 0.05;
    double well_weight = 1.0;
    TensorKind tensor = TensorKind::diagonal;
    double mu0 = 1.0;
    double lame_lambda = 1.0;
    double lame_mu = 1.0;
    std::vector<double> entries;                     // 81 values when explicit
    std::vector<double> misfit{0.1, 0.1, 0.1, 0, 0, 0};  // e11 e22 e33 e23 e13 e12

    [[nodiscard]] ElasticityTensor build_tensor() const;
    [[nodiscard]] Matrix3 build_misfit() const;
    /// Throws ValidationError if the tensor cannot be reduced to scalars.
    [[nodiscard]] MaterialParams build() const;

    friend bool operator==(const MaterialSpec&, const MaterialSpec&) = default;
};

/// A sin(pi xi) bump, or a plateau of height A on [offset, 1 - offset] (in
/// xi = (x-a)/(d-a)) with C-infinity shoulders of width `shoulder`.
struct InitialData {
    InitialFamily family = InitialFamily::plateau;
    double amplitude = 0.5;
    double offset = 0.1;
    double shoulder = 0.3;

    [[nodiscard]] double value(double x, double a, double d) const;
    [[nodiscard]] Field sample(const Grid& grid) const;

    friend bool operator==(const InitialData&, const InitialData&) = default;
};

/// Radial body force b(t, x).  The ramp family is value (1 - exp(-t/ramp_time)).
struct BodyForce {
    BodyFamily family = BodyFamily::zero;
    double value = 0.0;
    std::vector<double> coeffs;  // polynomial in x, lowest degree first
    double ramp_time = 0.01;

    [[nodiscard]] double value_at(double t, double x) const;
    [[nodiscard]] Field sample(const Grid& grid, double t) const;

    friend bool operator==(const BodyForce&, const BodyForce&) = default;
};

struct SimulationConfig {
    double a = 1.0;
    double d = 2.0;
    int n = 129;
    MaterialSpec material;
    double kappa = 0.25;
    std::optional<double> kappa_m;  // defaults to kappa
    double dt = 1e-4;
    double dt_max = 1e-2;
    double theta = 1.0;
    double max_increment = 0.05;
    double T_e = 0.01;
    int save_every = 1;
    InitialData initial;
    BodyForce body;
    ElasticityPath elasticity_path = ElasticityPath::direct;

    [[nodiscard]] Grid grid() const { return Grid(a, d, n); }
    [[nodiscard]] RegularizationParams regularization() const;
    /// Number of steps; dt is shrunk if needed so that steps * dt == T_e.
    [[nodiscard]] long steps() const;
    [[nodiscard]] double effective_dt() const { return T_e / static_cast<double>(steps()); }

    /// Checks every invariant; throws ValidationError naming the first violated one.
    void validate() const;

    friend bool operator==(const SimulationConfig&, const SimulationConfig&) = default;
};

struct StudyConfig {
    SimulationConfig base;
    std::vector<double> kappas{0.5, 0.25, 0.125, 0.0625, 0.03125};
    int refine_h = 1;   // interval multiplier per level
    int refine_dt = 1;  // time-step divisor per level

    /// Config of member run `level`.
    [[nodiscard]] SimulationConfig level(std::size_t level) const;
    [[nodiscard]] std::size_t reference_index() const { return kappas.size() - 1; }
    void validate() const;

    friend bool operator==(const StudyConfig&, const StudyConfig&) = default;
};

/// Raw key = value entries with source positions.
struct ConfigEntry {
    std::string value;
    int line = 0;
    int column = 0;
};
using ConfigEntries = std::map<std::string, ConfigEntry>;

/// Tokenises `key = value` lines; '#' starts a comment.
[[nodiscard]] ConfigEntries parse_entries(const std::string& text);

/// Applies `key=value` overrides on top of parsed entries.
void apply_overrides(ConfigEntries& entries, const std::vector<std::string>& overrides);

[[nodiscard]] SimulationConfig simulation_config_from(const ConfigEntries& entries);
[[nodiscard]] StudyConfig study_config_from(const ConfigEntries& entries);

[[nodiscard]] SimulationConfig parse_simulation_config(const std::string& text,
                                                       const std::vector<std::string>& overrides = {});
[[nodiscard]] StudyConfig parse_study_config(const std::string& text, const std::vector<std::string>& overrides = {});

[[nodiscard]] std::string read_text_file(const std::string& path);

/// Canonical text form; parses back to an identical config.
[[nodiscard]] std::string echo(const SimulationConfig& config);
[[nodiscard]] std::string echo(const StudyConfig& config);

/// FNV-1a 64-bit digest as 16 hex digits.
[[nodiscard]] std::string fnv1a_hex(const std::string& bytes);
[[nodiscard]] std::string config_hash(const SimulationConfig& config);

/// 17 significant digits; round-trips every double exactly.
[[nodiscard]] std::string format_real(double v);

[[nodiscard]] std::string to_string(ElasticityPath path);

}  // namespace confsim
