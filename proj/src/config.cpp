#include "confsim/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace confsim {

// ---------------------------------------------------------------------------
// Material, initial data, body force

ElasticityTensor MaterialSpec::build_tensor() const {
    switch (tensor) {
        case TensorKind::diagonal:
            return ElasticityTensor::diagonal(mu0);
        case TensorKind::isotropic:
            return ElasticityTensor::isotropic(lame_lambda, lame_mu);
        case TensorKind::explicit_entries:
            return ElasticityTensor::from_entries(entries);
    }
    return {};
}

Matrix3 MaterialSpec::build_misfit() const {
    if (misfit.size() != 6) throw ValidationError("misfit needs 6 values (e11 e22 e33 e23 e13 e12)");
    Matrix3 m;
    m << misfit[0], misfit[5], misfit[4],  //
        misfit[5], misfit[1], misfit[3],   //
        misfit[4], misfit[3], misfit[2];
    return m;
}

MaterialParams MaterialSpec::build() const {
    try {
        return MaterialParams::from_tensors(c, nu, well_weight, build_tensor(), build_misfit());
    } catch (const AssumptionViolated& err) {
        throw ValidationError(std::string("material tensor fails the radial reduction assumptions\n") +
                              err.report().to_string());
    }
}

namespace {

double smooth_step(double z) {
    auto f = [](double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; };
    if (z <= 0.0) return 0.0;
    if (z >= 1.0) return 1.0;
    return f(z) / (f(z) + f(1.0 - z));
}

}  // namespace

double InitialData::value(double x, double a, double d) const {
    const double xi = (x - a) / (d - a);
    if (xi <= 0.0 || xi >= 1.0) return 0.0;
    if (family == InitialFamily::bump) return amplitude * std::sin(M_PI * xi);
    return amplitude * smooth_step((xi - offset) / shoulder) * smooth_step((1.0 - offset - xi) / shoulder);
}

Field InitialData::sample(const Grid& grid) const {
    Field s = grid.sample([&](double x) { return value(x, grid.a(), grid.d()); });
    s(0) = 0.0;
    s(grid.n() - 1) = 0.0;
    return s;
}

double BodyForce::value_at(double t, double x) const {
    switch (family) {
        case BodyFamily::zero:
            return 0.0;
        case BodyFamily::constant:
            return value;
        case BodyFamily::polynomial: {
            double acc = 0.0;
            for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
            return acc;
        }
        case BodyFamily::ramp:
            return value * (1.0 - std::exp(-t / ramp_time));
    }
    return 0.0;
}

Field BodyForce::sample(const Grid& grid, double t) const {
    return grid.sample([&](double x) { return value_at(t, x); });
}

// ---------------------------------------------------------------------------
// SimulationConfig / StudyConfig

RegularizationParams SimulationConfig::regularization() const {
    RegularizationParams reg;
    reg.kappa = kappa;
    reg.kappa_m = kappa_m.value_or(kappa);
    reg.dt = effective_dt();
    reg.theta = theta;
    reg.dt_max = dt_max;
    reg.max_increment = max_increment;
    return reg;
}

long SimulationConfig::steps() const {
    return std::max<long>(1, static_cast<long>(std::ceil(T_e / dt - 1e-9)));
}

void SimulationConfig::validate() const {
    if (!(a > 0.0)) throw ValidationError("a must be positive");
    if (!(a < d)) throw ValidationError("a<d required");
    if (n < 3) throw ValidationError("n must be at least 3");
    if (!(material.c > 0.0)) throw ValidationError("c must be positive");
    if (!(material.nu > 0.0)) throw ValidationError("nu must be positive");
    if (!(material.well_weight > 0.0)) throw ValidationError("well_weight must be positive");
    if (!(kappa > 0.0 && kappa <= 1.0)) throw ValidationError("kappa must lie in (0,1]");
    if (kappa_m && !(*kappa_m >= 0.0)) throw ValidationError("kappa_m must be nonnegative");
    if (!(dt > 0.0)) throw ValidationError("dt must be positive");
    if (!(dt <= dt_max)) throw ValidationError("dt must not exceed dt_max");
    if (!(theta >= 0.5 && theta <= 1.0)) throw ValidationError("theta must lie in [0.5,1]");
    if (!(max_increment > 0.0)) throw ValidationError("max_increment must be positive");
    if (!(T_e > 0.0)) throw ValidationError("T_e must be positive");
    if (save_every < 1) throw ValidationError("save_every must be at least 1");
    if (initial.family == InitialFamily::plateau) {
        if (!(initial.shoulder > 0.0)) throw ValidationError("initial_shoulder must be positive");
        if (!(initial.offset >= 0.0 && 2.0 * (initial.offset + initial.shoulder) <= 1.0))
            throw ValidationError("plateau needs 2*(initial_offset+initial_shoulder) <= 1");
    }
    if (body.family == BodyFamily::ramp && !(body.ramp_time > 0.0))
        throw ValidationError("body_ramp_time must be positive");
    const MaterialParams params = material.build();
    if (!(params.mu > 0.0)) throw ValidationError("mu must be positive");
    if (params.tensor.min_symmetric_eigenvalue() <= 0.0)
        throw ValidationError("elasticity tensor must be positive definite");
}

SimulationConfig StudyConfig::level(std::size_t level) const {
    SimulationConfig cfg = base;
    cfg.kappa = kappas.at(level);
    if (base.kappa_m) cfg.kappa_m = base.kappa_m;
    long h_mult = 1;
    long dt_div = 1;
    for (std::size_t i = 0; i < level; ++i) {
        h_mult *= refine_h;
        dt_div *= refine_dt;
    }
    cfg.n = static_cast<int>((base.n - 1) * h_mult + 1);
    cfg.dt = base.dt / static_cast<double>(dt_div);
    cfg.save_every = static_cast<int>(base.save_every * dt_div);
    return cfg;
}

void StudyConfig::validate() const {
    base.validate();
    if (kappas.size() < 2) throw ValidationError("kappas needs at least two values");
    for (std::size_t i = 0; i < kappas.size(); ++i) {
        if (!(kappas[i] > 0.0 && kappas[i] <= 1.0)) throw ValidationError("kappa must lie in (0,1]");
        if (i > 0 && !(kappas[i] < kappas[i - 1])) throw ValidationError("kappas must be strictly decreasing");
    }
    if (refine_h < 1) throw ValidationError("refine_h must be at least 1");
    if (refine_dt < 1) throw ValidationError("refine_dt must be at least 1");
}

// ---------------------------------------------------------------------------
// Text format

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_string(ElasticityPath path) {
    switch (path) {
        case ElasticityPath::direct:
            return "direct";
        case ElasticityPath::green:
            return "green";
        case ElasticityPath::both_verify:
            return "both-verify";
    }
    return "direct";
}

namespace {

std::string trim(const std::string& s, std::size_t& lead) {
    std::size_t b = 0;
    while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    std::size_t e = s.size();
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    lead = b;
    return s.substr(b, e - b);
}

[[noreturn]] void bad_value(const std::string& key, const ConfigEntry& entry, const std::string& what) {
    throw ParseError(entry.line, entry.column, "key '" + key + "': " + what);
}

double as_real(const std::string& key, const ConfigEntry& entry) {
    const std::string& s = entry.value;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) bad_value(key, entry, "expected a real number, got '" + s + "'");
    return v;
}

int as_int(const std::string& key, const ConfigEntry& entry) {
    const std::string& s = entry.value;
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) bad_value(key, entry, "expected an integer, got '" + s + "'");
    return v;
}

std::vector<double> as_list(const std::string& key, const ConfigEntry& entry) {
    std::vector<double> out;
    std::string token;
    std::string s = entry.value;
    for (char& ch : s)
        if (ch == ',') ch = ' ';
    std::istringstream in(s);
    while (in >> token) {
        ConfigEntry sub = entry;
        sub.value = token;
        out.push_back(as_real(key, sub));
    }
    return out;
}

std::string join(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ' ';
        out += format_real(values[i]);
    }
    return out;
}

template <typename Enum>
struct EnumName {
    Enum value;
    const char* name;
};

constexpr EnumName<TensorKind> tensor_names[] = {
    {TensorKind::diagonal, "diagonal"}, {TensorKind::isotropic, "isotropic"}, {TensorKind::explicit_entries, "explicit"}};
constexpr EnumName<InitialFamily> initial_names[] = {{InitialFamily::bump, "bump"}, {InitialFamily::plateau, "plateau"}};
constexpr EnumName<BodyFamily> body_names[] = {{BodyFamily::zero, "zero"},
                                               {BodyFamily::constant, "constant"},
                                               {BodyFamily::polynomial, "polynomial"},
                                               {BodyFamily::ramp, "ramp"}};
constexpr EnumName<ElasticityPath> path_names[] = {
    {ElasticityPath::direct, "direct"}, {ElasticityPath::green, "green"}, {ElasticityPath::both_verify, "both-verify"}};

template <typename Enum, std::size_t N>
Enum as_enum(const std::string& key, const ConfigEntry& entry, const EnumName<Enum> (&names)[N]) {
    for (const auto& n : names)
        if (entry.value == n.name) return n.value;
    std::string options;
    for (const auto& n : names) options += std::string(options.empty() ? "" : ", ") + n.name;
    bad_value(key, entry, "expected one of {" + options + "}, got '" + entry.value + "'");
}

template <typename Enum, std::size_t N>
std::string enum_name(Enum v, const EnumName<Enum> (&names)[N]) {
    for (const auto& n : names)
        if (n.value == v) return n.name;
    return "?";
}

struct Key {
    const char* name;
    std::function<void(SimulationConfig&, const std::string&, const ConfigEntry&)> set;
    std::function<std::string(const SimulationConfig&)> get;
};

template <typename Member>
Key real_key(const char* name, Member member) {
    return {name, [member](SimulationConfig& c, const std::string& k, const ConfigEntry& e) { member(c) = as_real(k, e); },
            [member](const SimulationConfig& c) { return format_real(member(const_cast<SimulationConfig&>(c))); }};
}

const std::vector<Key>& simulation_keys() {
    static const std::vector<Key> keys = {
        real_key("a", [](SimulationConfig& c) -> double& { return c.a; }),
        real_key("d", [](SimulationConfig& c) -> double& { return c.d; }),
        {"n", [](SimulationConfig& c, const std::string& k, const ConfigEntry& e) { c.n = as_int(k, e); },
         [](const SimulationConfig& c) { return std::to_string(c.n); }},
        real_key("c", [](SimulationConfig& c) -> double& { return c.material.c; }),
        real_key("nu", [](SimulationConfig& c) -> double& { return c.material.nu; }),
        real_key("well_weight", [](SimulationConfig& c) -> double& { return c.material.well_weight; }),
        {"tensor",
         [](SimulationConfig& c, const std::string& k, const ConfigEntry& e) { c.material.tensor = as_enum(k, e, tensor_names); },
         [](const SimulationConfig& c) { return enum_name(c.material.tensor, tensor_names); }},
        real_key("mu0", [](SimulationConfig& c) -> double& { return c.material.mu0; }),
        real_key("lame_lambda", [](SimulationConfig& c) -> double& { return c.material.lame_lambda; }),
        real_key("lame_mu", [](SimulationConfig& c) -> double& { return c.material.lame_mu; }),
        {"tensor_entries",
         [](SimulationConfig& c, const std::string& k, const ConfigEntry& e) { c.material.entries = as_list(k, e); },
         [](const SimulationConfig& c) { return join(c.material.entries); }},
        {"misfit",
         [](SimulationConfig& c, const std::string& k, const ConfigEntry& e) {
             auto v = as_list(k, e);
             if (v.size() == 1) v = {v[0], v[0], v[0], 0.0, 0.0, 0.0};
             c.material.misfit = v;
         },
         [](const SimulationConfig& c) { return join(c.material.misfit); }},
        real_key("kappa", [](SimulationConfig& c) -> double& { return c.kappa; }),
        {"kappa_m",
         [](SimulationConfig& c, const std::string& k, const ConfigEntry& e) {
             if (e.value == "auto")
                 c.kappa_m.reset();
             else
                 c.kappa_m = as_real(k, e);
         },
         [](const SimulationConfig& c) { return c.kappa_m ? format_real(*c.kappa_m) : std::string("auto"); }},
        real_key("dt", [](SimulationConfig& c) -> double& { return c.dt; }),
        real_key("dt_max", [](SimulationConfig& c) -> double& { return c.dt_max; }),
        real_key("theta", [](SimulationConfig& c) -> double& { return c.theta; }),
        real_key("max_increment", [](SimulationConfig& c) -> double& { return c.max_increment; }),
        real_key("T_e", [](SimulationConfig& c) -> double& { return c.T_e; }),
        {"save_every", [](SimulationConfig& c, const std::string& k, const ConfigEntry& e) { c.save_every = as_int(k, e); },
         [](const SimulationConfig& c) { return std::to_string(c.save_every); }},
        {"initial",
         [](SimulationConfig& c, const std::string& k, const ConfigEntry& e) { c.initial.family = as_enum(k, e, initial_names); },
         [](const SimulationConfig& c) { return enum_name(c.initial.family, initial_names); }},
        real_key("initial_amplitude", [](SimulationConfig& c) -> double& { return c.initial.amplitude; }),
        real_key("initial_offset", [](SimulationConfig& c) -> double& { return c.initial.offset; }),
        real_key("initial_shoulder", [](SimulationConfig& c) -> double& { return c.initial.shoulder; }),
        {"body",
         [](SimulationConfig& c, const std::string& k, const ConfigEntry& e) { c.body.family = as_enum(k, e, body_names); },
         [](const SimulationConfig& c) { return enum_name(c.body.family, body_names); }},
        real_key("body_value", [](SimulationConfig& c) -> double& { return c.body.value; }),
        {"body_coeffs",
         [](SimulationConfig& c, const std::string& k, const ConfigEntry& e) { c.body.coeffs = as_list(k, e); },
         [](const SimulationConfig& c) { return join(c.body.coeffs); }},
        real_key("body_ramp_time", [](SimulationConfig& c) -> double& { return c.body.ramp_time; }),
        {"elasticity_path",
         [](SimulationConfig& c, const std::string& k, const ConfigEntry& e) { c.elasticity_path = as_enum(k, e, path_names); },
         [](const SimulationConfig& c) { return enum_name(c.elasticity_path, path_names); }},
    };
    return keys;
}

const char* const study_key_names[] = {"kappas", "refine_h", "refine_dt"};

bool is_study_key(const std::string& key) {
    for (const char* k : study_key_names)
        if (key == k) return true;
    return false;
}

const Key* find_key(const std::string& name) {
    for (const auto& k : simulation_keys())
        if (name == k.name) return &k;
    return nullptr;
}

}  // namespace

ConfigEntries parse_entries(const std::string& text) {
    ConfigEntries entries;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
        std::size_t lead = 0;
        if (trim(line, lead).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, static_cast<int>(lead) + 1, "expected 'key = value'");
        std::size_t key_lead = 0;
        const std::string key = trim(line.substr(0, eq), key_lead);
        if (key.empty()) throw ParseError(line_no, static_cast<int>(eq) + 1, "missing key before '='");
        for (std::size_t i = 0; i < key.size(); ++i) {
            const char ch = key[i];
            if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'))
                throw ParseError(line_no, static_cast<int>(key_lead + i) + 1, "invalid character in key '" + key + "'");
        }
        std::size_t value_lead = 0;
        const std::string value = trim(line.substr(eq + 1), value_lead);
        if (value.empty()) throw ParseError(line_no, static_cast<int>(eq) + 2, "missing value for key '" + key + "'");
        if (entries.count(key)) throw ParseError(line_no, static_cast<int>(key_lead) + 1, "duplicate key '" + key + "'");
        entries[key] = ConfigEntry{value, line_no, static_cast<int>(eq + 1 + value_lead) + 1};
    }
    return entries;
}

void apply_overrides(ConfigEntries& entries, const std::vector<std::string>& overrides) {
    int index = 0;
    for (const auto& ov : overrides) {
        ++index;
        const auto eq = ov.find('=');
        if (eq == std::string::npos) throw ParseError(0, index, "override '" + ov + "' is not key=value");
        std::size_t lead = 0;
        const std::string key = trim(ov.substr(0, eq), lead);
        const std::string value = trim(ov.substr(eq + 1), lead);
        if (!find_key(key) && !is_study_key(key)) throw ValidationError("override references unknown key '" + key + "'");
        entries[key] = ConfigEntry{value, 0, index};
    }
}

SimulationConfig simulation_config_from(const ConfigEntries& entries) {
    SimulationConfig cfg;
    for (const auto& [key, entry] : entries) {
        if (is_study_key(key)) continue;
        const Key* k = find_key(key);
        if (!k) throw ParseError(entry.line, 1, "unknown key '" + key + "'");
        k->set(cfg, key, entry);
    }
    cfg.validate();
    return cfg;
}

StudyConfig study_config_from(const ConfigEntries& entries) {
    StudyConfig study;
    study.base = simulation_config_from(entries);
    if (auto it = entries.find("kappas"); it != entries.end()) study.kappas = as_list("kappas", it->second);
    if (auto it = entries.find("refine_h"); it != entries.end()) study.refine_h = as_int("refine_h", it->second);
    if (auto it = entries.find("refine_dt"); it != entries.end()) study.refine_dt = as_int("refine_dt", it->second);
    study.validate();
    return study;
}

SimulationConfig parse_simulation_config(const std::string& text, const std::vector<std::string>& overrides) {
    ConfigEntries entries = parse_entries(text);
    apply_overrides(entries, overrides);
    for (const auto& [key, entry] : entries)
        if (is_study_key(key)) throw ParseError(entry.line, 1, "study key '" + key + "' not allowed in a run config");
    return simulation_config_from(entries);
}

StudyConfig parse_study_config(const std::string& text, const std::vector<std::string>& overrides) {
    ConfigEntries entries = parse_entries(text);
    apply_overrides(entries, overrides);
    return study_config_from(entries);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string echo(const SimulationConfig& config) {
    std::string out;
    for (const auto& k : simulation_keys()) {
        const std::string value = k.get(config);
        if (value.empty()) continue;  // empty lists
        out += std::string(k.name) + " = " + value + "\n";
    }
    return out;
}

std::string echo(const StudyConfig& config) {
    std::string out = echo(config.base);
    out += "kappas = " + join(config.kappas) + "\n";
    out += "refine_h = " + std::to_string(config.refine_h) + "\n";
    out += "refine_dt = " + std::to_string(config.refine_dt) + "\n";
    return out;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string config_hash(const SimulationConfig& config) { return fnv1a_hex(echo(config)); }

}  // namespace confsim
