#include "confsim/simulator.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace confsim {

namespace {

SimulationConfig validated(SimulationConfig config) {
    config.validate();
    return config;
}

}  // namespace

Simulator::Simulator(SimulationConfig config)
    : config_(validated(std::move(config))),
      grid_(config_.grid()),
      material_(config_.material.build()),
      reg_(config_.regularization()),
      kernel_(config_.a, config_.d),
      dt_(config_.effective_dt()),
      total_steps_(config_.steps()),
      S_(config_.initial.sample(grid_)),
      mollifier_(reg_.kappa_m, dt_) {
    // History before t = 0 is padded with S_0; the frame at t = 0 is pushed
    // when step 0 is processed.
    mollifier_.prime(S_);
}

Simulator::Simulator(SimulationConfig config, const Snapshot& snapshot) : Simulator(std::move(config)) {
    if (snapshot.config_hash != config_hash(config_))
        throw ValidationError("snapshot was written for a different config (hash " + snapshot.config_hash + ")");
    if (snapshot.S.size() != grid_.n()) throw ValidationError("snapshot field size does not match the grid");
    if (snapshot.history.size() != mollifier_.window())
        throw ValidationError("snapshot history does not match the mollifier window");
    if (snapshot.step < 0 || snapshot.step > total_steps_) throw ValidationError("snapshot step out of range");
    step_ = snapshot.step;
    S_ = snapshot.S;
    mollifier_.set_history(snapshot.history);
}

Field Simulator::displacement(const Field& S_moll, double t, double* discrepancy) const {
    const Field b = config_.body.sample(grid_, t);
    switch (config_.elasticity_path) {
        case ElasticityPath::direct:
            return solve_direct(grid_, compute_calG(d1(grid_, S_moll), b, material_));
        case ElasticityPath::green:
            return solve_via_green(kernel_, grid_, S_moll, b, material_);
        case ElasticityPath::both_verify: {
            Field direct = solve_direct(grid_, compute_calG(d1(grid_, S_moll), b, material_));
            const Field green = solve_via_green(kernel_, grid_, S_moll, b, material_);
            if (discrepancy) *discrepancy = norm_Linf(direct - green);
            return direct;
        }
    }
    return grid_.zeros();
}

bool Simulator::advance(long stop_step) {
    while (!finished_ && step_ < stop_step) {
        const double t = time();
        mollifier_.push(S_);
        const Field S_moll = mollify(mollifier_);
        double discrepancy = 0.0;
        const Field u = displacement(S_moll, t, &discrepancy);

        if (step_ % config_.save_every == 0 || step_ == total_steps_) {
            trajectory_.push(t, S_, u);
            if (config_.elasticity_path == ElasticityPath::both_verify) discrepancy_.push_back(discrepancy);
        }
        if (step_ == total_steps_) {
            finished_ = true;
            break;
        }

        const Field F = compute_calF(grid_, u, d1(grid_, u), S_, d1(grid_, S_), material_);
        try {
            S_ = step(grid_, S_, F, material_, reg_, t);
        } catch (const StepRejected& rejected) {
            status_.completed = false;
            status_.rejected_at = rejected.time();
            status_.message = rejected.what();
            finished_ = true;
            return false;
        }
        ++step_;
    }
    return status_.completed;
}

Snapshot Simulator::snapshot() const {
    Snapshot snap;
    snap.config_hash = config_hash(config_);
    snap.step = step_;
    snap.S = S_;
    snap.history = mollifier_.history();
    return snap;
}

RunResult Simulator::result() const {
    RunResult out;
    out.trajectory = trajectory_;
    out.diagnostics = compute_diagnostics(grid_, trajectory_, material_, reg_);
    out.status = status_;
    out.elasticity_discrepancy = discrepancy_;
    return out;
}

RunResult run(const SimulationConfig& config) {
    Simulator sim(config);
    sim.run_to_end();
    return sim.result();
}

// ---------------------------------------------------------------------------
// Snapshot persistence

namespace {

void write_field(std::ostringstream& out, const char* tag, const Field& f) {
    out << tag << ' ' << f.size();
    for (Eigen::Index i = 0; i < f.size(); ++i) out << ' ' << format_real(f(i));
    out << '\n';
}

Field read_field(std::istringstream& in, const std::string& expected_tag) {
    std::string tag;
    Eigen::Index size = 0;
    if (!(in >> tag >> size) || tag != expected_tag || size < 0)
        throw ChecksumMismatch("snapshot: malformed '" + expected_tag + "' record");
    Field f(size);
    std::string token;
    for (Eigen::Index i = 0; i < size; ++i) {
        if (!(in >> token)) throw ChecksumMismatch("snapshot: truncated field");
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (ec != std::errc() || ptr != token.data() + token.size()) throw ChecksumMismatch("snapshot: bad number");
        f(i) = v;
    }
    return f;
}

}  // namespace

std::string serialize(const Snapshot& snapshot) {
    std::ostringstream body;
    body << "confsim-snapshot " << Snapshot::format_version << '\n';
    body << "config_hash " << snapshot.config_hash << '\n';
    body << "step " << snapshot.step << '\n';
    write_field(body, "S", snapshot.S);
    body << "history " << snapshot.history.size() << '\n';
    for (const auto& frame : snapshot.history) write_field(body, "H", frame);
    const std::string text = body.str();
    return text + "checksum " + fnv1a_hex(text) + '\n';
}

Snapshot deserialize_snapshot(const std::string& text) {
    const auto pos = text.rfind("checksum ");
    if (pos == std::string::npos) throw ChecksumMismatch("snapshot: missing checksum");
    const std::string body = text.substr(0, pos);
    std::string stored = text.substr(pos + 9);
    while (!stored.empty() && std::isspace(static_cast<unsigned char>(stored.back()))) stored.pop_back();
    if (stored != fnv1a_hex(body)) throw ChecksumMismatch("snapshot: checksum mismatch");

    std::istringstream in(body);
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != "confsim-snapshot") throw VersionMismatch("snapshot: unknown format");
    if (version != Snapshot::format_version)
        throw VersionMismatch("snapshot: format version " + std::to_string(version) + ", expected " +
                              std::to_string(Snapshot::format_version));
    Snapshot snap;
    std::string tag;
    in >> tag >> snap.config_hash;
    in >> tag >> snap.step;
    snap.S = read_field(in, "S");
    std::size_t count = 0;
    in >> tag >> count;
    for (std::size_t k = 0; k < count; ++k) snap.history.push_back(read_field(in, "H"));
    return snap;
}

void save_snapshot(const Snapshot& snapshot, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write snapshot '" + path + "'");
    out << serialize(snapshot);
}

Snapshot load_snapshot(const std::string& path) { return deserialize_snapshot(read_text_file(path)); }

}  // namespace confsim
