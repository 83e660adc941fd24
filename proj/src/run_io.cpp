#include "confsim/run_io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace confsim {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path.string() + "'");
    out << text;
}

double parse_real(const std::string& token, const std::string& context) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size())
        throw ValidationError(context + ": bad number '" + token + "'");
    return v;
}

}  // namespace

std::string field_text(const Grid& grid, const Field& f, double t) {
    std::string out = "# t = " + format_real(t) + "\n";
    for (int i = 0; i < grid.n(); ++i) out += format_real(grid.x(i)) + "," + format_real(f(i)) + "\n";
    return out;
}

Field parse_field_text(const std::string& text, double* t) {
    std::istringstream in(text);
    std::string line;
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (t && eq != std::string::npos) {
                std::string tok = line.substr(eq + 1);
                tok.erase(0, tok.find_first_not_of(' '));
                *t = parse_real(tok, "frame header");
            }
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ValidationError("frame: expected 'x,value' line");
        values.push_back(parse_real(line.substr(comma + 1), "frame"));
    }
    return Eigen::Map<const Field>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::string meta_text(const SimulationConfig& config, const TerminationStatus& status) {
    std::string out = "# confsim run metadata; the uncommented lines re-parse as the run config\n";
    out += "# config_hash = " + config_hash(config) + "\n";
    out += "# effective_dt = " + format_real(config.effective_dt()) + "\n";
    out += "# steps = " + std::to_string(config.steps()) + "\n";
    out += "# status = " + std::string(status.completed ? "completed" : "step-rejected") + "\n";
    if (status.rejected_at) out += "# rejected_at = " + format_real(*status.rejected_at) + "\n";
    out += echo(config);
    return out;
}

void write_run(const std::string& dir, const SimulationConfig& config, const RunResult& result) {
    const fs::path root(dir);
    const fs::path frames = root / "frames";
    fs::create_directories(frames);
    const Grid grid = config.grid();
    const Trajectory& traj = result.trajectory;

    std::string index = "k,t\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const std::string id = std::to_string(k);
        write_file(frames / ("S_" + id + ".csv"), field_text(grid, traj.S[k], traj.times[k]));
        write_file(frames / ("u_" + id + ".csv"), field_text(grid, traj.u[k], traj.times[k]));
        index += id + "," + format_real(traj.times[k]) + "\n";
    }
    write_file(frames / "index.csv", index);
    write_file(root / "diagnostics.csv", diagnostics_csv(result.diagnostics));
    write_file(root / "weak_residual.csv", weak_residual_csv(result.diagnostics));
    write_file(root / "meta.txt", meta_text(config, result.status));
    if (!result.elasticity_discrepancy.empty()) {
        std::string check = "t,max_abs_direct_minus_green\n";
        for (std::size_t k = 0; k < result.elasticity_discrepancy.size() && k < traj.size(); ++k)
            check += format_real(traj.times[k]) + "," + format_real(result.elasticity_discrepancy[k]) + "\n";
        write_file(root / "elasticity_check.csv", check);
    }
}

PersistedRun read_run(const std::string& dir) {
    const fs::path root(dir);
    PersistedRun run;
    const std::string meta = read_text_file((root / "meta.txt").string());
    run.config = parse_simulation_config(meta);
    const auto pos = meta.find("# config_hash = ");
    if (pos != std::string::npos) run.config_hash = meta.substr(pos + 16, 16);

    std::istringstream index(read_text_file((root / "frames" / "index.csv").string()));
    std::string line;
    std::getline(index, line);  // header
    while (std::getline(index, line)) {
        if (line.empty()) continue;
        const std::string id = line.substr(0, line.find(','));
        double t = 0.0;
        Field S = parse_field_text(read_text_file((root / "frames" / ("S_" + id + ".csv")).string()), &t);
        Field u = parse_field_text(read_text_file((root / "frames" / ("u_" + id + ".csv")).string()));
        run.trajectory.push(t, std::move(S), std::move(u));
    }
    return run;
}

}  // namespace confsim
