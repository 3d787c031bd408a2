#include "nsms/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace nsms {

MsStepConfig RunConfig::ms_config() const {
    MsStepConfig cfg;
    cfg.h = h;
    cfg.delta = resolved_delta();
    cfg.anneal = anneal;
    cfg.kappa = kappa;
    cfg.mobility = m;
    return cfg;
}

NsStepConfig RunConfig::ns_config() const {
    NsStepConfig cfg;
    cfg.h = h;
    cfg.picard_tol = picard_tol;
    cfg.picard_max = picard_max;
    cfg.cg_tol = cg_tol;
    cfg.cg_max = cg_max;
    return cfg;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError("bad numeric value for " + key + ": '" + v + "'");
    }
}

long long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const long long x = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError("bad integer value for " + key + ": '" + v + "'");
    }
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    bool have_T = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": malformed section");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "grid" && section != "physics" && section != "scheme" && section != "initial" &&
                section != "output")
                throw ConfigError("unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        const std::string qual = section + "." + key;

        if (qual == "grid.n") cfg.n = static_cast<int>(parse_int(qual, val));
        else if (qual == "grid.L") cfg.L = parse_double(qual, val);
        else if (qual == "physics.nu_minus") cfg.nu_minus = parse_double(qual, val);
        else if (qual == "physics.nu_plus") cfg.nu_plus = parse_double(qual, val);
        else if (qual == "physics.kappa") cfg.kappa = parse_double(qual, val);
        else if (qual == "physics.m") cfg.m = parse_double(qual, val);
        else if (qual == "scheme.h") cfg.h = parse_double(qual, val);
        else if (qual == "scheme.T") { cfg.T = parse_double(qual, val); have_T = true; }
        else if (qual == "scheme.delta") cfg.delta = parse_double(qual, val);
        else if (qual == "scheme.dt_diffuse") cfg.dt_diffuse = parse_double(qual, val);
        else if (qual == "scheme.sweeps") cfg.anneal.sweeps = static_cast<int>(parse_int(qual, val));
        else if (qual == "scheme.temp_init") cfg.anneal.temp_init = parse_double(qual, val);
        else if (qual == "scheme.temp_decay") cfg.anneal.temp_decay = parse_double(qual, val);
        else if (qual == "scheme.no_improve_window") cfg.anneal.no_improve_window = static_cast<int>(parse_int(qual, val));
        else if (qual == "scheme.picard_tol") cfg.picard_tol = parse_double(qual, val);
        else if (qual == "scheme.picard_max") cfg.picard_max = static_cast<int>(parse_int(qual, val));
        else if (qual == "scheme.cg_tol") cfg.cg_tol = parse_double(qual, val);
        else if (qual == "scheme.cg_max") cfg.cg_max = static_cast<int>(parse_int(qual, val));
        else if (qual == "initial.phase_shape") {
            if (val == "stripe") cfg.phase_shape = PhaseShape::Stripe;
            else if (val == "disk") cfg.phase_shape = PhaseShape::Disk;
            else if (val == "file") cfg.phase_shape = PhaseShape::File;
            else throw ConfigError("initial.phase_shape must be stripe|disk|file");
        }
        else if (qual == "initial.stripe_fraction") cfg.stripe_fraction = parse_double(qual, val);
        else if (qual == "initial.disk_radius") cfg.disk_radius = parse_double(qual, val);
        else if (qual == "initial.disk_cx") cfg.disk_cx = parse_double(qual, val);
        else if (qual == "initial.disk_cy") cfg.disk_cy = parse_double(qual, val);
        else if (qual == "initial.phase_file") cfg.phase_file = val;
        else if (qual == "initial.velocity") {
            if (val == "zero") cfg.velocity = VelocityInit::Zero;
            else if (val == "shear") cfg.velocity = VelocityInit::Shear;
            else if (val == "file") cfg.velocity = VelocityInit::File;
            else throw ConfigError("initial.velocity must be zero|shear|file");
        }
        else if (qual == "initial.velocity_amplitude") cfg.velocity_amplitude = parse_double(qual, val);
        else if (qual == "initial.velocity_file_x") cfg.velocity_file_x = val;
        else if (qual == "initial.velocity_file_y") cfg.velocity_file_y = val;
        else if (qual == "initial.seed") cfg.seed = static_cast<std::uint64_t>(parse_int(qual, val));
        else if (qual == "output.directory") cfg.directory = val;
        else if (qual == "output.dump_every") cfg.dump_every = static_cast<int>(parse_int(qual, val));
        else if (qual == "output.ledger_path") cfg.ledger_path = val;
        else if (qual == "output.anneal_trace") cfg.anneal_trace_path = val;
        else throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
    }

    // Validation.
    if (cfg.n < 8 || (cfg.n & (cfg.n - 1)) != 0) throw ConfigError("grid.n must be a power of two >= 8");
    if (!(cfg.L > 0.0)) throw ConfigError("grid.L must be positive");
    if (!(cfg.h > 0.0)) throw ConfigError("scheme.h must be positive");
    if (!have_T || !(cfg.T > 0.0)) throw ConfigError("scheme.T must be set and positive");
    if (!(cfg.nu_minus > 0.0) || !(cfg.nu_plus > 0.0)) throw ConfigError("viscosities must be positive");
    if (!(cfg.kappa > 0.0) || !(cfg.m > 0.0)) throw ConfigError("kappa and m must be positive");
    if (cfg.anneal.sweeps < 1) throw ConfigError("scheme.sweeps must be >= 1");
    if (!(cfg.anneal.temp_init > 0.0)) throw ConfigError("scheme.temp_init must be positive");
    if (!(cfg.anneal.temp_decay > 0.0 && cfg.anneal.temp_decay < 1.0))
        throw ConfigError("scheme.temp_decay must lie in (0,1)");
    if (cfg.anneal.no_improve_window < 1) throw ConfigError("scheme.no_improve_window must be >= 1");
    if (!(cfg.picard_tol > 0.0) || !(cfg.cg_tol > 0.0)) throw ConfigError("solver tolerances must be positive");
    if (cfg.picard_max < 1 || cfg.cg_max < 1) throw ConfigError("solver iteration caps must be >= 1");
    if (cfg.stripe_fraction < 0.0 || cfg.stripe_fraction > 1.0)
        throw ConfigError("initial.stripe_fraction must lie in [0,1]");
    if (cfg.phase_shape == PhaseShape::Disk && !(cfg.disk_radius > 0.0))
        throw ConfigError("initial.disk_radius must be positive");
    if (cfg.phase_shape == PhaseShape::File && cfg.phase_file.empty())
        throw ConfigError("initial.phase_file required for phase_shape = file");
    if (cfg.velocity == VelocityInit::File && (cfg.velocity_file_x.empty() || cfg.velocity_file_y.empty()))
        throw ConfigError("initial.velocity_file_x/_y required for velocity = file");
    if (cfg.dump_every < 0) throw ConfigError("output.dump_every must be >= 0");
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace nsms
