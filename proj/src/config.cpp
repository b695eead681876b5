#include "rtm/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rtm {

namespace {

const std::map<std::string, std::string> kDefaults = {
    {"surface.kind", "f1"},
    {"surface.file", ""},
    {"surface.halfwidth", "1"},
    {"surface.R", "20"},
    {"medium.kind", "D"},
    {"medium.kappa1", "5"},
    {"medium.kappa2", "2.5"},
    {"acquisition.regime", "near"},
    {"acquisition.Rs", "30"},
    {"acquisition.Rr", "40"},
    {"acquisition.Ns", "64"},
    {"acquisition.Nr", "64"},
    {"solver.nodes_per_wavelength", "10"},
    {"solver.background_nodes_per_wavelength", "10"},
    {"solver.wing_wavelengths", "4"},
    {"solver.grading_levels", "4"},
    {"imaging.x1min", "-5"},
    {"imaging.x1max", "5"},
    {"imaging.x2min", "-1.5"},
    {"imaging.x2max", "1.0"},
    {"imaging.n1", "128"},
    {"imaging.n2", "32"},
    {"noise.tau", "0"},
    {"noise.seed", "1"},
};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

RunConfig::RunConfig() {
    values_ = kDefaults;
    for (const auto& [k, v] : kDefaults) provenance_[k] = "default";
}

void RunConfig::apply_preset(const std::string& name) {
    if (name == "desk-scale") {
        for (const auto& [k, v] : kDefaults) set(k, v, "preset");
        return;
    }
    if (name == "paper-scale") {
        set("surface.R", "95", "preset");
        set("medium.kappa1", "10", "preset");
        set("medium.kappa2", "5", "preset");
        set("acquisition.Rs", "110", "preset");
        set("acquisition.Rr", "120", "preset");
        set("acquisition.Ns", "1024", "preset");
        set("acquisition.Nr", "1024", "preset");
        return;
    }
    throw ConfigError("unknown preset: " + name);
}

void RunConfig::set(const std::string& key, const std::string& value,
                    const std::string& provenance) {
    if (kDefaults.find(key) == kDefaults.end())
        throw ConfigError("unknown configuration key: " + key);
    values_[key] = value;
    provenance_[key] = provenance;
}

void RunConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = section + "." + trim(line.substr(0, eq));
        set(key, trim(line.substr(eq + 1)), "file");
    }
}

std::string RunConfig::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown configuration key: " + key);
    return it->second;
}

double RunConfig::get_num(const std::string& key) const {
    const std::string v = get(key);
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw ConfigError("key " + key + ": not a number: " + v);
    return x;
}

int RunConfig::get_int(const std::string& key) const {
    const double x = get_num(key);
    if (x != std::floor(x)) throw ConfigError("key " + key + ": not an integer");
    return static_cast<int>(x);
}

std::string RunConfig::resolved_listing() const {
    std::ostringstream os;
    os << "resolved configuration (key = value  [provenance]):\n";
    for (const auto& [k, v] : values_)
        os << "  " << k << " = " << (v.empty() ? "(empty)" : v) << "  [" << provenance_.at(k)
           << "]\n";
    return os.str();
}

SurfaceProfile RunConfig::make_profile() const {
    const std::string kind = get("surface.kind");
    if (kind == "flat") return SurfaceProfile::flat(get_num("surface.halfwidth"));
    if (kind == "f1") return SurfaceProfile::f1();
    if (kind == "f2") return SurfaceProfile::f2();
    if (kind == "f3") return SurfaceProfile::f3();
    if (kind == "gammaR-dip") return SurfaceProfile::gammaR_dip(get_num("surface.R"));
    if (kind == "tabulated") return SurfaceProfile::tabulated(get("surface.file"));
    throw ConfigError("surface.kind must be one of flat|f1|f2|f3|gammaR-dip|tabulated");
}

SurfaceKind RunConfig::surface_kind() const {
    const std::string k = get("medium.kind");
    if (k == "D") return SurfaceKind::Dirichlet;
    if (k == "N") return SurfaceKind::Neumann;
    if (k == "P") return SurfaceKind::Penetrable;
    throw ConfigError("medium.kind must be D, N or P");
}

Regime RunConfig::regime() const {
    const std::string r = get("acquisition.regime");
    if (r == "near") return Regime::Near;
    if (r == "far") return Regime::Far;
    throw ConfigError("acquisition.regime must be near or far");
}

ForwardConfig RunConfig::make_forward() const {
    ForwardConfig f;
    f.profile = make_profile();
    f.kind = surface_kind();
    f.regime = regime();
    f.k1 = get_num("medium.kappa1");
    f.k2 = get_num("medium.kappa2");
    f.R = get_num("surface.R");
    f.R_s = get_num("acquisition.Rs");
    f.R_r = get_num("acquisition.Rr");
    f.N_s = get_int("acquisition.Ns");
    f.N_r = get_int("acquisition.Nr");
    f.nodes_per_wavelength = get_num("solver.nodes_per_wavelength");
    f.wing_wavelengths = get_num("solver.wing_wavelengths");
    f.grading_levels = get_int("solver.grading_levels");
    f.tau = get_num("noise.tau");
    f.seed = static_cast<std::uint64_t>(get_num("noise.seed"));
    if (!(f.k1 > 0)) throw ConfigError("medium.kappa1 must be > 0");
    if (f.kind == SurfaceKind::Penetrable && !(f.k2 > 0))
        throw ConfigError("medium.kappa2 must be > 0");
    if (!(f.R > 0)) throw ConfigError("surface.R must be > 0");
    if (f.regime == Regime::Near && !(f.R < f.R_s && f.R_s <= f.R_r))
        throw ConfigError("acquisition radii must satisfy R < Rs <= Rr");
    if (f.N_s < 2 || f.N_r < 2) throw ConfigError("acquisition.Ns and Nr must be >= 2");
    if (f.tau < 0) throw ConfigError("noise.tau must be >= 0");
    return f;
}

ImageGrid RunConfig::make_grid() const {
    return ImageGrid(get_num("imaging.x1min"), get_num("imaging.x1max"), get_num("imaging.x2min"),
                     get_num("imaging.x2max"), get_int("imaging.n1"), get_int("imaging.n2"));
}

IndicatorConfig RunConfig::make_indicator() const {
    IndicatorConfig c;
    c.kind = surface_kind();
    c.regime = regime();
    c.grid = make_grid();
    c.nodes_per_wavelength = get_num("solver.background_nodes_per_wavelength");
    c.grading_levels = get_int("solver.grading_levels");
    return c;
}

void RunConfig::check_data_header(const ScatterData& d) const {
    auto near = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); };
    if (d.kind != surface_kind()) throw ConfigError("data header: medium.kind mismatch");
    if (d.regime != regime()) throw ConfigError("data header: acquisition.regime mismatch");
    if (!near(d.k1, get_num("medium.kappa1"))) throw ConfigError("data header: kappa1 mismatch");
    if (d.kind == SurfaceKind::Penetrable && !near(d.k2, get_num("medium.kappa2")))
        throw ConfigError("data header: kappa2 mismatch");
    if (!near(d.R, get_num("surface.R"))) throw ConfigError("data header: R mismatch");
    if (d.regime == Regime::Near) {
        if (!near(d.R_s, get_num("acquisition.Rs"))) throw ConfigError("data header: Rs mismatch");
        if (!near(d.R_r, get_num("acquisition.Rr"))) throw ConfigError("data header: Rr mismatch");
    }
    if (d.N_s != get_int("acquisition.Ns")) throw ConfigError("data header: Ns mismatch");
    if (d.N_r != get_int("acquisition.Nr")) throw ConfigError("data header: Nr mismatch");
}

}  // namespace rtm
