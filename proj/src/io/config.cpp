#include "vscbeat/io/config.hpp"

#include "vscbeat/errors.hpp"
#include "vscbeat/format.hpp"

#include <toml.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace vscbeat::io {

namespace {

std::string located(const toml::node& node, std::string_view path, std::string_view what)
{
    std::string msg = std::string(path) + ": " + std::string(what);
    if (node.source().begin.line) msg += " (line " + std::to_string(node.source().begin.line) + ")";
    return msg;
}

[[noreturn]] void reject(const toml::node& node, std::string_view path, std::string_view what)
{
    fail(ErrorKind::Config, located(node, path, what));
}

class Table {
public:
    Table(const toml::table& table, std::string path) : table_(table), path_(std::move(path)) {}

    std::string child(std::string_view key) const { return path_.empty() ? std::string(key) : path_ + "." + std::string(key); }

    const toml::node* find(std::string_view key) const { return table_.get(key); }

    template <class T>
    bool read(std::string_view key, T& out) const
    {
        const toml::node* node = find(key);
        if (!node) return false;
        if constexpr (std::is_same_v<T, double>) {
            auto v = node->value<double>();
            if (!v || !std::isfinite(*v)) reject(*node, child(key), "expected a finite number");
            out = *v;
        } else if constexpr (std::is_same_v<T, bool>) {
            auto v = node->value<bool>();
            if (!v) reject(*node, child(key), "expected true or false");
            out = *v;
        } else if constexpr (std::is_same_v<T, std::string>) {
            auto v = node->value<std::string>();
            if (!v) reject(*node, child(key), "expected a string");
            out = *v;
        } else {
            auto v = node->value<std::int64_t>();
            if (!v || *v < 0) reject(*node, child(key), "expected a non-negative integer");
            out = static_cast<T>(*v);
        }
        return true;
    }

    std::vector<double> numbers(std::string_view key) const
    {
        const toml::node* node = find(key);
        const toml::array* arr = node ? node->as_array() : nullptr;
        if (!arr) reject(*node, child(key), "expected an array of numbers");
        std::vector<double> out;
        for (const toml::node& item : *arr) {
            auto v = item.value<double>();
            if (!v || !std::isfinite(*v)) reject(item, child(key), "expected finite numbers");
            out.push_back(*v);
        }
        return out;
    }

    const toml::table* subtable(std::string_view key) const
    {
        const toml::node* node = find(key);
        if (!node) return nullptr;
        if (!node->is_table()) reject(*node, child(key), "expected a table");
        return node->as_table();
    }

    void only(std::initializer_list<std::string_view> allowed) const
    {
        for (const auto& [key, node] : table_) {
            bool ok = false;
            for (std::string_view a : allowed) ok = ok || key.str() == a;
            if (!ok) reject(node, child(key.str()), "unknown key");
        }
    }

    const toml::table& raw() const { return table_; }

private:
    const toml::table& table_;
    std::string path_;
};

void read_si(const Table& si, RunConfig& cfg)
{
    si.only({"freq_thz", "cavity_freq_thz", "area_um2", "length_um", "mass_me", "dipole_e", "n"});
    double freq = 0.0;
    if (!si.read("freq_thz", freq)) fail(ErrorKind::Config, si.child("freq_thz") + ": required");
    double cavity = freq;
    double area_um2 = 1.0;
    double mass_me = 4000.0;
    double dipole_e = 1.0;
    double n_real = 0.0;
    si.read("cavity_freq_thz", cavity);
    si.read("area_um2", area_um2);
    si.read("mass_me", mass_me);
    si.read("dipole_e", dipole_e);
    if (!si.read("n", n_real)) fail(ErrorKind::Config, si.child("n") + ": required");
    if (n_real < 1.0 || n_real != std::floor(n_real)) fail(ErrorKind::Config, si.child("n") + ": must be a positive integer");

    const PhysicalConstants k;
    CavityGeometry geometry;
    double length_um = 0.0;
    if (si.read("length_um", length_um))
        geometry = CavityGeometry::from_dimensions(area_um2 * 1e-12, length_um * 1e-6);
    else
        geometry = CavityGeometry::from_frequency(k, area_um2 * 1e-12, 2.0 * 3.14159265358979323846 * cavity * 1e12);
    const double x0 = cfg.params.x0;
    cfg.params = from_si(k, geometry, freq, mass_me, dipole_e, static_cast<std::size_t>(n_real));
    cfg.params.x0 = x0;
}

// Returns whether n was given explicitly.
bool read_params(const Table& params, RunConfig& cfg)
{
    params.only({"omega_v", "omega", "omega_c", "omega_d", "n", "mass", "x0", "si"});
    params.read("x0", cfg.params.x0);
    if (const toml::table* si = params.subtable("si")) {
        for (std::string_view key : {"omega_v", "omega", "omega_c", "omega_d", "n", "mass"})
            if (const toml::node* node = params.find(key))
                reject(*node, params.child(key), "natural-unit parameters conflict with the params.si block");
        read_si(Table(*si, params.child("si")), cfg);
        return true;
    }
    params.read("omega_v", cfg.params.omega_v);
    params.read("omega", cfg.params.omega_c);
    params.read("omega_c", cfg.params.omega_c);
    params.read("omega_d", cfg.params.omega_d);
    params.read("n", cfg.params.n_molecules);
    params.read("mass", cfg.params.mass);
    return params.find("n") != nullptr;
}

void read_scenario(const Table& sc, RunConfig& cfg, bool n_explicit)
{
    sc.only({"kind", "beta", "x0", "velocity_scale", "displacements", "velocities"});
    std::string kind = sc.find("beta") ? "partial" : "fully_excited";
    if (sc.find("displacements")) kind = "custom";
    sc.read("kind", kind);
    double x0 = cfg.params.x0;
    sc.read("x0", x0);
    if (kind == "fully_excited") {
        FullyExcited s;
        s.x0 = x0;
        sc.read("velocity_scale", s.velocity_scale);
        cfg.scenario.kind = s;
    } else if (kind == "partial") {
        PartiallyActivated s;
        s.x0 = x0;
        sc.read("beta", s.beta);
        cfg.scenario.kind = s;
    } else if (kind == "custom") {
        Custom s;
        if (!sc.find("displacements")) fail(ErrorKind::Config, sc.child("displacements") + ": required for custom");
        s.ic.displacements = sc.numbers("displacements");
        s.ic.velocities = sc.find("velocities") ? sc.numbers("velocities")
                                                : std::vector<double>(s.ic.displacements.size(), 0.0);
        if (n_explicit && cfg.params.n_molecules != s.ic.displacements.size())
            reject(*sc.find("displacements"), sc.child("displacements"), "length differs from params.n");
        cfg.params.n_molecules = s.ic.displacements.size();
        cfg.scenario.kind = std::move(s);
    } else {
        reject(*sc.find("kind"), sc.child("kind"), "expected fully_excited, partial or custom");
    }
    cfg.params.x0 = x0;
}

void read_output(const Table& out, RunConfig& cfg)
{
    out.only({"dir", "span", "sampling", "outputs", "molecules", "svg"});
    std::string dir;
    if (out.read("dir", dir)) cfg.output_dir = dir;
    out.read("span", cfg.span);
    out.read("sampling", cfg.sampling);
    out.read("svg", cfg.svg);
    if (const toml::node* node = out.find("outputs")) {
        const toml::array* arr = node->as_array();
        if (!arr) reject(*node, out.child("outputs"), "expected an array of strings");
        cfg.outputs.clear();
        for (const toml::node& item : *arr) {
            auto name = item.value<std::string>();
            if (!name) reject(item, out.child("outputs"), "expected strings");
            try {
                cfg.outputs.insert(parse_output(*name));
            } catch (const Error& e) {
                reject(item, out.child("outputs"), e.what());
            }
        }
    }
    if (const toml::node* node = out.find("molecules")) {
        const toml::array* arr = node->as_array();
        if (!arr) reject(*node, out.child("molecules"), "expected an array of 1-based indices");
        cfg.molecules.clear();
        for (const toml::node& item : *arr) {
            auto v = item.value<std::int64_t>();
            if (!v || *v < 1) reject(item, out.child("molecules"), "indices are 1-based positive integers");
            cfg.molecules.push_back(static_cast<std::size_t>(*v - 1));
        }
    }
}

} // namespace

const char* to_string(Output output) noexcept
{
    switch (output) {
    case Output::Trajectory: return "trajectory";
    case Output::Observables: return "observables";
    case Output::PhaseSpace: return "phase_space";
    case Output::Energies: return "energies";
    }
    return "?";
}

Output parse_output(std::string_view name)
{
    for (Output o : {Output::Trajectory, Output::Observables, Output::PhaseSpace, Output::Energies})
        if (name == to_string(o)) return o;
    fail(ErrorKind::Config, "unknown output '" + std::string(name) +
                                "' (expected trajectory, observables, phase_space or energies)");
}

RunConfig::RunConfig()
{
    params.n_molecules = kDefaultConfigMolecules;
    scenario.n_molecules = kDefaultConfigMolecules;
}

void RunConfig::finalize()
{
    scenario.n_molecules = params.n_molecules;
    if (auto* fe = std::get_if<FullyExcited>(&scenario.kind)) fe->seed = seed;
    require(std::isfinite(span) && span > 0.0, ErrorKind::Config, "output.span: must be > 0");
    require(sampling >= 4, ErrorKind::Config, "output.sampling: must be >= 4");
    if (molecules.empty()) molecules.push_back(0);
    for (std::size_t m : molecules)
        require(m < params.n_molecules, ErrorKind::Config,
                "output.molecules: index " + std::to_string(m + 1) + " exceeds n = " +
                    std::to_string(params.n_molecules));
    try {
        params.validate();
        scenario.validate();
    } catch (const Error& e) {
        fail(ErrorKind::Config, std::string("params: ") + e.what());
    }
}

RunConfig parse_config(std::string_view text, std::string_view source)
{
    toml::table root;
    try {
        root = toml::parse(text, source);
    } catch (const toml::parse_error& e) {
        fail(ErrorKind::Config, std::string(source) + ":" + std::to_string(e.source().begin.line) + ": " +
                                    std::string(e.description()));
    }

    RunConfig cfg;
    const Table top(root, "");
    top.only({"seed", "params", "scenario", "output"});
    top.read("seed", cfg.seed);
    bool n_explicit = false;
    if (const toml::table* p = top.subtable("params")) n_explicit = read_params(Table(*p, "params"), cfg);
    if (const toml::table* s = top.subtable("scenario")) read_scenario(Table(*s, "scenario"), cfg, n_explicit);
    if (const toml::table* o = top.subtable("output")) read_output(Table(*o, "output"), cfg);
    cfg.finalize();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorKind::Config, "cannot open config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path.string());
}

std::vector<std::string> output_header(const RunConfig& config)
{
    std::vector<std::string> lines;
    lines.push_back(std::string("# tool: vscbeat ") + VSCBEAT_VERSION);
    lines.push_back("# params: " + describe(config.params));
    if (config.params.si) {
        const SiSummary si = to_si(config.params);
        lines.push_back("# si: freq_thz=" + shortest(si.freq_thz) + " cavity_freq_thz=" + shortest(si.cavity_freq_thz) +
                        " omega_d_rad_s=" + shortest(si.omega_d_rad_s) + " mass_me=" + shortest(si.mass_me) +
                        " dipole_e=" + shortest(si.dipole_e) + " n=" + std::to_string(si.n));
    }
    lines.push_back("# scenario: " + config.scenario.describe());
    lines.push_back("# span_beats: " + shortest(config.span));
    lines.push_back("# samples_per_period: " + std::to_string(config.sampling));
    lines.push_back("# seed: " + std::to_string(config.seed));
    return lines;
}

} // namespace vscbeat::io
