#include "vscbeat/io/cli.hpp"

#include "vscbeat/envelope.hpp"
#include "vscbeat/errors.hpp"
#include "vscbeat/format.hpp"
#include "vscbeat/io/config.hpp"
#include "vscbeat/io/csv.hpp"
#include "vscbeat/io/figures.hpp"
#include "vscbeat/io/svg.hpp"
#include "vscbeat/io/verify.hpp"
#include "vscbeat/kernels.hpp"
#include "vscbeat/oracle.hpp"
#include "vscbeat/scenarios.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

namespace vscbeat::io {

namespace {

using nlohmann::ordered_json;

// Flags shared by commands that build a RunConfig; each overrides the config file.
struct RunFlags {
    std::string config;
    double omega_v = 1.0, omega = 1.0, omega_d = 0.1, mass = 1.0, x0 = 1.0;
    std::size_t n = kDefaultConfigMolecules;
    double si_freq = 1.0, si_cavity = 0.0, si_area = 1.0, si_mass = 4000.0, si_dipole = 1.0, si_n = 0.0;
    std::string scenario;
    double beta = 0.2, velocity_scale = 0.0;
    std::uint64_t seed = 0;
    double span = 2.0;
    std::size_t sampling = 64;
    std::vector<std::size_t> molecules; // 1-based
    std::vector<std::string> outputs;
    std::string output_dir;
    bool svg = false;

    std::map<std::string, CLI::Option*> opt;

    void add_params(CLI::App& app)
    {
        opt["config"] = app.add_option("--config", config, "TOML run configuration")->check(CLI::ExistingFile);
        opt["omega-v"] = app.add_option("--omega-v", omega_v, "bare vibrational frequency");
        opt["omega"] = app.add_option("--omega", omega, "cavity frequency");
        opt["omega-d"] = app.add_option("--omega-d", omega_d, "diamagnetic frequency (collective coupling)");
        opt["n"] = app.add_option("--n", n, "number of molecules");
        opt["mass"] = app.add_option("--mass", mass, "molecular mass");
        opt["si-freq-thz"] = app.add_option("--si-freq-thz", si_freq, "vibrational frequency in THz (SI mode)");
        opt["si-cavity-freq-thz"] = app.add_option("--si-cavity-freq-thz", si_cavity, "cavity frequency in THz");
        opt["si-area-um2"] = app.add_option("--si-area-um2", si_area, "mirror area in square micrometres");
        opt["si-mass-me"] = app.add_option("--si-mass-me", si_mass, "mass in electron masses");
        opt["si-dipole-e"] = app.add_option("--si-dipole-e", si_dipole, "dipole derivative in elementary charges");
        opt["si-n"] = app.add_option("--si-n", si_n, "number of molecules (SI mode)");
    }

    void add_run(CLI::App& app)
    {
        add_params(app);
        opt["x0"] = app.add_option("--x0", x0, "initial displacement");
        opt["scenario"] = app.add_option("--scenario", scenario, "fully_excited or partial")
                              ->check(CLI::IsMember({"fully_excited", "partial"}));
        opt["beta"] = app.add_option("--beta", beta, "activation ratio (implies --scenario partial)");
        opt["velocity-scale"] = app.add_option("--velocity-scale", velocity_scale, "velocity spread in x0 omega_v");
        opt["seed"] = app.add_option("--seed", seed, "random seed");
        opt["span"] = app.add_option("--span", span, "time span in beat periods");
        opt["sampling"] = app.add_option("--sampling", sampling, "samples per bare period");
        opt["molecules"] = app.add_option("--molecules", molecules, "1-based molecule indices to record")
                               ->delimiter(',');
        opt["outputs"] = app.add_option("--outputs", outputs, "trajectory,observables,phase_space,energies")
                             ->delimiter(',');
        add_output(app);
    }

    void add_output(CLI::App& app)
    {
        opt["output-dir"] = app.add_option("--output-dir", output_dir, "output directory");
        opt["svg"] = app.add_flag("--svg", svg, "also write SVG plots");
    }

    bool given(const std::string& name) const
    {
        const auto it = opt.find(name);
        return it != opt.end() && it->second->count() > 0;
    }

    bool si_given() const
    {
        for (const char* k : {"si-freq-thz", "si-cavity-freq-thz", "si-area-um2", "si-mass-me", "si-dipole-e", "si-n"})
            if (given(k)) return true;
        return false;
    }

    RunConfig resolve() const
    {
        RunConfig cfg = given("config") ? load_config(config) : RunConfig{};
        const bool natural = given("omega-v") || given("omega") || given("omega-d") || given("n");
        require(!(natural && si_given()), ErrorKind::Config,
                "natural-unit flags and --si-* flags are mutually exclusive");
        if (si_given()) {
            require(given("si-n"), ErrorKind::Config, "--si-n is required with --si-* flags");
            require(si_n >= 1.0 && si_n == std::floor(si_n), ErrorKind::Config, "--si-n must be a positive integer");
            const PhysicalConstants k;
            const double cavity = given("si-cavity-freq-thz") ? si_cavity : si_freq;
            const auto geometry =
                CavityGeometry::from_frequency(k, si_area * 1e-12, 2.0 * std::numbers::pi * cavity * 1e12);
            const double keep_x0 = cfg.params.x0;
            cfg.params = from_si(k, geometry, si_freq, si_mass, si_dipole, static_cast<std::size_t>(si_n));
            cfg.params.x0 = keep_x0;
        }
        if (natural && cfg.params.si) cfg.params.si.reset();
        if (given("omega-v")) cfg.params.omega_v = omega_v;
        if (given("omega")) cfg.params.omega_c = omega;
        if (given("omega-d")) cfg.params.omega_d = omega_d;
        if (given("n")) cfg.params.n_molecules = n;
        if (given("mass")) cfg.params.mass = mass;
        if (given("x0")) cfg.params.x0 = x0;

        std::string kind = scenario;
        if (kind.empty() && given("beta")) kind = "partial";
        if (kind.empty() && (given("velocity-scale") || given("x0"))) {
            if (std::holds_alternative<PartiallyActivated>(cfg.scenario.kind)) kind = "partial";
            else kind = "fully_excited";
        }
        if (kind == "partial") {
            PartiallyActivated s = std::holds_alternative<PartiallyActivated>(cfg.scenario.kind)
                                       ? std::get<PartiallyActivated>(cfg.scenario.kind)
                                       : PartiallyActivated{};
            if (given("beta")) s.beta = beta;
            s.x0 = cfg.params.x0;
            cfg.scenario.kind = s;
        } else if (kind == "fully_excited") {
            FullyExcited s = std::holds_alternative<FullyExcited>(cfg.scenario.kind)
                                 ? std::get<FullyExcited>(cfg.scenario.kind)
                                 : FullyExcited{};
            if (given("velocity-scale")) s.velocity_scale = velocity_scale;
            s.x0 = cfg.params.x0;
            cfg.scenario.kind = s;
        }
        if (given("seed")) cfg.seed = seed;
        if (given("span")) cfg.span = span;
        if (given("sampling")) cfg.sampling = sampling;
        if (given("svg")) cfg.svg = svg;
        if (given("molecules")) {
            cfg.molecules.clear();
            for (std::size_t m : molecules) {
                require(m >= 1, ErrorKind::Config, "--molecules are 1-based");
                cfg.molecules.push_back(m - 1);
            }
        }
        if (given("outputs")) {
            cfg.outputs.clear();
            for (const std::string& o : outputs) cfg.outputs.insert(parse_output(o));
        }
        if (given("output-dir")) cfg.output_dir = output_dir;
        cfg.finalize();
        return cfg;
    }
};

std::filesystem::path output_directory(const std::filesystem::path& chosen)
{
    if (!chosen.empty()) return chosen;
    if (const char* env = std::getenv("VSCBEAT_OUTPUT_DIR"); env && *env) return env;
    return ".";
}

std::string fixed12(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

ordered_json header_json(const std::vector<std::string>& lines)
{
    ordered_json h = ordered_json::object();
    for (const std::string& line : lines) {
        const std::string body = line.rfind("# ", 0) == 0 ? line.substr(2) : line;
        const auto colon = body.find(": ");
        if (colon == std::string::npos) continue;
        h[body.substr(0, colon)] = body.substr(colon + 2);
    }
    return h;
}

std::vector<std::string> strip_hash(std::vector<std::string> lines)
{
    for (std::string& l : lines)
        if (l.rfind("# ", 0) == 0) l = l.substr(2);
    return lines;
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorKind::InvalidInput, "cannot write " + path.string());
    out << text;
}

ordered_json opt_json(const std::optional<double>& v)
{
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

// ---- derive ---------------------------------------------------------------

int cmd_derive(const RunFlags& flags, bool as_json, std::ostream& out)
{
    const RunConfig cfg = flags.resolve();
    const SystemParams& p = cfg.params;
    const DerivedCoupling c = derive(p);
    std::vector<std::pair<std::string, std::string>> rows{
        {"omega_v", fixed12(p.omega_v)},       {"omega", fixed12(p.omega_c)},
        {"omega_d", fixed12(p.omega_d)},       {"n", std::to_string(p.n_molecules)},
        {"mass", fixed12(p.mass)},             {"g", fixed12(c.g)},
        {"omega_bar_sq", fixed12(c.omega_bar_sq)}, {"alpha", fixed12(c.alpha)},
        {"lambda", fixed12(c.lambda)},         {"omega_plus", fixed12(c.omega_plus)},
        {"omega_minus", fixed12(c.omega_minus)}, {"gap", fixed12(c.gap)},
        {"sum_freq", fixed12(c.sum_freq)},     {"vrs", fixed12(c.vrs)},
        {"vrs_paper", fixed12(c.vrs_paper)},   {"beat_period", fixed12(c.beat_period)},
        {"regime", to_string(c.regime)},
    };
    if (p.si) {
        const SiSummary si = to_si(p);
        rows.push_back({"si_freq_thz", fixed12(si.freq_thz)});
        rows.push_back({"si_cavity_freq_thz", fixed12(si.cavity_freq_thz)});
        rows.push_back({"si_omega_d_rad_s", fixed12(si.omega_d_rad_s)});
        rows.push_back({"si_mass_me", fixed12(si.mass_me)});
        rows.push_back({"si_dipole_e", fixed12(si.dipole_e)});
        rows.push_back({"vrs_over_omega_v", fixed12(c.vrs / p.omega_v)});
    }
    if (as_json) {
        ordered_json j = ordered_json::object();
        j["omega_v"] = p.omega_v;
        j["omega"] = p.omega_c;
        j["omega_d"] = p.omega_d;
        j["n"] = p.n_molecules;
        j["mass"] = p.mass;
        j["g"] = c.g;
        j["omega_bar_sq"] = c.omega_bar_sq;
        j["alpha"] = c.alpha;
        j["lambda"] = c.lambda;
        j["omega_plus"] = c.omega_plus;
        j["omega_minus"] = c.omega_minus;
        j["gap"] = c.gap;
        j["sum_freq"] = c.sum_freq;
        j["vrs"] = c.vrs;
        j["vrs_paper"] = c.vrs_paper;
        j["beat_period"] = c.beat_period;
        j["regime"] = to_string(c.regime);
        out << j.dump(2) << '\n';
        return kExitOk;
    }
    for (const auto& [k, v] : rows) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%-20s %s\n", k.c_str(), v.c_str());
        out << buf;
    }
    return kExitOk;
}

// ---- simulate -------------------------------------------------------------

struct SimulateFlags {
    bool oracle = false;
    int order = kDefaultIntegratorOrder;
    double steps_per_period = kDefaultStepsPerPeriod;
};

Trajectory run_trajectory(const RunConfig& cfg, const InitialConditions& ic, const SimulateFlags& sim,
                          std::span<const std::size_t> molecules)
{
    const DerivedCoupling coupling = derive(cfg.params);
    const TimeGrid grid = TimeGrid::sampled(cfg.span * coupling.beat_period, cfg.params.omega_v, cfg.sampling);
    if (!sim.oracle) return ClosedFormModel(ic, cfg.params).sample(grid, molecules);

    require(sim.steps_per_period >= kMinStepsPerPeriod, ErrorKind::StepSizeTooLarge,
            "--steps-per-period " + shortest(sim.steps_per_period) + " is below the minimum of 50");
    // Integrate on a step that divides the sample spacing.
    const double dt_max = step_for_resolution(coupling, sim.steps_per_period);
    IntegratorOptions opts;
    opts.order = sim.order;
    opts.sample_every = static_cast<std::size_t>(std::ceil(grid.dt / dt_max - 1e-9));
    opts.dt = grid.dt / static_cast<double>(opts.sample_every);
    opts.record_all = false;
    opts.molecules.assign(molecules.begin(), molecules.end());
    return integrate(ic, cfg.params, coupling, grid.end() > 0 ? grid.end() : grid.dt, opts);
}

int cmd_simulate(const RunFlags& flags, const SimulateFlags& sim, std::ostream& out)
{
    const RunConfig cfg = flags.resolve();
    std::vector<Warning> warnings;
    const InitialConditions ic = build_initial_conditions(cfg.scenario, cfg.params, &warnings);
    for (Warning w : warnings) out << "warning: " << to_string(w) << '\n';

    const bool energies = cfg.outputs.contains(Output::Energies);
    std::vector<std::size_t> recorded = cfg.molecules;
    if (energies) {
        recorded.resize(cfg.params.n_molecules);
        for (std::size_t i = 0; i < recorded.size(); ++i) recorded[i] = i;
    }
    const Trajectory traj = run_trajectory(cfg, ic, sim, recorded);
    const DerivedCoupling coupling = derive(cfg.params);
    const std::filesystem::path dir = output_directory(cfg.output_dir);

    std::vector<std::string> header = output_header(cfg);
    header.push_back("# generator: " + std::string(sim.oracle ? "oracle order=" + std::to_string(sim.order) +
                                                                    " steps_per_period=" + shortest(sim.steps_per_period)
                                                              : "closed_form"));

    if (cfg.outputs.contains(Output::Trajectory)) {
        const auto path = dir / "trajectory.csv";
        write_csv(path, trajectory_table(traj, cfg.molecules, strip_hash(header)));
        out << "wrote " << path.string() << '\n';
        if (cfg.svg) {
            Plot plot{"trajectory", "t omega_v", "coordinate", {{"X", traj.times, traj.collective_x}}};
            for (std::size_t m : cfg.molecules)
                plot.series.push_back({"x_" + std::to_string(m + 1), traj.times, traj.locals.at(m)});
            write_svg(dir / "trajectory.svg", plot);
        }
    }
    if (cfg.outputs.contains(Output::Observables)) {
        const ClosedFormModel model(ic, cfg.params);
        const MeasuredBeat beat = measure_collective(traj, cfg.params);
        ordered_json j = ordered_json::object();
        j["header"] = header_json(header);
        j["beat_period_analytic"] = coupling.beat_period;
        j["beat_period_measured"] = opt_json(beat.period);
        j["measure_method"] = beat.method;
        j["measure_status"] = beat.status;
        j["envelope_min"] = exact_envelope_min(model);
        j["envelope_min_measured"] = opt_json(beat.envelope_min);
        const auto path = dir / "observables.json";
        write_text(path, j.dump(2) + "\n");
        out << "wrote " << path.string() << '\n';
    }
    if (energies) {
        const EnergySeries e = energy_partition(traj, cfg.params, coupling.g, excited_set(cfg.scenario, ic));
        CsvTable t;
        t.comments = strip_hash(header);
        t.columns = {"t", "excited", "ground", "cavity", "total"};
        for (std::size_t k = 0; k < e.times.size(); ++k)
            t.rows.push_back({e.times[k], e.excited[k], e.ground[k], e.cavity[k], e.total[k]});
        const auto path = dir / "energies.csv";
        write_csv(path, t);
        out << "wrote " << path.string() << '\n';
        if (cfg.svg)
            write_svg(dir / "energies.svg", {"energy partition", "t omega_v", "energy",
                                             {{"excited", e.times, e.excited},
                                              {"ground", e.times, e.ground},
                                              {"cavity", e.times, e.cavity},
                                              {"total", e.times, e.total}}});
    }
    if (cfg.outputs.contains(Output::PhaseSpace)) {
        CsvTable t;
        t.comments = strip_hash(header);
        t.columns = {"molecule", "t", "x", "p", "x_uncoupled", "p_uncoupled"};
        for (std::size_t m : cfg.molecules) {
            const auto pts = phase_space_samples(traj, m, traj.times, cfg.params);
            const auto ref = uncoupled_phase_samples(ic.displacements[m], ic.velocities[m], cfg.params, traj.times);
            for (std::size_t k = 0; k < pts.size(); ++k)
                t.rows.push_back({static_cast<double>(m + 1), pts[k].time, pts[k].x, pts[k].p_scaled, ref[k].x,
                                  ref[k].p_scaled});
        }
        const auto path = dir / "phase_space.csv";
        write_csv(path, t);
        out << "wrote " << path.string() << '\n';
    }
    return kExitOk;
}

// ---- sweep ----------------------------------------------------------------

struct SweepFlags {
    double from = 0.5, to = 2.0, step = 0.0025;
    std::vector<double> grid;
    std::string measure = "analytic";
    std::size_t threads = 1;
};

std::string csv_field(std::string text)
{
    std::replace(text.begin(), text.end(), ',', ';');
    return text;
}

int cmd_sweep(const RunFlags& flags, const SweepFlags& sw, std::ostream& out)
{
    const RunConfig cfg = flags.resolve();
    SweepSpec spec;
    spec.omega_d = cfg.params.omega_d;
    spec.scenario = cfg.scenario;
    spec.threads = sw.threads;
    spec.measure = sw.measure == "analytic" ? Measure::Analytic
                   : sw.measure == "trajectory" ? Measure::FromTrajectory
                                                : Measure::Both;
    if (!sw.grid.empty()) {
        spec.detuning_grid = sw.grid;
    } else {
        require(sw.step > 0.0 && sw.to > sw.from, ErrorKind::InvalidInput, "need --to > --from and --step > 0");
        const auto count = static_cast<std::size_t>(std::floor((sw.to - sw.from) / sw.step + 1e-9));
        for (std::size_t i = 0; i <= count; ++i) spec.detuning_grid.push_back(sw.from + sw.step * static_cast<double>(i));
    }
    const std::vector<SweepRow> rows = detuning_sweep(spec, cfg.params);

    const std::filesystem::path dir = output_directory(cfg.output_dir);
    std::ostringstream csv;
    for (const std::string& line : output_header(cfg)) csv << line << '\n';
    csv << "# measure: " << sw.measure << '\n';
    csv << "omega_ratio,gap,T_analytic,T_measured,envelope_min,method,status\n";
    for (const SweepRow& r : rows)
        csv << shortest(r.ratio) << ',' << shortest(r.gap) << ',' << shortest(r.beat_period_analytic) << ','
            << (r.beat_period_measured ? shortest(*r.beat_period_measured) : "") << ',' << shortest(r.envelope_min)
            << ',' << r.method << ',' << csv_field(r.status) << '\n';
    const auto path = dir / "sweep.csv";
    write_text(path, csv.str());
    out << "wrote " << path.string() << '\n';
    if (cfg.svg) {
        PlotSeries s{"T analytic", {}, {}};
        for (const SweepRow& r : rows) {
            s.x.push_back(r.ratio);
            s.y.push_back(r.beat_period_analytic);
        }
        write_svg(dir / "sweep.svg", {"beat period vs detuning", "omega / omega_v", "T omega_v", {s}});
    }
    return kExitOk;
}

// ---- phase-space ----------------------------------------------------------

struct PhaseFlags {
    std::vector<double> times;
    double t_end = 0.0;
    std::size_t count = 0;
    bool uncoupled = true;
};

int cmd_phase(const RunFlags& flags, const PhaseFlags& ph, std::ostream& out)
{
    const RunConfig cfg = flags.resolve();
    const InitialConditions ic = build_initial_conditions(cfg.scenario, cfg.params);
    const ClosedFormModel model(ic, cfg.params);
    std::vector<double> times = ph.times;
    if (times.empty()) {
        const double t_end = ph.t_end > 0.0 ? ph.t_end : cfg.span * model.coupling().beat_period;
        const std::size_t count =
            ph.count > 1 ? ph.count
                         : static_cast<std::size_t>(std::ceil(t_end * cfg.params.omega_v / (2.0 * std::numbers::pi) *
                                                              static_cast<double>(cfg.sampling))) + 1;
        for (std::size_t k = 0; k < count; ++k) times.push_back(t_end * static_cast<double>(k) / static_cast<double>(count - 1));
    }
    CsvTable t;
    t.comments = strip_hash(output_header(cfg));
    t.columns = {"molecule", "t", "x", "p", "x_uncoupled", "p_uncoupled"};
    Plot plot{"phase space", "x", "p / (m omega_v)", {}};
    for (std::size_t m : cfg.molecules) {
        const auto pts = phase_space_samples(model, m, times);
        const auto ref = uncoupled_phase_samples(ic.displacements[m], ic.velocities[m], cfg.params, times);
        PlotSeries s{"molecule " + std::to_string(m + 1), {}, {}};
        for (std::size_t k = 0; k < pts.size(); ++k) {
            t.rows.push_back({static_cast<double>(m + 1), pts[k].time, pts[k].x, pts[k].p_scaled, ref[k].x,
                              ref[k].p_scaled});
            s.x.push_back(pts[k].x);
            s.y.push_back(pts[k].p_scaled);
        }
        plot.series.push_back(std::move(s));
    }
    const std::filesystem::path dir = output_directory(cfg.output_dir);
    const auto path = dir / "phase_space.csv";
    write_csv(path, t);
    out << "wrote " << path.string() << '\n';
    if (cfg.svg) write_svg(dir / "phase_space.svg", plot);
    return kExitOk;
}

// ---- figures --------------------------------------------------------------

int cmd_figures(std::vector<std::string> ids, const FigureOptions& fo, const std::string& output_dir, bool svg,
                std::ostream& out)
{
    if (ids.empty() || (ids.size() == 1 && ids[0] == "all")) ids = figure_ids();
    const std::filesystem::path dir = output_directory(output_dir);
    for (const std::string& id : ids) {
        const FigureDataset f = make_figure(id, fo);
        const auto path = dir / ("fig" + id + ".csv");
        write_csv(path, f.table);
        out << "wrote " << path.string() << '\n';
        if (svg) write_svg(dir / ("fig" + id + ".svg"), f.plot);
    }
    return kExitOk;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Collective vibrational strong coupling: polariton beats, reference integrator and figure data",
                 "vscbeat"};
    app.set_version_flag("--version", std::string(VSCBEAT_VERSION));
    app.require_subcommand(1);
    std::string simd;
    app.add_option("--simd", simd, "kernel backend (scalar or avx2)")->check(CLI::IsMember({"scalar", "avx2"}));

    RunFlags derive_flags;
    bool derive_json = false;
    auto* derive_cmd = app.add_subcommand("derive", "print the derived coupling quantities");
    derive_flags.add_params(*derive_cmd);
    derive_cmd->add_flag("--json", derive_json, "print JSON instead of a table");

    RunFlags sim_flags;
    SimulateFlags sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "write a trajectory and its observables");
    sim_flags.add_run(*simulate_cmd);
    simulate_cmd->add_flag("--oracle", sim.oracle, "integrate the full equations of motion instead of the closed form");
    simulate_cmd->add_option("--order", sim.order, "integrator order")->check(CLI::IsMember({2, 4, 6, 8}));
    simulate_cmd->add_option("--steps-per-period", sim.steps_per_period, "integrator steps per upper-polariton period");

    RunFlags sweep_flags;
    SweepFlags sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "beat period across cavity detunings");
    sweep_flags.add_run(*sweep_cmd);
    sweep_cmd->add_option("--from", sw.from, "first omega/omega_v");
    sweep_cmd->add_option("--to", sw.to, "last omega/omega_v");
    sweep_cmd->add_option("--step", sw.step, "grid step");
    sweep_cmd->add_option("--grid", sw.grid, "explicit omega/omega_v values")->delimiter(',');
    sweep_cmd->add_option("--measure", sw.measure, "analytic, trajectory or both")
        ->check(CLI::IsMember({"analytic", "trajectory", "both"}));
    sweep_cmd->add_option("--threads", sw.threads, "worker threads")->check(CLI::PositiveNumber);

    RunFlags phase_flags;
    PhaseFlags ph;
    auto* phase_cmd = app.add_subcommand("phase-space", "sample (x, p / m omega_v) for chosen molecules");
    phase_flags.add_run(*phase_cmd);
    phase_cmd->add_option("--times", ph.times, "explicit sample times")->delimiter(',');
    phase_cmd->add_option("--t-end", ph.t_end, "last sample time");
    phase_cmd->add_option("--count", ph.count, "number of samples");

    VerifyOptions vo;
    auto* verify_cmd = app.add_subcommand("verify", "run the closed-form vs reference checks");
    verify_cmd->add_option("--n", vo.n_molecules, "number of molecules")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--omega", vo.omega_c, "cavity frequency");
    verify_cmd->add_option("--omega-d", vo.omega_d, "diamagnetic frequency");
    verify_cmd->add_option("--velocity-scale", vo.velocity_scale, "velocity spread in x0 omega_v");
    verify_cmd->add_option("--seed", vo.seed, "random seed");
    verify_cmd->add_option("--order", vo.order, "integrator order")->check(CLI::IsMember({2, 4, 6, 8}));
    verify_cmd->add_flag("--quick", vo.quick, "one beat period, coarser identity grid");

    std::vector<std::string> fig_ids;
    FigureOptions fo;
    std::string fig_dir;
    bool fig_svg = false;
    auto* figures_cmd = app.add_subcommand("figures", "write the datasets behind the figure panels");
    figures_cmd->add_option("--fig", fig_ids, "panels (1a..3b) or all")->delimiter(',');
    figures_cmd->add_option("--coupling", fo.couplings, "coupling series as Omega_R/omega_v")->delimiter(',');
    figures_cmd->add_option("--n", fo.n_molecules, "number of molecules");
    figures_cmd->add_option("--sampling", fo.sampling, "samples per bare period");
    figures_cmd->add_option("--velocity-scale", fo.velocity_scale, "velocity spread for panels 2a-2e");
    figures_cmd->add_option("--seed", fo.seed, "random seed");
    figures_cmd->add_option("--step", fo.sweep_step, "detuning grid step for 1d");
    figures_cmd->add_option("--threads", fo.threads, "worker threads for 1d")->check(CLI::PositiveNumber);
    figures_cmd->add_option("--output-dir", fig_dir, "output directory");
    figures_cmd->add_flag("--svg", fig_svg, "also write SVG plots");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << VSCBEAT_VERSION << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitInvalidInput;
    }

    try {
        if (!simd.empty()) kernels::force_backend(simd == "avx2" ? kernels::Backend::Avx2 : kernels::Backend::Scalar);
        if (*derive_cmd) return cmd_derive(derive_flags, derive_json, out);
        if (*simulate_cmd) return cmd_simulate(sim_flags, sim, out);
        if (*sweep_cmd) return cmd_sweep(sweep_flags, sw, out);
        if (*phase_cmd) return cmd_phase(phase_flags, ph, out);
        if (*verify_cmd) {
            const VerifyReport report = run_verification(vo);
            print_report(out, report);
            return report.all_passed() ? kExitOk : kExitVerificationFailed;
        }
        if (*figures_cmd) return cmd_figures(fig_ids, fo, fig_dir, fig_svg, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return is_numerical(e.kind()) ? kExitNumerical : kExitInvalidInput;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    }
    return kExitInvalidInput;
}

} // namespace vscbeat::io
