#include "vscbeat/io/figures.hpp"

#include "vscbeat/closed_form.hpp"
#include "vscbeat/errors.hpp"
#include "vscbeat/format.hpp"
#include "vscbeat/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vscbeat::io {

namespace {

SystemParams preset(const FigureOptions& o, double ratio, double vrs)
{
    SystemParams p;
    p.omega_v = 1.0;
    p.omega_c = ratio;
    p.omega_d = vrs;
    p.n_molecules = o.n_molecules;
    p.x0 = 1.0;
    return p;
}

std::vector<double> series_or(const FigureOptions& o, std::vector<double> fallback)
{
    return o.couplings.empty() ? fallback : o.couplings;
}

std::vector<std::string> header(std::string_view id, const FigureOptions& o)
{
    return {std::string("tool: vscbeat ") + VSCBEAT_VERSION, "figure: " + std::string(id),
            "n: " + std::to_string(o.n_molecules) + " sampling: " + std::to_string(o.sampling),
            "seed: " + std::to_string(o.seed)};
}

TimeGrid grid_for(double t_end, const FigureOptions& o)
{
    return TimeGrid::sampled(t_end, 1.0, o.sampling);
}

// X(t) / (sqrt(N) x0) for a set of couplings at one cavity frequency.
FigureDataset collective_panel(std::string_view id, const FigureOptions& o, double ratio, std::vector<double> vrs,
                               double t_end)
{
    FigureDataset f{std::string(id), {}, {}};
    f.table.comments = header(id, o);
    f.table.comments.push_back("omega_over_omega_v: " + shortest(ratio));
    f.table.columns = {"t"};
    f.plot = {"collective coordinate, omega/omega_v = " + shortest(ratio), "t omega_v", "X / (sqrt(N) x0)", {}};

    const TimeGrid grid = grid_for(t_end, o);
    std::vector<std::vector<double>> cols;
    for (double c : vrs) {
        const SystemParams p = preset(o, ratio, c);
        ScenarioSpec s;
        s.n_molecules = p.n_molecules;
        const ClosedFormModel model(build_initial_conditions(s, p), p);
        const double norm = std::sqrt(static_cast<double>(p.n_molecules)) * p.x0;
        std::vector<double> col(grid.count);
        for (std::size_t k = 0; k < grid.count; ++k) col[k] = model.collective().value(grid.time(k)) / norm;
        f.table.columns.push_back("X_" + shortest(c));
        f.plot.series.push_back({"Omega_R/omega_v = " + shortest(c), {}, col});
        cols.push_back(std::move(col));
    }
    std::vector<double> times(grid.count);
    for (std::size_t k = 0; k < grid.count; ++k) {
        times[k] = grid.time(k);
        auto& row = f.table.rows.emplace_back();
        row.push_back(times[k]);
        for (const auto& col : cols) row.push_back(col[k]);
    }
    for (auto& s : f.plot.series) s.x = times;
    return f;
}

double beat_period(double ratio, double vrs)
{
    return 4.0 * std::numbers::pi / polariton_gap(1.0, ratio, vrs);
}

FigureDataset sweep_panel(const FigureOptions& o)
{
    FigureDataset f{"1d", {}, {}};
    f.table.comments = header("1d", o);
    f.table.columns = {"omega_ratio"};
    f.plot = {"beat period vs cavity detuning", "omega / omega_v", "T omega_v", {}};

    SweepSpec spec;
    const std::size_t steps = static_cast<std::size_t>(std::lround(1.5 / o.sweep_step));
    for (std::size_t i = 0; i <= steps; ++i) spec.detuning_grid.push_back(0.5 + 1.5 * static_cast<double>(i) / static_cast<double>(steps));
    spec.measure = Measure::Both;
    spec.threads = o.threads;
    spec.scenario.n_molecules = o.n_molecules;

    std::vector<std::vector<SweepRow>> all;
    for (double c : series_or(o, {0.02, 0.2})) {
        spec.omega_d = c;
        all.push_back(detuning_sweep(spec, preset(o, 1.0, c)));
        f.table.columns.push_back("T_" + shortest(c));
        f.table.columns.push_back("T_measured_" + shortest(c));
        PlotSeries s{"Omega_R/omega_v = " + shortest(c), spec.detuning_grid, {}};
        for (const SweepRow& r : all.back()) s.y.push_back(r.beat_period_analytic);
        f.plot.series.push_back(std::move(s));
    }
    for (std::size_t i = 0; i < spec.detuning_grid.size(); ++i) {
        auto& row = f.table.rows.emplace_back();
        row.push_back(spec.detuning_grid[i]);
        for (const auto& rows : all) {
            row.push_back(rows[i].beat_period_analytic);
            row.push_back(rows[i].beat_period_measured);
        }
    }
    return f;
}

constexpr std::size_t kShownMolecules = 3;

ClosedFormModel velocity_model(const FigureOptions& o, double vrs, InitialConditions& ic)
{
    const SystemParams p = preset(o, 1.0, vrs);
    ScenarioSpec s;
    s.n_molecules = p.n_molecules;
    s.kind = FullyExcited{p.x0, o.velocity_scale, o.seed};
    ic = build_initial_conditions(s, p);
    return ClosedFormModel(ic, p);
}

// Three molecules with random initial velocities plus an uncoupled copy of the first.
FigureDataset local_panel(std::string_view id, const FigureOptions& o, double vrs, double t_end)
{
    FigureDataset f{std::string(id), {}, {}};
    f.table.comments = header(id, o);
    f.table.comments.push_back("omega_r: " + shortest(vrs) + " velocity_scale: " + shortest(o.velocity_scale));
    f.plot = {"local vibrations, Omega_R/omega_v = " + shortest(vrs), "t omega_v", "x_i / x0", {}};

    InitialConditions ic;
    const ClosedFormModel model = velocity_model(o, vrs, ic);
    const std::size_t shown = std::min(kShownMolecules, o.n_molecules);
    const TimeGrid grid = grid_for(t_end, o);
    std::vector<double> times(grid.count);
    for (std::size_t k = 0; k < grid.count; ++k) times[k] = grid.time(k);

    f.table.columns = {"t"};
    std::vector<std::vector<double>> cols;
    for (std::size_t m = 0; m < shown; ++m) {
        const ToneSum x = model.local(m);
        std::vector<double> col(grid.count);
        for (std::size_t k = 0; k < grid.count; ++k) col[k] = x.value(times[k]);
        f.table.columns.push_back("x_" + std::to_string(m + 1));
        f.plot.series.push_back({"molecule " + std::to_string(m + 1), times, col});
        cols.push_back(std::move(col));
    }
    const auto ref = uncoupled_phase_samples(ic.displacements[0], ic.velocities[0], model.params(), times);
    std::vector<double> ref_x;
    for (const PhasePoint& pt : ref) ref_x.push_back(pt.x);
    f.table.columns.push_back("x_uncoupled");
    f.plot.series.push_back({"uncoupled", times, ref_x});
    cols.push_back(std::move(ref_x));

    for (std::size_t k = 0; k < grid.count; ++k) {
        auto& row = f.table.rows.emplace_back();
        row.push_back(times[k]);
        for (const auto& col : cols) row.push_back(col[k]);
    }
    return f;
}

FigureDataset phase_panel(std::string_view id, const FigureOptions& o, double vrs, double t_end)
{
    FigureDataset f{std::string(id), {}, {}};
    f.table.comments = header(id, o);
    f.table.comments.push_back("omega_r: " + shortest(vrs) + " t_end: " + shortest(t_end));
    f.plot = {"phase space up to t omega_v = " + shortest(t_end), "x / x0", "p / (m omega_v x0)", {}};

    InitialConditions ic;
    const ClosedFormModel model = velocity_model(o, vrs, ic);
    const std::size_t shown = std::min(kShownMolecules, o.n_molecules);
    const TimeGrid grid = grid_for(t_end, o);
    std::vector<double> times(grid.count);
    for (std::size_t k = 0; k < grid.count; ++k) times[k] = grid.time(k);

    f.table.columns = {"t"};
    std::vector<std::vector<PhasePoint>> series;
    for (std::size_t m = 0; m < shown; ++m) {
        series.push_back(phase_space_samples(model, m, times));
        f.table.columns.push_back("x_" + std::to_string(m + 1));
        f.table.columns.push_back("p_" + std::to_string(m + 1));
    }
    series.push_back(uncoupled_phase_samples(ic.displacements[0], ic.velocities[0], model.params(), times));
    f.table.columns.push_back("x_uncoupled");
    f.table.columns.push_back("p_uncoupled");

    for (std::size_t s = 0; s < series.size(); ++s) {
        PlotSeries ps{s < shown ? "molecule " + std::to_string(s + 1) : "uncoupled", {}, {}};
        for (const PhasePoint& pt : series[s]) {
            ps.x.push_back(pt.x);
            ps.y.push_back(pt.p_scaled);
        }
        f.plot.series.push_back(std::move(ps));
    }
    for (std::size_t k = 0; k < grid.count; ++k) {
        auto& row = f.table.rows.emplace_back();
        row.push_back(times[k]);
        for (const auto& s : series) {
            row.push_back(s[k].x);
            row.push_back(s[k].p_scaled);
        }
    }
    return f;
}

// One initially displaced and one initially resting molecule for each beta.
FigureDataset partial_panel(std::string_view id, const FigureOptions& o, double vrs)
{
    FigureDataset f{std::string(id), {}, {}};
    f.table.comments = header(id, o);
    f.table.comments.push_back("omega_r: " + shortest(vrs));
    f.plot = {"partial activation, Omega_R/omega_v = " + shortest(vrs), "t omega_v", "x_i / x0", {}};

    const SystemParams p = preset(o, 1.0, vrs);
    const TimeGrid grid = grid_for(2.0 * beat_period(1.0, vrs), o);
    std::vector<double> times(grid.count);
    for (std::size_t k = 0; k < grid.count; ++k) times[k] = grid.time(k);

    f.table.columns = {"t"};
    std::vector<std::vector<double>> cols;
    const DerivedCoupling coupling = derive(p);
    for (double beta : {0.05, 0.2}) {
        const std::size_t excited = excited_count(beta, p.n_molecules);
        require(excited >= 1 && excited < p.n_molecules, ErrorKind::InvalidInput,
                "figure " + std::string(id) + " needs n with 1 <= beta n < n");
        std::vector<double> ex(grid.count), gr(grid.count);
        for (std::size_t k = 0; k < grid.count; ++k) {
            const ActivatedPair pair = partially_activated_local(p, coupling, beta, times[k]);
            ex[k] = pair.excited;
            gr[k] = pair.ground;
        }
        for (auto* col : {&ex, &gr}) {
            const std::string role = col == &ex ? "excited" : "ground";
            f.table.columns.push_back(role + "_beta_" + shortest(beta));
            f.plot.series.push_back({role + ", beta = " + shortest(beta), times, *col});
            cols.push_back(std::move(*col));
        }
    }
    for (std::size_t k = 0; k < grid.count; ++k) {
        auto& row = f.table.rows.emplace_back();
        row.push_back(times[k]);
        for (const auto& col : cols) row.push_back(col[k]);
    }
    return f;
}

} // namespace

const std::vector<std::string>& figure_ids()
{
    static const std::vector<std::string> ids{"1a", "1b", "1c", "1d", "2a", "2b", "2c", "2d", "2e", "3a", "3b"};
    return ids;
}

FigureDataset make_figure(std::string_view id, const FigureOptions& o)
{
    require(o.n_molecules >= 2, ErrorKind::InvalidInput, "figures need n >= 2");
    require(o.sampling >= 4, ErrorKind::InvalidInput, "figures need sampling >= 4");
    require(o.sweep_step > 0.0 && o.sweep_step <= 0.5, ErrorKind::InvalidInput, "sweep step must lie in (0, 0.5]");
    for (double c : o.couplings)
        require(std::isfinite(c) && c > 0.0, ErrorKind::InvalidInput, "couplings must be > 0");

    if (id == "1a") {
        const auto vrs = series_or(o, {0.05, 0.005});
        return collective_panel(id, o, 1.0, vrs, 2.0 * beat_period(1.0, vrs.front()));
    }
    if (id == "1b") return collective_panel(id, o, 1.0, series_or(o, {0.5, 0.05}), 20.0);
    if (id == "1c") {
        const auto vrs = series_or(o, {0.5, 0.05});
        return collective_panel(id, o, 1.2, vrs, 2.0 * beat_period(1.2, vrs.back()));
    }
    if (id == "1d") return sweep_panel(o);
    if (id == "2a") return local_panel(id, o, 0.07, 2.0 * beat_period(1.0, 0.07));
    if (id == "2b") return local_panel(id, o, 0.5, 30.0);
    if (id == "2c") return phase_panel(id, o, 0.07, 5.0);
    if (id == "2d") return phase_panel(id, o, 0.07, 25.0);
    if (id == "2e") return phase_panel(id, o, 0.07, 0.5 * beat_period(1.0, 0.07));
    if (id == "3a") return partial_panel(id, o, 0.07);
    if (id == "3b") return partial_panel(id, o, 0.35);
    fail(ErrorKind::InvalidInput, "unknown figure '" + std::string(id) + "'");
}

} // namespace vscbeat::io
