#include "vscbeat/scenarios.hpp"

#include "vscbeat/envelope.hpp"
#include "vscbeat/errors.hpp"
#include "vscbeat/format.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

namespace vscbeat {

namespace {

template <class... F>
struct overloaded : F... {
    using F::operator()...;
};
template <class... F>
overloaded(F...) -> overloaded<F...>;

// Uniform in [-1, 1) from the raw 64-bit engine output, so the stream is the
// same with every standard library.
double symmetric_unit(std::mt19937_64& rng)
{
    return 2.0 * static_cast<double>(rng() >> 11) * 0x1p-53 - 1.0;
}

void require_index(std::size_t molecule, std::size_t n)
{
    require(molecule < n, ErrorKind::InvalidIndex,
            "molecule index " + std::to_string(molecule) + " out of range for N = " + std::to_string(n));
}

} // namespace

void ScenarioSpec::validate() const
{
    require(n_molecules >= 1, ErrorKind::InvalidParameter, "scenario needs at least one molecule");
    std::visit(overloaded{
                   [](const FullyExcited& s) {
                       require(std::isfinite(s.x0), ErrorKind::InvalidParameter, "x0 must be finite");
                       require(std::isfinite(s.velocity_scale) && s.velocity_scale >= 0.0,
                               ErrorKind::InvalidParameter, "velocity_scale must be >= 0");
                   },
                   [](const PartiallyActivated& s) {
                       require(std::isfinite(s.x0), ErrorKind::InvalidParameter, "x0 must be finite");
                       require(s.beta >= 0.0 && s.beta <= 1.0, ErrorKind::InvalidParameter,
                               "beta must lie in [0, 1]");
                   },
                   [this](const Custom& s) { s.ic.validate(n_molecules); },
               },
               kind);
}

std::string ScenarioSpec::describe() const
{
    const std::string n = " n=" + std::to_string(n_molecules);
    return std::visit(overloaded{
                          [&](const FullyExcited& s) {
                              return "fully_excited x0=" + shortest(s.x0) + " velocity_scale=" +
                                     shortest(s.velocity_scale) + " seed=" + std::to_string(s.seed) + n;
                          },
                          [&](const PartiallyActivated& s) {
                              return "partial beta=" + shortest(s.beta) + " x0=" + shortest(s.x0) + n;
                          },
                          [&](const Custom&) { return "custom" + n; },
                      },
                      kind);
}

const char* to_string(Warning warning) noexcept
{
    switch (warning) {
    case Warning::EmptyExcitedSet: return "EmptyExcitedSet";
    }
    return "?";
}

InitialConditions build_initial_conditions(const ScenarioSpec& spec, const SystemParams& params,
                                           std::vector<Warning>* warnings)
{
    spec.validate();
    const std::size_t n = spec.n_molecules;
    require(params.n_molecules == n, ErrorKind::InvalidInput,
            "scenario has " + std::to_string(n) + " molecules but parameters have " +
                std::to_string(params.n_molecules));

    InitialConditions ic;
    ic.displacements.assign(n, 0.0);
    ic.velocities.assign(n, 0.0);

    std::visit(overloaded{
                   [&](const FullyExcited& s) {
                       std::fill(ic.displacements.begin(), ic.displacements.end(), s.x0);
                       if (s.velocity_scale == 0.0) return;
                       std::mt19937_64 rng(s.seed);
                       const double scale = s.velocity_scale * s.x0 * params.omega_v;
                       double mean = 0.0;
                       for (double& v : ic.velocities) {
                           v = scale * symmetric_unit(rng);
                           mean += v;
                       }
                       mean /= static_cast<double>(n);
                       for (double& v : ic.velocities) v -= mean;
                   },
                   [&](const PartiallyActivated& s) {
                       const std::size_t count = excited_count(s.beta, n);
                       if (count == 0 && warnings) warnings->push_back(Warning::EmptyExcitedSet);
                       std::fill_n(ic.displacements.begin(), count, s.x0);
                   },
                   [&](const Custom& s) { ic = s.ic; },
               },
               spec.kind);
    if (!std::holds_alternative<Custom>(spec.kind)) {
        ic.cavity_q = 0.0;
        ic.cavity_qdot = 0.0;
    }
    return ic;
}

std::vector<std::size_t> excited_set(const ScenarioSpec& spec, const InitialConditions& ic)
{
    std::vector<std::size_t> out;
    if (const auto* s = std::get_if<PartiallyActivated>(&spec.kind)) {
        const std::size_t count = excited_count(s->beta, spec.n_molecules);
        for (std::size_t i = 0; i < count; ++i) out.push_back(i);
        return out;
    }
    for (std::size_t i = 0; i < ic.size(); ++i)
        if (ic.displacements[i] != 0.0 || ic.velocities[i] != 0.0) out.push_back(i);
    return out;
}

EnergySeries energy_partition(const Trajectory& traj, const SystemParams& params, double g,
                              std::span<const std::size_t> excited)
{
    traj.validate();
    const std::size_t n = params.n_molecules;
    require(!traj.cavity_p.empty(), ErrorKind::MissingMomenta, "trajectory has no cavity momentum");

    std::vector<char> is_excited(n, 0);
    for (std::size_t i : excited) {
        require_index(i, n);
        is_excited[i] = 1;
    }
    std::vector<const std::vector<double>*> xs(n);
    std::vector<const std::vector<double>*> vs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = traj.locals.find(i);
        const auto v = traj.local_velocities.find(i);
        require(x != traj.locals.end() && v != traj.local_velocities.end(), ErrorKind::MissingMomenta,
                "energy partition needs coordinate and velocity of molecule " + std::to_string(i + 1));
        xs[i] = &x->second;
        vs[i] = &v->second;
    }

    const std::size_t count = traj.size();
    const double half_stiffness = 0.5 * params.mass * params.omega_v * params.omega_v;
    const double half_mass = 0.5 * params.mass;
    const double root_n = std::sqrt(static_cast<double>(n));

    EnergySeries e;
    e.times = traj.times;
    e.excited.resize(count);
    e.ground.resize(count);
    e.cavity.resize(count);
    e.total.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        double ex = 0.0;
        double gr = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = (*xs[i])[k];
            const double v = (*vs[i])[k];
            const double bare = half_mass * v * v + half_stiffness * x * x;
            (is_excited[i] ? ex : gr) += bare;
        }
        const double residual = traj.cavity_q[k] - g * root_n * traj.collective_x[k];
        const double cav = 0.5 * params.omega_c * (traj.cavity_p[k] * traj.cavity_p[k] + residual * residual);
        e.excited[k] = ex;
        e.ground[k] = gr;
        e.cavity[k] = cav;
        e.total[k] = ex + gr + cav;
    }
    return e;
}

std::vector<PhasePoint> phase_space_samples(const ClosedFormModel& model, std::size_t molecule,
                                            std::span<const double> times)
{
    require_index(molecule, model.params().n_molecules);
    const ToneSum x = model.local(molecule);
    const double wv = model.params().omega_v;
    std::vector<PhasePoint> out;
    out.reserve(times.size());
    for (double t : times) out.push_back({t, x.value(t), x.rate(t) / wv});
    return out;
}

std::vector<PhasePoint> phase_space_samples(const Trajectory& traj, std::size_t molecule,
                                            std::span<const double> times, const SystemParams& params)
{
    traj.validate();
    require_index(molecule, params.n_molecules);
    const auto xs = traj.locals.find(molecule);
    require(xs != traj.locals.end(), ErrorKind::InvalidIndex,
            "molecule " + std::to_string(molecule + 1) + " was not recorded");
    const auto vs = traj.local_velocities.find(molecule);
    require(vs != traj.local_velocities.end(), ErrorKind::MissingMomenta,
            "molecule " + std::to_string(molecule + 1) + " has no velocity series");
    require(traj.size() >= 2, ErrorKind::InvalidInput, "trajectory needs at least two samples");

    const double t0 = traj.times.front();
    const double dt = traj.times[1] - traj.times[0];
    const double t_end = traj.times.back();
    const std::vector<double>& x = xs->second;
    const std::vector<double>& v = vs->second;

    std::vector<PhasePoint> out;
    out.reserve(times.size());
    for (double t : times) {
        require(t >= t0 - 1e-9 * dt && t <= t_end + 1e-9 * dt, ErrorKind::InvalidInput,
                "time " + shortest(t) + " outside the trajectory span");
        const double pos = (t - t0) / dt;
        const std::size_t k = std::min(static_cast<std::size_t>(std::max(pos, 0.0)), traj.size() - 2);
        const double u = pos - static_cast<double>(k);
        const double u2 = u * u;
        const double u3 = u2 * u;
        const double h00 = 2 * u3 - 3 * u2 + 1, h10 = u3 - 2 * u2 + u, h01 = -2 * u3 + 3 * u2, h11 = u3 - u2;
        const double xi = h00 * x[k] + h10 * dt * v[k] + h01 * x[k + 1] + h11 * dt * v[k + 1];
        // Derivative of the Hermite cubic.
        const double d00 = (6 * u2 - 6 * u) / dt, d10 = 3 * u2 - 4 * u + 1, d01 = (-6 * u2 + 6 * u) / dt,
                     d11 = 3 * u2 - 2 * u;
        const double vi = d00 * x[k] + d10 * v[k] + d01 * x[k + 1] + d11 * v[k + 1];
        out.push_back({t, xi, vi / params.omega_v});
    }
    return out;
}

std::vector<PhasePoint> uncoupled_phase_samples(double x_initial, double v_initial, const SystemParams& params,
                                                std::span<const double> times)
{
    const double wv = params.omega_v;
    const double y = v_initial / wv;
    std::vector<PhasePoint> out;
    out.reserve(times.size());
    for (double t : times) {
        const double c = std::cos(wv * t);
        const double s = std::sin(wv * t);
        out.push_back({t, x_initial * c + y * s, -x_initial * s + y * c});
    }
    return out;
}

MeasuredBeat measure_collective(const Trajectory& traj, const SystemParams& params)
{
    MeasuredBeat out;
    const DerivedCoupling coupling = derive(params);
    traj.validate();
    const double span = traj.size() ? traj.times.back() - traj.times.front() : 0.0;
    if (span < 1.25 * coupling.beat_period * (1.0 - 1e-9)) {
        out.status = "trajectory spans less than 1.25 beat periods";
        return out;
    }

    std::string envelope_note = "gap beyond the envelope window";
    if (coupling.gap < kEstimatorMaxGapRatio * params.omega_v) {
        try {
            const BeatAnalysis beat = analyze_beating(traj.times, traj.collective_x, params.omega_v);
            if (1.0 - beat.envelope_min_measured >= kMinModulationDepth) {
                out.period = beat.period;
                out.envelope_min = beat.envelope_min_measured;
                out.method = kEnvelopeMethod;
                return out;
            }
            envelope_note = "modulation too shallow for the envelope";
        } catch (const Error& e) {
            envelope_note = e.what();
        }
    }
    try {
        const TwoToneFit fit = fit_two_tones(traj.times, traj.collective_x);
        out.period = fit.period();
        out.envelope_min = fit.envelope_min();
        out.method = kTwoToneMethod;
    } catch (const Error& e) {
        out.status = envelope_note + "; " + e.what();
    }
    return out;
}

double exact_envelope_min(const ClosedFormModel& model)
{
    const ToneSum& x = model.collective();
    double top = 0.0;
    for (const Tone& tone : x.tones()) top += std::fabs(tone.amplitude);
    if (top == 0.0) return 0.0;
    return x.envelope_minimum(0.0, model.coupling().beat_period) / top;
}

void SweepSpec::validate() const
{
    require(!detuning_grid.empty(), ErrorKind::InvalidInput, "detuning grid is empty");
    for (std::size_t i = 0; i < detuning_grid.size(); ++i) {
        require(std::isfinite(detuning_grid[i]) && detuning_grid[i] > 0.0, ErrorKind::InvalidInput,
                "detuning grid values must be > 0");
        require(i == 0 || detuning_grid[i] > detuning_grid[i - 1], ErrorKind::InvalidInput,
                "detuning grid must be strictly increasing");
    }
    require(std::isfinite(omega_d) && omega_d > 0.0, ErrorKind::InvalidParameter, "sweep omega_d must be > 0");
    require(threads >= 1, ErrorKind::InvalidInput, "threads must be >= 1");
    scenario.validate();
}

namespace {

SweepRow sweep_point(const SweepSpec& spec, const SystemParams& base, double ratio)
{
    SweepRow row;
    row.ratio = ratio;
    try {
        SystemParams p = base;
        p.si.reset();
        p.omega_c = ratio * base.omega_v;
        p.omega_d = spec.omega_d;
        p.n_molecules = spec.scenario.n_molecules;
        const DerivedCoupling coupling = derive(p);
        row.gap = coupling.gap;
        row.beat_period_analytic = coupling.beat_period;

        const ClosedFormModel model(build_initial_conditions(spec.scenario, p), p);
        row.envelope_min = exact_envelope_min(model);

        if (spec.measure != Measure::Analytic) {
            const TimeGrid grid = TimeGrid::sampled(kDefaultSpanBeats * coupling.beat_period, p.omega_v,
                                                    kDefaultSamplesPerPeriod);
            const MeasuredBeat beat = measure_collective(model.sample(grid, {}), p);
            row.beat_period_measured = beat.period;
            row.method = beat.method;
            row.status = beat.status;
        }
    } catch (const Error& e) {
        row.status = e.what();
    }
    return row;
}

} // namespace

std::vector<SweepRow> detuning_sweep(const SweepSpec& spec, const SystemParams& params)
{
    spec.validate();
    params.validate();
    std::vector<SweepRow> rows(spec.detuning_grid.size());
    const std::size_t workers = std::min(spec.threads, rows.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = sweep_point(spec, params, spec.detuning_grid[i]);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < rows.size(); i = next++)
                    rows[i] = sweep_point(spec, params, spec.detuning_grid[i]);
            });
    }
    return rows;
}

} // namespace vscbeat
