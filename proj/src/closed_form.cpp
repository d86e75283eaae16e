#include "vscbeat/closed_form.hpp"

#include "vscbeat/errors.hpp"
#include "vscbeat/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vscbeat {

void InitialConditions::validate(std::size_t n_molecules) const
{
    require(displacements.size() == n_molecules && velocities.size() == n_molecules,
            ErrorKind::InvalidInitialConditions,
            "expected " + std::to_string(n_molecules) + " displacements and velocities, got " +
                std::to_string(displacements.size()) + " and " + std::to_string(velocities.size()));
    for (std::size_t i = 0; i < n_molecules; ++i)
        require(std::isfinite(displacements[i]) && std::isfinite(velocities[i]), ErrorKind::InvalidInitialConditions,
                "non-finite initial condition for molecule " + std::to_string(i));
    require(std::isfinite(cavity_q) && std::isfinite(cavity_qdot), ErrorKind::InvalidInitialConditions,
            "non-finite cavity initial condition");
}

TimeGrid TimeGrid::covering(double t_end, double dt)
{
    require(std::isfinite(dt) && dt > 0.0, ErrorKind::InvalidInput, "time step must be > 0");
    require(std::isfinite(t_end) && t_end >= 0.0, ErrorKind::InvalidInput, "time span must be >= 0");
    return {dt, static_cast<std::size_t>(std::floor(t_end / dt + 1e-9)) + 1};
}

TimeGrid TimeGrid::sampled(double t_end, double omega_v, std::size_t samples_per_period)
{
    require(samples_per_period >= 4, ErrorKind::InvalidInput, "need at least 4 samples per bare period");
    return covering(t_end, 2.0 * 3.14159265358979323846 / (omega_v * static_cast<double>(samples_per_period)));
}

TimeGrid default_grid(const SystemParams& params, const DerivedCoupling& coupling)
{
    return TimeGrid::sampled(kDefaultSpanBeats * coupling.beat_period, params.omega_v, kDefaultSamplesPerPeriod);
}

bool Trajectory::has_momenta() const noexcept
{
    if (cavity_p.size() != times.size()) return false;
    for (const auto& [index, series] : locals)
        if (!local_velocities.contains(index)) return false;
    return true;
}

void Trajectory::validate() const
{
    const std::size_t n = times.size();
    auto check = [n](const std::vector<double>& series, const char* name, bool optional) {
        if (optional && series.empty()) return;
        require(series.size() == n, ErrorKind::InvalidInput,
                std::string("series '") + name + "' does not match the time grid length");
    };
    check(collective_x, "X", false);
    check(cavity_q, "q", false);
    check(collective_v, "X_rate", true);
    check(cavity_p, "p_q", true);
    for (const auto& [i, s] : locals) check(s, "x_i", false);
    for (const auto& [i, s] : local_velocities) check(s, "v_i", false);
    if (relatives)
        for (const auto& s : *relatives) check(s, "xr_j", false);
    if (n < 2) return;
    const double dt = times[1] - times[0];
    require(dt > 0.0, ErrorKind::InvalidInput, "time grid must be strictly increasing");
    for (std::size_t i = 1; i < n; ++i) {
        const double expected = times[0] + dt * static_cast<double>(i);
        require(std::fabs(times[i] - expected) <= 1e-9 * std::max(1.0, std::fabs(expected)), ErrorKind::InvalidInput,
                "time grid must be uniform");
    }
}

ModeAmplitudes fit_polariton_modes(const InitialConditions& ic, const SystemParams& params,
                                   const DerivedCoupling& coupling)
{
    const std::size_t n = params.n_molecules;
    ic.validate(n);
    const double root_n = std::sqrt(static_cast<double>(n));
    const double root_m = std::sqrt(params.mass);
    const double root_w = std::sqrt(params.omega_c);

    const double x_coll = kernels::sum(ic.displacements) / root_n;
    const double v_coll = kernels::sum(ic.velocities) / root_n;

    // Mass-weighted collective coordinate and negated, scaled cavity quadrature,
    // rotated by the symmetric orthogonal matrix [[-L, 1], [1, L]] / sqrt(1 + L^2).
    const double lam = coupling.lambda;
    const double norm = coupling.mixing_norm();
    const double y = root_m * x_coll;
    const double z = -ic.cavity_q / root_w;
    const double y_rate = root_m * v_coll;
    const double z_rate = -ic.cavity_qdot / root_w;

    const Tone upper = tone_from_initial((-lam * y + z) / norm, (-lam * y_rate + z_rate) / norm, coupling.omega_plus);
    const Tone lower = tone_from_initial((y + lam * z) / norm, (y_rate + lam * z_rate) / norm, coupling.omega_minus);

    ModeAmplitudes modes;
    modes.a_plus = upper.amplitude;
    modes.phi_plus = upper.phase;
    modes.a_minus = lower.amplitude;
    modes.phi_minus = lower.phase;
    modes.relative.reserve(n - 1);
    for (std::size_t j = 1; j < n; ++j) {
        const double xr = (ic.displacements[0] - ic.displacements[j]) / root_n;
        const double vr = (ic.velocities[0] - ic.velocities[j]) / root_n;
        const Tone t = tone_from_initial(xr, vr, params.omega_v);
        modes.relative.push_back({t.amplitude, t.phase});
    }
    return modes;
}

ToneSum collective_tones(const ModeAmplitudes& modes, const DerivedCoupling& coupling, const SystemParams& params)
{
    const double scale = 1.0 / (coupling.mixing_norm() * std::sqrt(params.mass));
    return ToneSum({{-coupling.lambda * modes.a_plus * scale, coupling.omega_plus, modes.phi_plus},
                    {modes.a_minus * scale, coupling.omega_minus, modes.phi_minus}});
}

ToneSum cavity_tones(const ModeAmplitudes& modes, const DerivedCoupling& coupling, const SystemParams& params)
{
    const double scale = -std::sqrt(params.omega_c) / coupling.mixing_norm();
    return ToneSum({{modes.a_plus * scale, coupling.omega_plus, modes.phi_plus},
                    {coupling.lambda * modes.a_minus * scale, coupling.omega_minus, modes.phi_minus}});
}

CollectiveState eval_collective(const ModeAmplitudes& modes, const DerivedCoupling& coupling,
                                const SystemParams& params, double t)
{
    const ToneSum x = collective_tones(modes, coupling, params);
    const ToneSum q = cavity_tones(modes, coupling, params);
    return {x.value(t), x.rate(t), q.value(t), q.rate(t)};
}

std::vector<double> eval_relative(const ModeAmplitudes& modes, const SystemParams& params, double t)
{
    std::vector<double> out;
    out.reserve(modes.relative.size());
    for (const RelativeMode& r : modes.relative) out.push_back(r.amplitude * std::sin(params.omega_v * t + r.phase));
    return out;
}

std::vector<std::vector<double>> assemble_local(std::span<const double> collective,
                                                const std::vector<std::vector<double>>& relatives,
                                                const SystemParams& params)
{
    const std::size_t n = params.n_molecules;
    require(relatives.size() + 1 == n, ErrorKind::InvalidInput,
            "expected " + std::to_string(n - 1) + " relative series, got " + std::to_string(relatives.size()));
    for (const auto& r : relatives)
        require(r.size() == collective.size(), ErrorKind::InvalidInput, "relative series length mismatch");

    const double root_n = std::sqrt(static_cast<double>(n));
    std::vector<std::vector<double>> out(n, std::vector<double>(collective.size()));
    for (std::size_t k = 0; k < collective.size(); ++k) {
        double rel_sum = 0.0;
        for (const auto& r : relatives) rel_sum += r[k];
        const double base = (collective[k] + rel_sum) / root_n;
        out[0][k] = base;
        for (std::size_t i = 1; i < n; ++i) out[i][k] = base - root_n * relatives[i - 1][k];
    }
    return out;
}

namespace {

// [L^2 cos(W+ t) + cos(W- t)] / (L^2 + 1)
double polaritonic_profile(const DerivedCoupling& c, double t)
{
    const double l2 = c.lambda * c.lambda;
    return (l2 * std::cos(c.omega_plus * t) + std::cos(c.omega_minus * t)) / (l2 + 1.0);
}

} // namespace

std::vector<double> fully_excited_local(const SystemParams& params, const DerivedCoupling& coupling,
                                        std::span<const double> velocities, double t)
{
    require(velocities.size() == params.n_molecules, ErrorKind::InvalidInitialConditions,
            "expected one velocity per molecule");
    double total = 0.0;
    double magnitude = 0.0;
    for (double v : velocities) {
        total += v;
        magnitude += std::fabs(v);
    }
    require(std::fabs(total) <= 1e-12 * std::max(1.0, magnitude), ErrorKind::InvalidInitialConditions,
            "velocities must sum to zero");

    const double collective = params.x0 * polaritonic_profile(coupling, t);
    const double bare = std::sin(params.omega_v * t) / params.omega_v;
    std::vector<double> out;
    out.reserve(velocities.size());
    for (double v : velocities) out.push_back(collective + v * bare);
    return out;
}

std::size_t excited_count(double beta, std::size_t n_molecules)
{
    require(std::isfinite(beta) && beta >= 0.0 && beta <= 1.0, ErrorKind::InvalidParameter,
            "activation ratio beta must lie in [0, 1]");
    const double raw = std::floor(beta * static_cast<double>(n_molecules) + 1e-9);
    return std::min(n_molecules, static_cast<std::size_t>(raw));
}

double realized_beta(double beta, std::size_t n_molecules)
{
    return static_cast<double>(excited_count(beta, n_molecules)) / static_cast<double>(n_molecules);
}

ActivatedPair partially_activated_local(const SystemParams& params, const DerivedCoupling& coupling, double beta,
                                        double t)
{
    const double b = realized_beta(beta, params.n_molecules);
    const double polaritonic = b * polaritonic_profile(coupling, t);
    const double bare = std::cos(params.omega_v * t);
    return {params.x0 * (polaritonic + (1.0 - b) * bare), params.x0 * (polaritonic - b * bare)};
}

ClosedFormModel::ClosedFormModel(const InitialConditions& ic, const SystemParams& params)
    : params_(params), coupling_(derive(params)), modes_(fit_polariton_modes(ic, params_, coupling_)),
      collective_(collective_tones(modes_, coupling_, params_)), cavity_(cavity_tones(modes_, coupling_, params_))
{
    ToneSum rel;
    for (const RelativeMode& r : modes_.relative) rel.add({r.amplitude, params_.omega_v, r.phase});
    relative_sum_ = rel.merged();
}

ToneSum ClosedFormModel::relative(std::size_t j) const
{
    require(j < modes_.relative.size(), ErrorKind::InvalidIndex, "relative mode index out of range");
    const RelativeMode& r = modes_.relative[j];
    return ToneSum({{r.amplitude, params_.omega_v, r.phase}});
}

ToneSum ClosedFormModel::local(std::size_t molecule) const
{
    const std::size_t n = params_.n_molecules;
    require(molecule < n, ErrorKind::InvalidIndex,
            "molecule index " + std::to_string(molecule) + " out of range for N = " + std::to_string(n));
    const double root_n = std::sqrt(static_cast<double>(n));
    ToneSum out;
    out.append(collective_, 1.0 / root_n);
    out.append(relative_sum_, 1.0 / root_n);
    if (molecule > 0) out.append(relative(molecule - 1), -root_n);
    return out;
}

Trajectory ClosedFormModel::sample(const TimeGrid& grid, std::span<const std::size_t> molecules,
                                   bool with_relatives) const
{
    std::vector<ToneSum> locals;
    locals.reserve(molecules.size());
    for (std::size_t i : molecules) locals.push_back(local(i));

    Trajectory traj;
    const std::size_t count = grid.count;
    traj.times.resize(count);
    traj.collective_x.resize(count);
    traj.collective_v.resize(count);
    traj.cavity_q.resize(count);
    traj.cavity_p.resize(count);
    for (std::size_t m = 0; m < molecules.size(); ++m) {
        traj.locals[molecules[m]].resize(count);
        traj.local_velocities[molecules[m]].resize(count);
    }
    if (with_relatives) traj.relatives.emplace(modes_.relative.size(), std::vector<double>(count));

    for (std::size_t k = 0; k < count; ++k) {
        const double t = grid.time(k);
        traj.times[k] = t;
        traj.collective_x[k] = collective_.value(t);
        traj.collective_v[k] = collective_.rate(t);
        traj.cavity_q[k] = cavity_.value(t);
        traj.cavity_p[k] = cavity_.rate(t) / params_.omega_c;
        for (std::size_t m = 0; m < molecules.size(); ++m) {
            traj.locals[molecules[m]][k] = locals[m].value(t);
            traj.local_velocities[molecules[m]][k] = locals[m].rate(t);
        }
        if (with_relatives) {
            const auto rel = eval_relative(modes_, params_, t);
            for (std::size_t j = 0; j < rel.size(); ++j) (*traj.relatives)[j][k] = rel[j];
        }
    }
    return traj;
}

} // namespace vscbeat
