#include "vscbeat/oracle.hpp"

#include "vscbeat/errors.hpp"
#include "vscbeat/format.hpp"
#include "vscbeat/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace vscbeat {
namespace {

// Largest normal-mode frequency of the full system for an explicit g.
double upper_frequency(const SystemParams& params, double g)
{
    const double wv = params.omega_v;
    const double w = params.omega_c;
    const double wd_sq = w * g * g * static_cast<double>(params.n_molecules) / params.mass;
    const double split = std::hypot(2.0 * std::sqrt(wd_sq) * w, (wv - w) * (wv + w) + wd_sq);
    return std::sqrt(0.5 * (wv * wv + wd_sq + w * w + split));
}

std::vector<double> composition_weights(int order)
{
    require(order == 2 || order == 4 || order == 6 || order == 8, ErrorKind::InvalidParameter,
            "integrator order must be 2, 4, 6 or 8");
    std::vector<double> weights{1.0};
    for (int k = 2; k < order; k += 2) {
        const double outer = 1.0 / (2.0 - std::pow(2.0, 1.0 / (k + 1)));
        const double inner = 1.0 - 2.0 * outer;
        std::vector<double> next;
        next.reserve(weights.size() * 3);
        for (double f : {outer, inner, outer})
            for (double w : weights) next.push_back(f * w);
        weights = std::move(next);
    }
    return weights;
}

} // namespace

FullState FullState::from_initial(const InitialConditions& ic, const SystemParams& params)
{
    ic.validate(params.n_molecules);
    FullState s;
    s.x = ic.displacements;
    s.p.resize(ic.velocities.size());
    std::transform(ic.velocities.begin(), ic.velocities.end(), s.p.begin(),
                   [m = params.mass](double v) { return m * v; });
    s.q = ic.cavity_q;
    s.p_q = ic.cavity_qdot / params.omega_c;
    return s;
}

void FullState::validate(std::size_t n_molecules) const
{
    require(x.size() == n_molecules && p.size() == n_molecules, ErrorKind::InvalidInput,
            "state must hold one coordinate and momentum per molecule");
}

FullState equations_of_motion(const FullState& state, const SystemParams& params, double g)
{
    state.validate(params.n_molecules);
    const double w = params.omega_c;
    const double stiffness = params.mass * params.omega_v * params.omega_v;
    const double residual = state.q - g * kernels::sum(state.x);

    FullState d;
    d.x.resize(state.x.size());
    d.p.resize(state.x.size());
    for (std::size_t i = 0; i < state.x.size(); ++i) {
        d.x[i] = state.p[i] / params.mass;
        d.p[i] = -stiffness * state.x[i] + w * g * residual;
    }
    d.q = w * state.p_q;
    d.p_q = -w * residual;
    return d;
}

double bare_energy(std::span<const double> x, std::span<const double> p, const SystemParams& params)
{
    return kernels::quadratic_form(x, p, 0.5 * params.mass * params.omega_v * params.omega_v, 0.5 / params.mass);
}

double cavity_energy(double q, double p_q, double coordinate_sum, const SystemParams& params, double g)
{
    const double residual = q - g * coordinate_sum;
    return 0.5 * params.omega_c * (p_q * p_q + residual * residual);
}

EnergyBreakdown total_energy(const FullState& state, const SystemParams& params, double g)
{
    state.validate(params.n_molecules);
    EnergyBreakdown e;
    e.molecular.resize(state.x.size());
    for (std::size_t i = 0; i < state.x.size(); ++i)
        e.molecular[i] = bare_energy({&state.x[i], 1}, {&state.p[i], 1}, params);
    e.cavity = cavity_energy(state.q, state.p_q, kernels::sum(state.x), params, g);
    e.total = bare_energy(state.x, state.p, params) + e.cavity;
    return e;
}

double step_for_resolution(const DerivedCoupling& coupling, double steps_per_period)
{
    return 2.0 * std::numbers::pi / (coupling.omega_plus * steps_per_period);
}

SymplecticPropagator::SymplecticPropagator(const SystemParams& params, double g, double dt, int order)
    : params_(params), g_(g), dt_(dt), order_(order), weights_(composition_weights(order))
{
    require(std::isfinite(dt) && dt > 0.0, ErrorKind::InvalidParameter, "integrator step must be > 0");
}

void SymplecticPropagator::leapfrog(FullState& s, double h) const
{
    const double w = params_.omega_c;
    const double half_stiffness = 0.5 * h * params_.mass * params_.omega_v * params_.omega_v;

    double residual = s.q - g_ * kernels::sum(s.x);
    kernels::kick(s.p, s.x, half_stiffness, 0.5 * h * w * g_ * residual);
    s.p_q -= 0.5 * h * w * residual;

    kernels::axpy(s.x, s.p, h / params_.mass);
    s.q += h * w * s.p_q;

    residual = s.q - g_ * kernels::sum(s.x);
    kernels::kick(s.p, s.x, half_stiffness, 0.5 * h * w * g_ * residual);
    s.p_q -= 0.5 * h * w * residual;
}

void SymplecticPropagator::step(FullState& state) const
{
    for (double weight : weights_) leapfrog(state, weight * dt_);
}

void SymplecticPropagator::advance(FullState& state, std::size_t steps) const
{
    for (std::size_t k = 0; k < steps; ++k) step(state);
}

Trajectory integrate_with_coupling(const InitialConditions& ic, const SystemParams& params, double g, double t_end,
                                   const IntegratorOptions& options)
{
    params.validate();
    const std::size_t n = params.n_molecules;
    ic.validate(n);
    require(std::isfinite(t_end) && t_end > 0.0, ErrorKind::InvalidInput, "t_end must be > 0");
    require(options.sample_every >= 1, ErrorKind::InvalidInput, "sample_every must be >= 1");

    const double top = upper_frequency(params, g);
    const double dt = options.dt > 0.0 ? options.dt : 2.0 * std::numbers::pi / (top * kDefaultStepsPerPeriod);
    const double resolution = 2.0 * std::numbers::pi / (top * dt);
    require(resolution >= kMinStepsPerPeriod * (1.0 - 1e-12), ErrorKind::StepSizeTooLarge,
            "dt = " + shortest(dt) + " resolves the fastest mode with only " + shortest(resolution) +
                " steps per period (need >= 50)");

    const SymplecticPropagator propagator(params, g, dt, options.order);
    std::size_t steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    steps = (steps + options.sample_every - 1) / options.sample_every * options.sample_every;
    const std::size_t samples = steps / options.sample_every + 1;

    std::vector<std::size_t> recorded = options.molecules;
    if (options.record_all) {
        recorded.resize(n);
        for (std::size_t i = 0; i < n; ++i) recorded[i] = i;
    }
    for (std::size_t i : recorded)
        require(i < n, ErrorKind::InvalidIndex, "molecule index " + std::to_string(i) + " out of range");

    Trajectory traj;
    traj.times.reserve(samples);
    traj.collective_x.reserve(samples);
    traj.collective_v.reserve(samples);
    traj.cavity_q.reserve(samples);
    traj.cavity_p.reserve(samples);
    for (std::size_t i : recorded) {
        traj.locals[i].reserve(samples);
        traj.local_velocities[i].reserve(samples);
    }

    const double root_n = std::sqrt(static_cast<double>(n));
    FullState state = FullState::from_initial(ic, params);
    auto record = [&](std::size_t sample) {
        const double xs = kernels::sum(state.x);
        const double ps = kernels::sum(state.p);
        require(std::isfinite(xs) && std::isfinite(ps) && std::isfinite(state.q) && std::isfinite(state.p_q),
                ErrorKind::NumericalDivergence,
                "non-finite state at t = " + shortest(dt * static_cast<double>(sample * options.sample_every)));
        traj.times.push_back(dt * static_cast<double>(sample * options.sample_every));
        traj.collective_x.push_back(xs / root_n);
        traj.collective_v.push_back(ps / (params.mass * root_n));
        traj.cavity_q.push_back(state.q);
        traj.cavity_p.push_back(state.p_q);
        for (std::size_t i : recorded) {
            traj.locals[i].push_back(state.x[i]);
            traj.local_velocities[i].push_back(state.p[i] / params.mass);
        }
    };

    record(0);
    for (std::size_t s = 1; s < samples; ++s) {
        propagator.advance(state, options.sample_every);
        record(s);
    }
    return traj;
}

Trajectory integrate(const InitialConditions& ic, const SystemParams& params, const DerivedCoupling& coupling,
                     double t_end, const IntegratorOptions& options)
{
    const double g = coupling.g;
    const double lhs = params.omega_c * g * g * static_cast<double>(params.n_molecules);
    const double rhs = params.mass * params.omega_d * params.omega_d;
    require(std::fabs(lhs - rhs) <= 1e-12 * rhs, ErrorKind::InvalidParameter,
            "coupling g is inconsistent with omega_d (omega g^2 N != m omega_d^2)");
    return integrate_with_coupling(ic, params, g, t_end, options);
}

} // namespace vscbeat
