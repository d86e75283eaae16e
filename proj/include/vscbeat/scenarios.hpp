#pragma once

// Named initial conditions, observables on trajectories and detuning sweeps.

#include "vscbeat/closed_form.hpp"
#include "vscbeat/params.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace vscbeat {

/// Every molecule displaced by x0; velocities uniform in
/// [-velocity_scale, velocity_scale] * x0 * omega_v, then mean-subtracted.
struct FullyExcited {
    double x0 = 1.0;
    double velocity_scale = 0.0;
    std::uint64_t seed = 0;
};

/// The first floor(beta N) molecules displaced by x0, everything at rest.
struct PartiallyActivated {
    double beta = 0.2;
    double x0 = 1.0;
};

struct Custom {
    InitialConditions ic;
};

struct ScenarioSpec {
    std::variant<FullyExcited, PartiallyActivated, Custom> kind = FullyExcited{};
    std::size_t n_molecules = 1;

    void validate() const;
    std::string describe() const;
};

enum class Warning { EmptyExcitedSet };
const char* to_string(Warning warning) noexcept;

/// Cavity always starts at rest. Deterministic for a given seed.
InitialConditions build_initial_conditions(const ScenarioSpec& spec, const SystemParams& params,
                                           std::vector<Warning>* warnings = nullptr);

/// Molecules that start displaced or moving (0-based, ascending).
std::vector<std::size_t> excited_set(const ScenarioSpec& spec, const InitialConditions& ic);

struct EnergySeries {
    std::vector<double> times;
    std::vector<double> excited; // bare energy summed over the excited set
    std::vector<double> ground;  // bare energy summed over the rest
    std::vector<double> cavity;  // w p_q^2/2 + (w/2)(q - g sum x)^2
    std::vector<double> total;
};

/// Needs every molecule's coordinate and velocity plus the cavity momentum;
/// throws MissingMomenta otherwise.
EnergySeries energy_partition(const Trajectory& traj, const SystemParams& params, double g,
                              std::span<const std::size_t> excited);

struct PhasePoint {
    double time = 0.0;
    double x = 0.0;
    double p_scaled = 0.0; // p / (m omega_v) = v / omega_v
};

/// Exact points from the closed form.
std::vector<PhasePoint> phase_space_samples(const ClosedFormModel& model, std::size_t molecule,
                                            std::span<const double> times);

/// Cubic Hermite interpolation of a sampled trajectory (needs the molecule's velocity series).
std::vector<PhasePoint> phase_space_samples(const Trajectory& traj, std::size_t molecule,
                                            std::span<const double> times, const SystemParams& params);

/// The same molecule with the cavity coupling switched off: a circle of radius
/// hypot(x(0), v(0) / omega_v).
std::vector<PhasePoint> uncoupled_phase_samples(double x_initial, double v_initial, const SystemParams& params,
                                                std::span<const double> times);

struct Observables {
    double beat_period_analytic = 0.0;
    std::optional<double> beat_period_measured;
    std::string measure_status = "ok";
    double envelope_min = 0.0;                   // exact envelope of X over one beat period / its maximum
    std::optional<double> envelope_min_measured; // same, from the sampled X
    std::optional<EnergySeries> energy_partition;
    std::vector<PhasePoint> phase_points;
};

/// Quantities recomputable from a sampled collective coordinate alone.
struct MeasuredBeat {
    std::optional<double> period;
    std::optional<double> envelope_min;
    std::string method;        // kEnvelopeMethod or kTwoToneMethod
    std::string status = "ok"; // error text when neither estimator applies
};

/// The envelope estimator is used while the gap is below
/// kEstimatorMaxGapRatio * omega_v and the measured modulation depth reaches
/// kMinModulationDepth; otherwise the two-tone fit measures the trajectory.
MeasuredBeat measure_collective(const Trajectory& traj, const SystemParams& params);

/// Exact envelope minimum of X over one beat period divided by the envelope maximum.
double exact_envelope_min(const ClosedFormModel& model);

enum class Measure { Analytic, FromTrajectory, Both };

struct SweepSpec {
    std::vector<double> detuning_grid; // omega_c / omega_v
    double omega_d = 0.1;
    ScenarioSpec scenario;
    Measure measure = Measure::Analytic;
    std::size_t threads = 1;

    void validate() const;
};

struct SweepRow {
    double ratio = 0.0;
    double gap = 0.0;
    double beat_period_analytic = 0.0;
    std::optional<double> beat_period_measured;
    double envelope_min = 0.0;
    std::string method; // empty for analytic-only rows
    std::string status = "ok";
};

/// Rows come back in grid order; a failing point becomes a row status.
std::vector<SweepRow> detuning_sweep(const SweepSpec& spec, const SystemParams& params);

inline constexpr const char* kEnvelopeMethod = "envelope";
inline constexpr const char* kTwoToneMethod = "two_tone";

/// Below this relative modulation depth (1 - envelope_min) the beat is lost in
/// the carrier sampling ripple of the sliding maximum.
inline constexpr double kMinModulationDepth = 0.01;

} // namespace vscbeat
