#pragma once

// Exact first-moment dynamics. The collective coordinate X = N^{-1/2} sum x_i
// and the cavity quadrature q form two polariton normal modes Q+-(t) =
// A+- sin(Omega+- t + phi+-); the N-1 relative coordinates
// xr_j = N^{-1/2}(x_1 - x_j) oscillate at the bare frequency independently of
// the cavity. Molecule coordinates are recovered from both.
//
// Molecule indices are 0-based throughout the API. Relative mode j (0-based)
// corresponds to molecule j + 1.

#include "vscbeat/params.hpp"
#include "vscbeat/tones.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace vscbeat {

struct InitialConditions {
    std::vector<double> displacements; // x_i(0)
    std::vector<double> velocities;    // dx_i/dt(0)
    double cavity_q = 0.0;
    double cavity_qdot = 0.0;

    std::size_t size() const noexcept { return displacements.size(); }

    /// Throws InvalidInitialConditions on length mismatch or non-finite entries.
    void validate(std::size_t n_molecules) const;
};

struct RelativeMode {
    double amplitude = 0.0;
    double phase = 0.0;
};

struct ModeAmplitudes {
    double a_plus = 0.0;
    double a_minus = 0.0;
    double phi_plus = 0.0;
    double phi_minus = 0.0;
    std::vector<RelativeMode> relative; // N-1 entries
};

struct CollectiveState {
    double x = 0.0;      // X
    double x_rate = 0.0; // dX/dt
    double q = 0.0;
    double q_rate = 0.0; // dq/dt = omega_c p_q
};

/// Uniform sampling grid starting at t = 0.
struct TimeGrid {
    double dt = 0.0;
    std::size_t count = 0;

    double time(std::size_t i) const noexcept { return dt * static_cast<double>(i); }
    double end() const noexcept { return count ? time(count - 1) : 0.0; }

    /// Samples 0, dt, ..., up to and including t_end (within rounding).
    static TimeGrid covering(double t_end, double dt);

    /// `samples_per_period` samples per bare period 2 pi / omega_v.
    static TimeGrid sampled(double t_end, double omega_v, std::size_t samples_per_period);
};

inline constexpr std::size_t kDefaultSamplesPerPeriod = 64;
inline constexpr double kDefaultSpanBeats = 2.0;

/// 64 samples per bare period over two beat periods.
TimeGrid default_grid(const SystemParams& params, const DerivedCoupling& coupling);

struct Trajectory {
    std::vector<double> times;
    std::vector<double> collective_x;
    std::vector<double> collective_v; // may be empty
    std::vector<double> cavity_q;
    std::vector<double> cavity_p;     // may be empty; p_q = (dq/dt) / omega_c
    std::map<std::size_t, std::vector<double>> locals;
    std::map<std::size_t, std::vector<double>> local_velocities;
    std::optional<std::vector<std::vector<double>>> relatives;

    std::size_t size() const noexcept { return times.size(); }
    bool has_momenta() const noexcept;

    /// Throws InvalidInput if series lengths differ or the grid is not uniform and increasing.
    void validate() const;
};

ModeAmplitudes fit_polariton_modes(const InitialConditions& ic, const SystemParams& params,
                                   const DerivedCoupling& coupling);

CollectiveState eval_collective(const ModeAmplitudes& modes, const DerivedCoupling& coupling,
                                const SystemParams& params, double t);

std::vector<double> eval_relative(const ModeAmplitudes& modes, const SystemParams& params, double t);

ToneSum collective_tones(const ModeAmplitudes& modes, const DerivedCoupling& coupling, const SystemParams& params);
ToneSum cavity_tones(const ModeAmplitudes& modes, const DerivedCoupling& coupling, const SystemParams& params);

/// x_i for all N molecules from X(t) and the N-1 relative series.
std::vector<std::vector<double>> assemble_local(std::span<const double> collective,
                                                const std::vector<std::vector<double>>& relatives,
                                                const SystemParams& params);

/// All molecules displaced by x0 with velocities summing to zero, cavity at rest.
std::vector<double> fully_excited_local(const SystemParams& params, const DerivedCoupling& coupling,
                                        std::span<const double> velocities, double t);

/// Number of initially displaced molecules, floor(beta N).
std::size_t excited_count(double beta, std::size_t n_molecules);
double realized_beta(double beta, std::size_t n_molecules);

struct ActivatedPair {
    double excited = 0.0;
    double ground = 0.0;
};

/// The first floor(beta N) molecules displaced by x0, all at rest, cavity at rest.
ActivatedPair partially_activated_local(const SystemParams& params, const DerivedCoupling& coupling, double beta,
                                        double t);

/// Closed-form model fitted once from initial conditions; cheap per-sample evaluation.
class ClosedFormModel {
public:
    ClosedFormModel(const InitialConditions& ic, const SystemParams& params);

    const SystemParams& params() const noexcept { return params_; }
    const DerivedCoupling& coupling() const noexcept { return coupling_; }
    const ModeAmplitudes& modes() const noexcept { return modes_; }

    const ToneSum& collective() const noexcept { return collective_; }
    const ToneSum& cavity() const noexcept { return cavity_; }
    ToneSum relative(std::size_t j) const;
    ToneSum local(std::size_t molecule) const;

    Trajectory sample(const TimeGrid& grid, std::span<const std::size_t> molecules, bool with_relatives = false) const;

private:
    SystemParams params_;
    DerivedCoupling coupling_;
    ModeAmplitudes modes_;
    ToneSum collective_;
    ToneSum cavity_;
    ToneSum relative_sum_;
};

} // namespace vscbeat
