#pragma once

// Brute-force reference for the closed form: direct integration of Hamilton's
// equations for all N + 1 degrees of freedom, and the dense normal-mode
// spectrum of the quadratic potential.
//
// H = sum_i [p_i^2 / 2m + m wv^2 x_i^2 / 2] + w p_q^2 / 2 + (w / 2)(q - g sum_i x_i)^2
//
// The cavity has effective mass 1 / w, so dq/dt = w p_q.

#include "vscbeat/closed_form.hpp"
#include "vscbeat/params.hpp"

#include <cstddef>
#include <vector>

namespace vscbeat {

struct FullState {
    std::vector<double> x;
    std::vector<double> p;
    double q = 0.0;
    double p_q = 0.0;

    static FullState from_initial(const InitialConditions& ic, const SystemParams& params);
    void validate(std::size_t n_molecules) const;
};

/// Time derivative (dx/dt, dp/dt, dq/dt, dp_q/dt) packed as a FullState.
FullState equations_of_motion(const FullState& state, const SystemParams& params, double g);

struct EnergyBreakdown {
    std::vector<double> molecular; // bare p^2/2m + m wv^2 x^2/2 per molecule
    double cavity = 0.0;           // w p_q^2/2 + (w/2)(q - g sum x)^2
    double total = 0.0;
};

EnergyBreakdown total_energy(const FullState& state, const SystemParams& params, double g);

/// Bare energy summed over a subset of molecules (kernel-backed, no per-molecule vector).
double bare_energy(std::span<const double> x, std::span<const double> p, const SystemParams& params);
double cavity_energy(double q, double p_q, double coordinate_sum, const SystemParams& params, double g);

inline constexpr double kMinStepsPerPeriod = 50.0;
inline constexpr double kDefaultStepsPerPeriod = 200.0;
inline constexpr int kDefaultIntegratorOrder = 6;

/// dt = 2 pi / (Omega_+ K).
double step_for_resolution(const DerivedCoupling& coupling, double steps_per_period);

/// Fixed-step symmetric composition of the kick-drift-kick leapfrog. Order 2 is
/// the plain leapfrog; orders 4, 6 and 8 use the triple-jump composition, which
/// stays symplectic and time-reversible.
class SymplecticPropagator {
public:
    SymplecticPropagator(const SystemParams& params, double g, double dt, int order = kDefaultIntegratorOrder);

    void step(FullState& state) const;
    void advance(FullState& state, std::size_t steps) const;

    double dt() const noexcept { return dt_; }
    int order() const noexcept { return order_; }
    std::span<const double> stage_weights() const noexcept { return weights_; }

private:
    void leapfrog(FullState& state, double h) const;

    SystemParams params_;
    double g_;
    double dt_;
    int order_;
    std::vector<double> weights_;
};

struct IntegratorOptions {
    double dt = 0.0;              // 0 selects 2 pi / (Omega_+ * 200)
    std::size_t sample_every = 1; // record every k-th step
    int order = kDefaultIntegratorOrder;
    bool record_all = true;       // record every molecule (otherwise only `molecules`)
    std::vector<std::size_t> molecules;
};

/// Integrates from the initial conditions to t_end with coupling g from the
/// parameters. Throws StepSizeTooLarge when dt exceeds 2 pi / (50 Omega_+) and
/// NumericalDivergence when the state becomes non-finite.
Trajectory integrate(const InitialConditions& ic, const SystemParams& params, const DerivedCoupling& coupling,
                     double t_end, const IntegratorOptions& options = {});

/// Same, with an explicit coupling g (g = 0 is the decoupled system). The
/// step-size guard uses the largest normal-mode frequency of the actual system.
Trajectory integrate_with_coupling(const InitialConditions& ic, const SystemParams& params, double g, double t_end,
                                   const IntegratorOptions& options);

struct HessianSpectrum {
    std::vector<double> frequencies; // ascending
    std::size_t multiplicity_v = 0;  // modes within 1e-9 (relative) of omega_v
};

inline constexpr std::size_t kDenseLimit = 2000;

/// Dense (N+1)x(N+1) mass-weighted Hessian diagonalised with cyclic Jacobi.
HessianSpectrum hessian_spectrum(const SystemParams& params, double g);
HessianSpectrum hessian_spectrum(const SystemParams& params, const DerivedCoupling& coupling);

/// Row-major dense symmetric matrix.
class SymmetricMatrix {
public:
    explicit SymmetricMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

    std::size_t size() const noexcept { return n_; }
    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * n_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * n_ + c]; }
    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * n_, n_}; }
    std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * n_, n_}; }

private:
    std::size_t n_;
    std::vector<double> data_;
};

SymmetricMatrix mass_weighted_hessian(const SystemParams& params, double g);

struct JacobiResult {
    std::vector<double> eigenvalues; // ascending
    int sweeps = 0;
};

/// Cyclic Jacobi; converged when the off-diagonal Frobenius norm drops below
/// `tolerance` times the Frobenius norm of the input.
JacobiResult jacobi_eigenvalues(SymmetricMatrix matrix, double tolerance = 1e-14, int max_sweeps = 100);

} // namespace vscbeat
