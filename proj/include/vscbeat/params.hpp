#pragma once

// System parameters of N identical harmonic vibrations coupled to one cavity
// mode, and the closed-form spectral quantities derived from them.
//
// Natural units: unless a model is built from SI inputs, the bare vibrational
// frequency, molecular mass and reference displacement are all 1.

#include <cstddef>
#include <optional>
#include <string>

namespace vscbeat {

struct PhysicalConstants {
    double epsilon0 = 8.8541878128e-12; // F/m
    double c = 2.99792458e8;            // m/s
    double e = 1.602176634e-19;         // C
    double m_e = 9.1093837015e-31;      // kg

    void validate() const;
};

/// Fabry-Perot cavity: area A, mirror spacing L, effective optical volume A*L.
struct CavityGeometry {
    double area = 0.0;   // m^2
    double length = 0.0; // m
    double volume = 0.0; // m^3

    /// L = pi c / omega for a cavity whose fundamental angular frequency is omega [rad/s].
    static CavityGeometry from_frequency(const PhysicalConstants& k, double area_m2, double omega_rad_s);
    static CavityGeometry from_dimensions(double area_m2, double length_m);

    double fundamental_frequency(const PhysicalConstants& k) const { return 3.14159265358979323846 * k.c / length; }
    void validate() const;
};

/// Conversion from natural units back to SI; present only on parameters built with from_si().
struct SiScale {
    double frequency_unit = 0.0; // rad/s per natural frequency unit (the bare vibrational frequency)
    double mass_unit = 0.0;      // kg
    double charge_unit = 0.0;    // C (dipole magnitude)
    PhysicalConstants constants;
    CavityGeometry geometry;
};

struct SystemParams {
    double omega_v = 1.0;      // bare vibrational frequency
    double omega_c = 1.0;      // cavity frequency
    double omega_d = 0.1;      // diamagnetic frequency (collective coupling scale)
    std::size_t n_molecules = 1;
    double mass = 1.0;
    double dipole = 1.0;
    double x0 = 1.0;           // reference displacement
    std::optional<SiScale> si;

    /// Throws InvalidParameter on any violated invariant.
    void validate() const;
};

enum class Regime { Strong, Ultrastrong, Deep };

const char* to_string(Regime regime) noexcept;

struct DerivedCoupling {
    double g = 0.0;            // dimensionless light-matter coupling
    double omega_bar_sq = 0.0; // dressed vibrational frequency squared
    double alpha = 0.0;        // detuning ratio
    double lambda = 0.0;       // mixing parameter, always negative
    double omega_plus = 0.0;
    double omega_minus = 0.0;
    double gap = 0.0;          // omega_plus - omega_minus
    double sum_freq = 0.0;     // omega_plus + omega_minus
    double vrs = 0.0;          // gap evaluated at omega_c = omega_v (equals omega_d)
    double vrs_paper = 0.0;    // sqrt(omega_d^2 (4 omega_v^2 + omega_d^2)), i.e. Omega_+^2 - Omega_-^2 at resonance
    double beat_period = 0.0;  // 4 pi / gap
    Regime regime = Regime::Strong;

    /// sqrt(1 + lambda^2), the normalisation of the polariton rotation.
    double mixing_norm() const;
};

/// g such that omega_c * g^2 * N = mass * omega_d^2.
double coupling_constant(const SystemParams& params);

/// Polariton gap sqrt((omega_c - omega_v)^2 + omega_d^2) for arbitrary cavity frequency.
double polariton_gap(double omega_v, double omega_c, double omega_d);

/// Throws DecoupledSystem when omega_d == 0.
DerivedCoupling derive(const SystemParams& params);

Regime classify_ratio(double vrs_over_omega_v) noexcept;
Regime classify_regime(const DerivedCoupling& coupling, const SystemParams& params) noexcept;

/// omega_d in rad/s from microscopic SI inputs: sqrt(mu0^2 N / (m eps0 V)).
double diamagnetic_frequency_si(const PhysicalConstants& k, const CavityGeometry& geometry, double mass_kg,
                                double dipole_c, std::size_t n);

/// Builds natural-unit parameters (omega_v = 1, mass = 1, dipole = 1) from SI inputs.
/// `freq_thz` is the molecular vibrational frequency f (omega_v = 2 pi f); the
/// cavity frequency follows from the geometry via omega_c = pi c / L.
SystemParams from_si(const PhysicalConstants& k, const CavityGeometry& geometry, double freq_thz, double mass_me,
                     double dipole_e, std::size_t n);

struct SiSummary {
    double freq_thz = 0.0;        // vibrational frequency
    double cavity_freq_thz = 0.0; // cavity frequency
    double omega_d_rad_s = 0.0;
    double mass_me = 0.0;
    double dipole_e = 0.0;
    std::size_t n = 0;
};

/// Inverse of from_si(). Throws InvalidParameter if the parameters carry no SI scale.
SiSummary to_si(const SystemParams& params);

std::string describe(const SystemParams& params);

} // namespace vscbeat
