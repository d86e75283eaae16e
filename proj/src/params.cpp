#include "vscbeat/params.hpp"

#include "vscbeat/errors.hpp"
#include "vscbeat/format.hpp"

#include <cmath>
#include <numbers>

namespace vscbeat {
namespace {

void require_positive(double value, const char* name)
{
    require(std::isfinite(value) && value > 0.0, ErrorKind::InvalidParameter,
            std::string(name) + " must be finite and > 0 (got " + shortest(value) + ")");
}

struct Spectrum {
    double omega_plus;
    double omega_minus;
    double gap;
    double detuning_sq; // dressed vibrational frequency^2 - cavity frequency^2
};

// Eigenfrequencies of the 2x2 mass-weighted collective/cavity Hessian
// [[wv^2 + wd^2, -w wd], [-w wd, w^2]]. The lower branch comes from the
// determinant (w wv)^2 and the gap from the eigenvalue split divided by the
// frequency sum, which keeps both accurate when the coupling or the detuning
// is tiny.
Spectrum polariton_spectrum(double wv, double w, double wd)
{
    const double detuning_sq = (wv - w) * (wv + w) + wd * wd;
    const double split = std::hypot(2.0 * wd * w, detuning_sq);
    const double trace = wv * wv + wd * wd + w * w;
    const double upper_sq = 0.5 * (trace + split);
    const double lower_sq = (w * wv) * (w * wv) / upper_sq;
    const double upper = std::sqrt(upper_sq);
    const double lower = std::sqrt(lower_sq);
    return {upper, lower, split / (upper + lower), detuning_sq};
}

} // namespace

void PhysicalConstants::validate() const
{
    require_positive(epsilon0, "epsilon0");
    require_positive(c, "c");
    require_positive(e, "e");
    require_positive(m_e, "m_e");
}

CavityGeometry CavityGeometry::from_frequency(const PhysicalConstants& k, double area_m2, double omega_rad_s)
{
    require_positive(area_m2, "cavity area");
    require_positive(omega_rad_s, "cavity frequency");
    return from_dimensions(area_m2, std::numbers::pi * k.c / omega_rad_s);
}

CavityGeometry CavityGeometry::from_dimensions(double area_m2, double length_m)
{
    require_positive(area_m2, "cavity area");
    require_positive(length_m, "cavity length");
    return {area_m2, length_m, area_m2 * length_m};
}

void CavityGeometry::validate() const
{
    require_positive(area, "cavity area");
    require_positive(length, "cavity length");
    require_positive(volume, "cavity volume");
    require(std::fabs(volume - area * length) <= 1e-12 * volume, ErrorKind::InvalidParameter,
            "cavity volume must equal area * length");
}

void SystemParams::validate() const
{
    require_positive(omega_v, "omega_v");
    require_positive(omega_c, "omega_c");
    require(std::isfinite(omega_d) && omega_d >= 0.0, ErrorKind::InvalidParameter,
            "omega_d must be finite and >= 0 (got " + shortest(omega_d) + ")");
    require(n_molecules >= 1, ErrorKind::InvalidParameter, "n_molecules must be >= 1");
    require_positive(mass, "mass");
    require_positive(dipole, "dipole");
    require_positive(x0, "x0");
    if (si) {
        si->constants.validate();
        si->geometry.validate();
        const double expected = diamagnetic_frequency_si(si->constants, si->geometry, mass * si->mass_unit,
                                                         dipole * si->charge_unit, n_molecules);
        const double actual = omega_d * si->frequency_unit;
        require(std::fabs(actual - expected) <= 1e-9 * expected, ErrorKind::InvalidParameter,
                "omega_d is inconsistent with the SI dipole, mass, volume and N");
    }
}

const char* to_string(Regime regime) noexcept
{
    switch (regime) {
    case Regime::Strong: return "strong";
    case Regime::Ultrastrong: return "ultrastrong";
    case Regime::Deep: return "deep";
    }
    return "unknown";
}

double DerivedCoupling::mixing_norm() const
{
    return std::hypot(1.0, lambda);
}

double coupling_constant(const SystemParams& params)
{
    return params.omega_d * std::sqrt(params.mass / (params.omega_c * static_cast<double>(params.n_molecules)));
}

double polariton_gap(double omega_v, double omega_c, double omega_d)
{
    return std::hypot(omega_c - omega_v, omega_d);
}

DerivedCoupling derive(const SystemParams& params)
{
    params.validate();
    require(params.omega_d > 0.0, ErrorKind::DecoupledSystem,
            "omega_d = 0: the mixing parameter is undefined for a decoupled cavity");

    const double wv = params.omega_v;
    const double w = params.omega_c;
    const double wd = params.omega_d;
    const Spectrum s = polariton_spectrum(wv, w, wd);

    DerivedCoupling out;
    out.g = coupling_constant(params);
    out.omega_bar_sq = wv * wv + wd * wd;
    out.alpha = -s.detuning_sq / (2.0 * wd * w);
    // Lambda = alpha - sqrt(1 + alpha^2), written to avoid cancellation for alpha >> 1.
    out.lambda = out.alpha <= 0.0 ? out.alpha - std::hypot(1.0, out.alpha)
                                  : -1.0 / (out.alpha + std::hypot(1.0, out.alpha));
    out.omega_plus = s.omega_plus;
    out.omega_minus = s.omega_minus;
    out.gap = s.gap;
    out.sum_freq = s.omega_plus + s.omega_minus;
    out.vrs = polariton_gap(wv, wv, wd);
    out.vrs_paper = wd * std::sqrt(4.0 * wv * wv + wd * wd);
    out.beat_period = 4.0 * std::numbers::pi / out.gap;
    out.regime = classify_regime(out, params);
    return out;
}

Regime classify_ratio(double ratio) noexcept
{
    if (ratio < 0.1) return Regime::Strong;
    if (ratio < 1.0) return Regime::Ultrastrong;
    return Regime::Deep;
}

Regime classify_regime(const DerivedCoupling& coupling, const SystemParams& params) noexcept
{
    return classify_ratio(coupling.vrs / params.omega_v);
}

double diamagnetic_frequency_si(const PhysicalConstants& k, const CavityGeometry& geometry, double mass_kg,
                                double dipole_c, std::size_t n)
{
    return std::sqrt(dipole_c * dipole_c * static_cast<double>(n) / (mass_kg * k.epsilon0 * geometry.volume));
}

SystemParams from_si(const PhysicalConstants& k, const CavityGeometry& geometry, double freq_thz, double mass_me,
                     double dipole_e, std::size_t n)
{
    k.validate();
    geometry.validate();
    require_positive(freq_thz, "freq_thz");
    require_positive(mass_me, "mass_me");
    require_positive(dipole_e, "dipole_e");
    require(n >= 1, ErrorKind::InvalidParameter, "n must be >= 1");

    const double omega_v_si = 2.0 * std::numbers::pi * freq_thz * 1e12;
    const double mass_kg = mass_me * k.m_e;
    const double dipole_c = dipole_e * k.e;

    SystemParams p;
    p.omega_v = 1.0;
    p.omega_c = geometry.fundamental_frequency(k) / omega_v_si;
    p.omega_d = diamagnetic_frequency_si(k, geometry, mass_kg, dipole_c, n) / omega_v_si;
    p.n_molecules = n;
    p.mass = 1.0;
    p.dipole = 1.0;
    p.x0 = 1.0;
    p.si = SiScale{omega_v_si, mass_kg, dipole_c, k, geometry};
    p.validate();
    return p;
}

SiSummary to_si(const SystemParams& params)
{
    require(params.si.has_value(), ErrorKind::InvalidParameter, "parameters carry no SI scale");
    const SiScale& s = *params.si;
    const double thz = 2.0 * std::numbers::pi * 1e12;
    SiSummary out;
    out.freq_thz = params.omega_v * s.frequency_unit / thz;
    out.cavity_freq_thz = params.omega_c * s.frequency_unit / thz;
    out.omega_d_rad_s = params.omega_d * s.frequency_unit;
    out.mass_me = params.mass * s.mass_unit / s.constants.m_e;
    out.dipole_e = params.dipole * s.charge_unit / s.constants.e;
    out.n = params.n_molecules;
    return out;
}

std::string describe(const SystemParams& p)
{
    return "omega_v=" + shortest(p.omega_v) + " omega=" + shortest(p.omega_c) + " omega_d=" + shortest(p.omega_d) +
           " n=" + std::to_string(p.n_molecules) + " mass=" + shortest(p.mass) + " x0=" + shortest(p.x0);
}

} // namespace vscbeat
