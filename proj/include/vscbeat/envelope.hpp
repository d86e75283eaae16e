#pragma once

// Beat-period estimation from a sampled two-frequency signal.
//
// The envelope is the sliding-window maximum of |signal| over three bare
// periods. Its strict local minima that fall below the midpoint of the
// envelope range are beat nodes (T/4, 3T/4, ... for a signal starting at an
// antinode); each node is then refined by a parabolic fit of the squared
// carrier peak heights around it.

#include "vscbeat/closed_form.hpp"
#include "vscbeat/params.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace vscbeat {

/// out[i] = max |signal[j]| for |j - i| <= window / 2. Samples beyond either end count as 0.
std::vector<double> sliding_abs_max(std::span<const double> signal, std::size_t window);

struct CarrierPeak {
    double time = 0.0;
    double height = 0.0;
};

/// Local maxima of |signal| on a uniform grid, parabolically interpolated.
std::vector<CarrierPeak> carrier_peaks(std::span<const double> times, std::span<const double> signal);

/// Fractional indices of strict local minima of `envelope` below `threshold`.
/// A flat run of equal values counts once, at its centre.
std::vector<double> plateau_minima(std::span<const double> envelope, double threshold);

struct BeatAnalysis {
    double period = 0.0;
    std::vector<double> node_times;        // refined envelope minima
    double envelope_min_measured = 0.0;    // refined envelope depth at the first node / max |signal|
};

/// Throws InsufficientSpan when fewer than two nodes are found.
BeatAnalysis analyze_beating(std::span<const double> times, std::span<const double> signal, double omega_v,
                             double window_periods = 3.0);

/// Beat period of the collective coordinate. Requires a span of at least
/// 1.25 analytic beat periods.
double measure_beating_period(const Trajectory& traj, const SystemParams& params);

/// Same, for any sampled series on the trajectory's time grid (e.g. a molecule coordinate).
double measure_beating_period(const Trajectory& traj, std::span<const double> signal, const SystemParams& params);

/// Two tones a sin(w1 t + p1) + b sin(w2 t + p2) sampled at spacing h obey
/// x[k+4] + x[k] = c1 (x[k+3] + x[k+1]) - c2 x[k+2] with c1 = u1 + u2,
/// c2 = u1 u2 + 2 and u = 2 cos(w h). Fitting (c1, c2) by least squares gives
/// both frequencies for any gap and any amplitude ratio; the amplitudes then
/// follow from a linear fit.
struct TwoToneFit {
    double omega_low = 0.0;
    double omega_high = 0.0;
    double amplitude_low = 0.0;
    double amplitude_high = 0.0;
    double residual = 0.0; // rms misfit / rms signal

    double period() const; // 4 pi / (omega_high - omega_low)
    double envelope_min() const; // |A_high - A_low| / (A_high + A_low)
};

/// Throws InsufficientSpan with fewer than 16 samples and InvalidInput when
/// the samples are not a two-tone sum (relative misfit above 1e-6).
TwoToneFit fit_two_tones(std::span<const double> times, std::span<const double> signal);

/// Gap / omega_v below which the three-period window reliably separates carrier and beat.
inline constexpr double kEstimatorMaxGapRatio = 0.25;

} // namespace vscbeat
