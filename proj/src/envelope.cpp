#include "vscbeat/envelope.hpp"

#include "vscbeat/errors.hpp"
#include "vscbeat/format.hpp"
#include "vscbeat/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>

namespace vscbeat {

std::vector<double> sliding_abs_max(std::span<const double> signal, std::size_t window)
{
    const std::size_t n = signal.size();
    if (n == 0) return {};
    require(window >= 1, ErrorKind::InvalidInput, "window must be >= 1");
    const std::size_t half = window / 2;
    const std::size_t width = 2 * half + 1;

    // van Herk / Gil-Werman: block-wise prefix and suffix maxima over the
    // zero-padded signal, then one pairwise max per output sample.
    const std::size_t padded = n + 2 * half;
    std::vector<double> a(padded, 0.0);
    kernels::abs_values(std::span<double>(a).subspan(half, n), signal);

    std::vector<double> prefix(padded);
    std::vector<double> suffix(padded);
    for (std::size_t start = 0; start < padded; start += width) {
        const std::size_t stop = std::min(start + width, padded);
        prefix[start] = a[start];
        for (std::size_t i = start + 1; i < stop; ++i) prefix[i] = std::max(prefix[i - 1], a[i]);
        suffix[stop - 1] = a[stop - 1];
        for (std::size_t i = stop - 1; i > start; --i) suffix[i - 1] = std::max(suffix[i], a[i - 1]);
    }

    std::vector<double> out(n);
    kernels::pairwise_max(out, std::span<const double>(suffix).first(n),
                          std::span<const double>(prefix).subspan(width - 1, n));
    return out;
}

std::vector<CarrierPeak> carrier_peaks(std::span<const double> times, std::span<const double> signal)
{
    require(times.size() == signal.size(), ErrorKind::InvalidInput, "times and signal lengths differ");
    std::vector<CarrierPeak> peaks;
    if (signal.size() < 3) return peaks;
    const double dt = times[1] - times[0];
    for (std::size_t i = 1; i + 1 < signal.size(); ++i) {
        const double y0 = std::fabs(signal[i - 1]);
        const double y1 = std::fabs(signal[i]);
        const double y2 = std::fabs(signal[i + 1]);
        if (!(y1 >= y0 && y1 > y2)) continue;
        const double curvature = y0 - 2.0 * y1 + y2;
        const double shift = curvature != 0.0 ? 0.5 * (y0 - y2) / curvature : 0.0;
        peaks.push_back({times[i] + shift * dt, y1 - 0.25 * (y0 - y2) * shift});
    }
    return peaks;
}

std::vector<double> plateau_minima(std::span<const double> envelope, double threshold)
{
    std::vector<double> out;
    const std::size_t n = envelope.size();
    std::size_t i = 1;
    while (i + 1 < n) {
        std::size_t j = i;
        while (j + 1 < n && envelope[j + 1] == envelope[i]) ++j;
        if (j + 1 < n && envelope[i - 1] > envelope[i] && envelope[j + 1] > envelope[i] && envelope[i] < threshold)
            out.push_back(0.5 * static_cast<double>(i + j));
        i = j + 1;
    }
    return out;
}

namespace {

struct Vertex {
    double time;
    double depth;
};

// Least-squares fit of height^2 = a u^2 + b u + c, u = t - centre, over the
// carrier peaks within one bare period of the coarse node.
std::optional<Vertex> refine_node(std::span<const CarrierPeak> peaks, double centre, double reach)
{
    double s[5] = {};
    double r[3] = {};
    std::size_t used = 0;
    for (const CarrierPeak& pk : peaks) {
        const double u = pk.time - centre;
        if (std::fabs(u) > reach) continue;
        const double y = pk.height * pk.height;
        double power = 1.0;
        for (int k = 0; k < 5; ++k) {
            s[k] += power;
            if (k < 3) r[k] += power * y;
            power *= u;
        }
        ++used;
    }
    if (used < 3) return std::nullopt;

    // Normal equations for (c, b, a): [s0 s1 s2; s1 s2 s3; s2 s3 s4] * (c b a) = (r0 r1 r2).
    const double m[3][3] = {{s[0], s[1], s[2]}, {s[1], s[2], s[3]}, {s[2], s[3], s[4]}};
    auto det3 = [](const double (&x)[3][3]) {
        return x[0][0] * (x[1][1] * x[2][2] - x[1][2] * x[2][1]) - x[0][1] * (x[1][0] * x[2][2] - x[1][2] * x[2][0]) +
               x[0][2] * (x[1][0] * x[2][1] - x[1][1] * x[2][0]);
    };
    const double d = det3(m);
    if (d == 0.0 || !std::isfinite(d)) return std::nullopt;
    double coef[3];
    for (int col = 0; col < 3; ++col) {
        double t[3][3];
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) t[a][b] = b == col ? r[a] : m[a][b];
        coef[col] = det3(t) / d;
    }
    const double c = coef[0];
    const double b = coef[1];
    const double a = coef[2];
    if (!(a > 0.0)) return std::nullopt;
    const double u = -b / (2.0 * a);
    if (std::fabs(u) > reach) return std::nullopt;
    return Vertex{centre + u, std::sqrt(std::max(c - b * b / (4.0 * a), 0.0))};
}

} // namespace

BeatAnalysis analyze_beating(std::span<const double> times, std::span<const double> signal, double omega_v,
                             double window_periods)
{
    require(times.size() == signal.size(), ErrorKind::InvalidInput, "times and signal lengths differ");
    require(times.size() >= 3, ErrorKind::InsufficientSpan, "need at least 3 samples");
    require(omega_v > 0.0 && window_periods > 0.0, ErrorKind::InvalidParameter,
            "omega_v and window_periods must be > 0");

    const double dt = times[1] - times[0];
    const double bare_period = 2.0 * std::numbers::pi / omega_v;
    std::size_t window = static_cast<std::size_t>(std::lround(window_periods * bare_period / dt));
    window |= 1u;
    const std::size_t half = window / 2;
    require(signal.size() > 2 * half + 2, ErrorKind::InsufficientSpan,
            "trajectory shorter than the envelope window");

    const std::vector<double> env = sliding_abs_max(signal, window);
    const auto interior = std::span<const double>(env).subspan(half, env.size() - 2 * half);
    const auto [lo, hi] = std::minmax_element(interior.begin(), interior.end());
    const double threshold = 0.5 * (*lo + *hi);

    std::vector<double> coarse;
    for (double k : plateau_minima(env, threshold))
        if (k >= static_cast<double>(half) && k <= static_cast<double>(env.size() - 1 - half)) coarse.push_back(k);
    require(coarse.size() >= 2, ErrorKind::InsufficientSpan,
            "found " + std::to_string(coarse.size()) + " envelope minima, need 2");

    const std::vector<CarrierPeak> peaks = carrier_peaks(times, signal);
    BeatAnalysis out;
    double first_depth = 0.0;
    for (std::size_t m = 0; m < coarse.size(); ++m) {
        const double centre = times[0] + coarse[m] * dt;
        const std::optional<Vertex> v = refine_node(peaks, centre, bare_period);
        out.node_times.push_back(v ? v->time : centre);
        if (m == 0) first_depth = v ? v->depth : env[static_cast<std::size_t>(coarse[m])];
    }
    out.period = 2.0 * (out.node_times[1] - out.node_times[0]);

    double peak = 0.0;
    for (double y : signal) peak = std::max(peak, std::fabs(y));
    out.envelope_min_measured = peak > 0.0 ? first_depth / peak : 0.0;
    return out;
}

namespace {

// Least squares by modified Gram-Schmidt with one reorthogonalisation pass;
// the two predictor columns are nearly parallel when one tone dominates.
std::pair<double, double> solve_two_columns(const std::vector<double>& a, const std::vector<double>& b,
                                            const std::vector<double>& rhs)
{
    auto dot = [](const std::vector<double>& x, const std::vector<double>& y) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
        return s;
    };
    const double r11 = std::sqrt(dot(a, a));
    require(r11 > 0.0, ErrorKind::InvalidInput, "signal is identically zero");
    std::vector<double> q1(a.size()), q2 = b;
    for (std::size_t i = 0; i < a.size(); ++i) q1[i] = a[i] / r11;
    double r12 = 0.0;
    for (int pass = 0; pass < 2; ++pass) {
        const double c = dot(q1, q2);
        r12 += c;
        for (std::size_t i = 0; i < q2.size(); ++i) q2[i] -= c * q1[i];
    }
    const double r22 = std::sqrt(dot(q2, q2));
    require(r22 > 1e-14 * r11, ErrorKind::InvalidInput, "signal holds a single tone");
    for (double& v : q2) v /= r22;
    const double y2 = dot(q2, rhs) / r22;
    const double y1 = (dot(q1, rhs) - r12 * y2) / r11;
    return {y1, y2};
}

// Dense least squares for the amplitude fit (4 unknowns, partial pivoting).
std::array<double, 4> solve4(std::array<std::array<double, 5>, 4> m)
{
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::fabs(m[r][col]) > std::fabs(m[pivot][col])) pivot = r;
        std::swap(m[col], m[pivot]);
        require(m[col][col] != 0.0, ErrorKind::InvalidInput, "singular amplitude fit");
        for (int r = col + 1; r < 4; ++r) {
            const double f = m[r][col] / m[col][col];
            for (int c = col; c < 5; ++c) m[r][c] -= f * m[col][c];
        }
    }
    std::array<double, 4> x{};
    for (int r = 3; r >= 0; --r) {
        double s = m[r][4];
        for (int c = r + 1; c < 4; ++c) s -= m[r][c] * x[c];
        x[r] = s / m[r][r];
    }
    return x;
}

// Both frequencies from the order-4 recurrence at sample lag `lag`; requires
// every tone below pi / (lag h).
std::pair<double, double> recurrence_frequencies(std::span<const double> signal, double h, std::size_t lag)
{
    const std::size_t rows = signal.size() - 4 * lag;
    std::vector<double> outer(rows), centre(rows), rhs(rows);
    for (std::size_t k = 0; k < rows; ++k) {
        outer[k] = signal[k + 3 * lag] + signal[k + lag];
        centre[k] = -signal[k + 2 * lag];
        rhs[k] = signal[k + 4 * lag] + signal[k];
    }
    const auto [c1, c2] = solve_two_columns(outer, centre, rhs);

    // u^2 - c1 u + (c2 - 2) = 0
    const double disc = c1 * c1 - 4.0 * (c2 - 2.0);
    require(disc >= 0.0, ErrorKind::InvalidInput, "samples are not a sum of two real tones");
    const double root = std::sqrt(disc);
    const double u_big = 0.5 * (c1 + (c1 >= 0.0 ? root : -root));
    const double u_small = u_big != 0.0 ? (c2 - 2.0) / u_big : 0.5 * (c1 - root);
    const double step = h * static_cast<double>(lag);
    auto frequency = [&](double u) {
        require(std::fabs(u) <= 2.0 + 1e-12, ErrorKind::InvalidInput, "samples are not a sum of two real tones");
        return std::acos(std::clamp(0.5 * u, -1.0, 1.0)) / step;
    };
    const double a = frequency(u_big);
    const double b = frequency(u_small);
    return {std::min(a, b), std::max(a, b)};
}

} // namespace

double TwoToneFit::period() const
{
    return 4.0 * std::numbers::pi / (omega_high - omega_low);
}

double TwoToneFit::envelope_min() const
{
    return std::fabs(amplitude_high - amplitude_low) / (amplitude_high + amplitude_low);
}

TwoToneFit fit_two_tones(std::span<const double> times, std::span<const double> signal)
{
    require(times.size() == signal.size(), ErrorKind::InvalidInput, "times and signal lengths differ");
    const std::size_t n = signal.size();
    require(n >= 16, ErrorKind::InsufficientSpan, "two-tone fit needs at least 16 samples");
    const double h = times[1] - times[0];

    // A first pass at lag 1 locates the faster tone; the second pass uses the
    // lag that puts it near a quarter turn per step, where the two roots are
    // best separated.
    std::pair<double, double> w = recurrence_frequencies(signal, h, 1);
    const std::size_t max_lag = (n - 8) / 4;
    const auto lag = static_cast<std::size_t>(
        std::clamp(std::floor(0.5 * std::numbers::pi / (w.second * h)), 1.0, static_cast<double>(max_lag)));
    if (lag > 1) w = recurrence_frequencies(signal, h, lag);
    const double w1 = w.first;
    const double w2 = w.second;

    std::array<std::array<double, 5>, 4> normal{};
    double power = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = times[k] - times[0];
        const double basis[4] = {std::cos(w1 * t), std::sin(w1 * t), std::cos(w2 * t), std::sin(w2 * t)};
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) normal[r][c] += basis[r] * basis[c];
            normal[r][4] += basis[r] * signal[k];
        }
        power += signal[k] * signal[k];
    }
    const std::array<double, 4> coef = solve4(normal);
    double misfit = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = times[k] - times[0];
        const double model = coef[0] * std::cos(w1 * t) + coef[1] * std::sin(w1 * t) + coef[2] * std::cos(w2 * t) +
                             coef[3] * std::sin(w2 * t);
        misfit += (signal[k] - model) * (signal[k] - model);
    }

    TwoToneFit fit;
    fit.omega_low = w1;
    fit.omega_high = w2;
    fit.amplitude_low = std::hypot(coef[0], coef[1]);
    fit.amplitude_high = std::hypot(coef[2], coef[3]);
    fit.residual = power > 0.0 ? std::sqrt(misfit / power) : 0.0;
    require(fit.residual <= 1e-6, ErrorKind::InvalidInput,
            "samples are not a two-tone sum (relative misfit " + shortest(fit.residual) + ")");
    require(w2 > w1, ErrorKind::InvalidInput, "two-tone fit found a single frequency");
    return fit;
}

double measure_beating_period(const Trajectory& traj, std::span<const double> signal, const SystemParams& params)
{
    traj.validate();
    require(signal.size() == traj.size(), ErrorKind::InvalidInput, "signal length differs from the time grid");
    const DerivedCoupling coupling = derive(params);
    const double span = traj.times.empty() ? 0.0 : traj.times.back() - traj.times.front();
    require(span >= 1.25 * coupling.beat_period * (1.0 - 1e-9), ErrorKind::InsufficientSpan,
            "trajectory spans " + shortest(span) + ", need >= 1.25 beat periods (" +
                shortest(1.25 * coupling.beat_period) + ")");
    return analyze_beating(traj.times, signal, params.omega_v).period;
}

double measure_beating_period(const Trajectory& traj, const SystemParams& params)
{
    return measure_beating_period(traj, traj.collective_x, params);
}

} // namespace vscbeat
