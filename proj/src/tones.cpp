#include "vscbeat/tones.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace vscbeat {

void ToneSum::append(const ToneSum& other, double scale)
{
    for (const Tone& t : other.tones_) tones_.push_back({scale * t.amplitude, t.frequency, t.phase});
}

double ToneSum::value(double t) const
{
    double acc = 0.0;
    for (const Tone& k : tones_) acc += k.amplitude * std::sin(k.frequency * t + k.phase);
    return acc;
}

double ToneSum::rate(double t) const
{
    double acc = 0.0;
    for (const Tone& k : tones_) acc += k.amplitude * k.frequency * std::cos(k.frequency * t + k.phase);
    return acc;
}

double ToneSum::envelope(double t) const
{
    std::complex<double> acc{0.0, 0.0};
    for (const Tone& k : tones_) acc += std::polar(k.amplitude, k.frequency * t + k.phase);
    return std::abs(acc);
}

double ToneSum::envelope_minimum(double t0, double t1, std::size_t samples) const
{
    samples = std::max<std::size_t>(samples, 3);
    const double h = (t1 - t0) / static_cast<double>(samples - 1);
    std::size_t best = 0;
    double best_value = envelope(t0);
    for (std::size_t i = 1; i < samples; ++i) {
        const double v = envelope(t0 + h * static_cast<double>(i));
        if (v < best_value) {
            best_value = v;
            best = i;
        }
    }
    double a = t0 + h * static_cast<double>(best > 0 ? best - 1 : 0);
    double b = t0 + h * static_cast<double>(std::min(best + 1, samples - 1));
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = envelope(c);
    double fd = envelope(d);
    for (int iter = 0; iter < 80 && (b - a) > 1e-13 * std::max(1.0, std::fabs(b)); ++iter) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = envelope(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = envelope(d);
        }
    }
    return std::min({best_value, fc, fd});
}

ToneSum ToneSum::merged() const
{
    std::vector<std::pair<double, std::complex<double>>> bins;
    for (const Tone& k : tones_) {
        auto it = std::find_if(bins.begin(), bins.end(), [&](const auto& b) { return b.first == k.frequency; });
        const std::complex<double> phasor = std::polar(k.amplitude, k.phase);
        if (it == bins.end())
            bins.emplace_back(k.frequency, phasor);
        else
            it->second += phasor;
    }
    ToneSum out;
    for (const auto& [freq, phasor] : bins) {
        const double a = std::abs(phasor);
        out.add({a, freq, a > 0.0 ? wrap_phase(std::arg(phasor)) : 0.0});
    }
    return out;
}

double wrap_phase(double phase)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(phase, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r = 0.0;
    return r;
}

Tone tone_from_initial(double value, double rate, double frequency)
{
    const double quadrature = rate / frequency;
    const double amplitude = std::hypot(value, quadrature);
    if (amplitude == 0.0) return {0.0, frequency, 0.0};
    return {amplitude, frequency, wrap_phase(std::atan2(value, quadrature))};
}

} // namespace vscbeat
