#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vscbeat {

/// amplitude * sin(frequency * t + phase)
struct Tone {
    double amplitude = 0.0;
    double frequency = 0.0;
    double phase = 0.0;
};

/// A finite sum of sinusoids. Every closed-form coordinate of the coupled
/// system (collective, cavity, relative, per-molecule) is one of these.
class ToneSum {
public:
    ToneSum() = default;
    explicit ToneSum(std::vector<Tone> tones) : tones_(std::move(tones)) {}

    void add(Tone tone) { tones_.push_back(tone); }
    void append(const ToneSum& other, double scale = 1.0);

    std::span<const Tone> tones() const noexcept { return tones_; }
    bool empty() const noexcept { return tones_.empty(); }

    double value(double t) const;
    double rate(double t) const;

    /// Modulus of the analytic signal, |sum a_k exp(i (w_k t + phi_k))|.
    double envelope(double t) const;

    /// Minimum of envelope() on [t0, t1], scanned on `samples` points then refined
    /// by golden-section search around the best sample.
    double envelope_minimum(double t0, double t1, std::size_t samples = 4096) const;

    /// Merges tones sharing a frequency (exact comparison) into a single tone.
    ToneSum merged() const;

private:
    std::vector<Tone> tones_;
};

/// Phase in [0, 2 pi).
double wrap_phase(double phase);

/// Amplitude/phase of a(t) = A sin(w t + phi) with a(0) = value and a'(0) = rate.
/// Amplitude is non-negative; a zero amplitude gets phase 0.
Tone tone_from_initial(double value, double rate, double frequency);

} // namespace vscbeat
