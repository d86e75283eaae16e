#pragma once

// Data-parallel inner loops used by the integrator, the dense eigensolver and
// the envelope estimator. Each kernel has a scalar reference implementation and
// (on x86-64) an AVX2/FMA variant; the variant is picked once at startup from
// CPUID and may be overridden with VSCBEAT_SIMD=scalar|avx2.

#include <cstddef>
#include <span>

namespace vscbeat::kernels {

enum class Backend { Scalar, Avx2 };

struct Table {
    Backend backend;
    // sum_i x[i]
    double (*sum)(const double* x, std::size_t n);
    // sum_i (a * x[i]^2 + b * p[i]^2)
    double (*quadratic_form)(const double* x, const double* p, std::size_t n, double a, double b);
    // p[i] += shift - stiffness * x[i]
    void (*kick)(double* p, const double* x, std::size_t n, double stiffness, double shift);
    // y[i] += a * x[i]
    void (*axpy)(double* y, const double* x, std::size_t n, double a);
    // (u, v) <- (c u - s v, s u + c v)
    void (*rotate)(double* u, double* v, std::size_t n, double c, double s);
    // out[i] = |in[i]|
    void (*abs_values)(double* out, const double* in, std::size_t n);
    // out[i] = max(a[i], b[i])
    void (*pairwise_max)(double* out, const double* a, const double* b, std::size_t n);
};

const Table& scalar_table() noexcept;

/// nullptr when the AVX2 variant was not compiled in.
const Table* avx2_table() noexcept;

bool backend_available(Backend backend) noexcept;
const char* backend_name(Backend backend) noexcept;

const Table& active() noexcept;
Backend active_backend() noexcept;

/// Switches the process-wide backend. Throws InvalidParameter if unavailable.
void force_backend(Backend backend);

inline double sum(std::span<const double> x)
{
    return active().sum(x.data(), x.size());
}

inline double quadratic_form(std::span<const double> x, std::span<const double> p, double a, double b)
{
    return active().quadratic_form(x.data(), p.data(), x.size(), a, b);
}

inline void kick(std::span<double> p, std::span<const double> x, double stiffness, double shift)
{
    active().kick(p.data(), x.data(), p.size(), stiffness, shift);
}

inline void axpy(std::span<double> y, std::span<const double> x, double a)
{
    active().axpy(y.data(), x.data(), y.size(), a);
}

inline void rotate(std::span<double> u, std::span<double> v, double c, double s)
{
    active().rotate(u.data(), v.data(), u.size(), c, s);
}

inline void abs_values(std::span<double> out, std::span<const double> in)
{
    active().abs_values(out.data(), in.data(), out.size());
}

inline void pairwise_max(std::span<double> out, std::span<const double> a, std::span<const double> b)
{
    active().pairwise_max(out.data(), a.data(), b.data(), out.size());
}

} // namespace vscbeat::kernels
