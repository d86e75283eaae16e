// Compiled with -mavx2 -mfma; only reached after a CPUID check.

#include "vscbeat/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace vscbeat::kernels {
namespace {

inline double hsum(__m256d v)
{
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double sum(const double* x, std::size_t n)
{
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
    }
    for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += x[i];
    return acc;
}

double quadratic_form(const double* x, const double* p, std::size_t n, double a, double b)
{
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xv = _mm256_loadu_pd(x + i);
        const __m256d pv = _mm256_loadu_pd(p + i);
        acc = _mm256_fmadd_pd(_mm256_mul_pd(va, xv), xv, acc);
        acc = _mm256_fmadd_pd(_mm256_mul_pd(vb, pv), pv, acc);
    }
    double tail = hsum(acc);
    for (; i < n; ++i) tail += a * x[i] * x[i] + b * p[i] * p[i];
    return tail;
}

void kick(double* p, const double* x, std::size_t n, double stiffness, double shift)
{
    const __m256d k = _mm256_set1_pd(stiffness);
    const __m256d f = _mm256_set1_pd(shift);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d pv = _mm256_add_pd(_mm256_loadu_pd(p + i), f);
        _mm256_storeu_pd(p + i, _mm256_fnmadd_pd(k, _mm256_loadu_pd(x + i), pv));
    }
    for (; i < n; ++i) p[i] += shift - stiffness * x[i];
}

void axpy(double* y, const double* x, std::size_t n, double a)
{
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] += a * x[i];
}

void rotate(double* u, double* v, std::size_t n, double c, double s)
{
    const __m256d vc = _mm256_set1_pd(c);
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d ui = _mm256_loadu_pd(u + i);
        const __m256d vi = _mm256_loadu_pd(v + i);
        _mm256_storeu_pd(u + i, _mm256_fmsub_pd(vc, ui, _mm256_mul_pd(vs, vi)));
        _mm256_storeu_pd(v + i, _mm256_fmadd_pd(vs, ui, _mm256_mul_pd(vc, vi)));
    }
    for (; i < n; ++i) {
        const double ui = u[i];
        const double vi = v[i];
        u[i] = c * ui - s * vi;
        v[i] = s * ui + c * vi;
    }
}

void abs_values(double* out, const double* in, std::size_t n)
{
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, _mm256_and_pd(_mm256_loadu_pd(in + i), mask));
    for (; i < n; ++i) out[i] = std::fabs(in[i]);
}

void pairwise_max(double* out, const double* a, const double* b, std::size_t n)
{
    std::size_t i = 0;
    // _mm256_max_pd(b, a) returns a when the comparison is unordered or equal,
    // matching the scalar `a < b ? b : a`.
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_max_pd(_mm256_loadu_pd(b + i), _mm256_loadu_pd(a + i)));
    for (; i < n; ++i) out[i] = a[i] < b[i] ? b[i] : a[i];
}

} // namespace

const Table& avx2_kernels() noexcept
{
    static const Table table{
        Backend::Avx2, sum, quadratic_form, kick, axpy, rotate, abs_values, pairwise_max,
    };
    return table;
}

} // namespace vscbeat::kernels
