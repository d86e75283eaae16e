#include "vscbeat/kernels.hpp"

#include <cmath>

namespace vscbeat::kernels {
namespace {

double sum(const double* x, std::size_t n)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double quadratic_form(const double* x, const double* p, std::size_t n, double a, double b)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a * x[i] * x[i] + b * p[i] * p[i];
    return acc;
}

void kick(double* p, const double* x, std::size_t n, double stiffness, double shift)
{
    for (std::size_t i = 0; i < n; ++i) p[i] += shift - stiffness * x[i];
}

void axpy(double* y, const double* x, std::size_t n, double a)
{
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void rotate(double* u, double* v, std::size_t n, double c, double s)
{
    for (std::size_t i = 0; i < n; ++i) {
        const double ui = u[i];
        const double vi = v[i];
        u[i] = c * ui - s * vi;
        v[i] = s * ui + c * vi;
    }
}

void abs_values(double* out, const double* in, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i) out[i] = std::fabs(in[i]);
}

void pairwise_max(double* out, const double* a, const double* b, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] < b[i] ? b[i] : a[i];
}

} // namespace

const Table& scalar_table() noexcept
{
    static const Table table{
        Backend::Scalar, sum, quadratic_form, kick, axpy, rotate, abs_values, pairwise_max,
    };
    return table;
}

} // namespace vscbeat::kernels
