#include "vscbeat/errors.hpp"
#include "vscbeat/kernels.hpp"
#include "vscbeat/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vscbeat {

SymmetricMatrix mass_weighted_hessian(const SystemParams& params, double g)
{
    const std::size_t n = params.n_molecules;
    const double w = params.omega_c;
    SymmetricMatrix h(n + 1);
    // V = sum m wv^2 x_i^2 / 2 + (w/2)(q - g sum x_i)^2, weights sqrt(m) on x_i and 1/sqrt(w) on q.
    const double shared = w * g * g / params.mass;
    const double bare = params.omega_v * params.omega_v;
    const double cross = -w * g * std::sqrt(w / params.mass);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) h(i, j) = shared;
        h(i, i) += bare;
        h(i, n) = cross;
        h(n, i) = cross;
    }
    h(n, n) = w * w;
    return h;
}

JacobiResult jacobi_eigenvalues(SymmetricMatrix a, double tolerance, int max_sweeps)
{
    const std::size_t n = a.size();
    double norm_sq = 0.0;
    for (std::size_t r = 0; r < n; ++r)
        for (double v : a.row(r)) norm_sq += v * v;
    const double threshold = tolerance * std::sqrt(norm_sq);

    JacobiResult result;
    auto off_diagonal = [&] {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                if (r != c) s += a(r, c) * a(r, c);
        return std::sqrt(s);
    };

    while (off_diagonal() > threshold) {
        require(result.sweeps < max_sweeps, ErrorKind::NumericalDivergence,
                "Jacobi eigensolver did not converge in " + std::to_string(max_sweeps) + " sweeps");
        ++result.sweeps;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p);
                const double aqq = a(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                double t;
                if (std::fabs(theta) > 1e150)
                    t = 0.5 / theta;
                else
                    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                kernels::rotate(a.row(p), a.row(q), c, s);
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    a(r, p) = a(p, r);
                    a(r, q) = a(q, r);
                }
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }

    result.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) result.eigenvalues[i] = a(i, i);
    std::sort(result.eigenvalues.begin(), result.eigenvalues.end());
    return result;
}

HessianSpectrum hessian_spectrum(const SystemParams& params, double g)
{
    params.validate();
    require(params.n_molecules <= kDenseLimit, ErrorKind::TooLargeForDense,
            "N = " + std::to_string(params.n_molecules) + " exceeds the dense eigensolver limit of " +
                std::to_string(kDenseLimit));

    const JacobiResult eig = jacobi_eigenvalues(mass_weighted_hessian(params, g));
    HessianSpectrum out;
    out.frequencies.reserve(eig.eigenvalues.size());
    const double scale = eig.eigenvalues.empty() ? 1.0 : std::fabs(eig.eigenvalues.back());
    for (double lambda : eig.eigenvalues) {
        require(lambda > -1e-12 * scale, ErrorKind::NumericalDivergence, "negative Hessian eigenvalue");
        out.frequencies.push_back(std::sqrt(std::max(lambda, 0.0)));
    }
    out.multiplicity_v = static_cast<std::size_t>(std::count_if(
        out.frequencies.begin(), out.frequencies.end(),
        [wv = params.omega_v](double f) { return std::fabs(f - wv) <= 1e-9 * wv; }));
    return out;
}

HessianSpectrum hessian_spectrum(const SystemParams& params, const DerivedCoupling& coupling)
{
    return hessian_spectrum(params, coupling.g);
}

} // namespace vscbeat
