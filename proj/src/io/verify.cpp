#include "vscbeat/io/verify.hpp"

#include "vscbeat/closed_form.hpp"
#include "vscbeat/envelope.hpp"
#include "vscbeat/errors.hpp"
#include "vscbeat/oracle.hpp"
#include "vscbeat/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>

namespace vscbeat::io {

namespace {

double rel(double a, double b)
{
    return std::fabs(a - b) / std::max(std::fabs(b), 1e-300);
}

CheckResult guarded(const std::string& name, double tolerance, const std::function<double()>& measure)
{
    CheckResult r{name, false, 0.0, tolerance, {}};
    try {
        r.value = measure();
        r.passed = std::isfinite(r.value) && r.value <= tolerance;
    } catch (const Error& e) {
        r.note = e.what();
    }
    return r;
}

} // namespace

bool VerifyReport::all_passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

VerifyReport run_verification(const VerifyOptions& o)
{
    SystemParams params;
    params.n_molecules = o.n_molecules;
    params.omega_c = o.omega_c;
    params.omega_d = o.omega_d;
    params.validate();
    const DerivedCoupling coupling = derive(params);
    const double span = (o.quick ? 1.0 : 2.0) * coupling.beat_period;

    ScenarioSpec scenario;
    scenario.n_molecules = o.n_molecules;
    scenario.kind = FullyExcited{params.x0, o.velocity_scale, o.seed};
    const InitialConditions ic = build_initial_conditions(scenario, params);
    const ClosedFormModel model(ic, params);

    VerifyReport report;

    report.checks.push_back(guarded("spectrum", 1e-9, [&] {
        const HessianSpectrum s = hessian_spectrum(params, coupling);
        std::vector<double> expected{coupling.omega_minus};
        expected.insert(expected.end(), o.n_molecules - 1, params.omega_v);
        expected.push_back(coupling.omega_plus);
        std::sort(expected.begin(), expected.end());
        double worst = 0.0;
        for (std::size_t i = 0; i < expected.size(); ++i) worst = std::max(worst, rel(s.frequencies[i], expected[i]));
        return worst;
    }));

    report.checks.push_back(guarded("identities", 1e-12, [&] {
        const std::size_t points = o.quick ? 50 : 200;
        double worst = 0.0;
        for (std::size_t i = 0; i < points; ++i) {
            SystemParams p = params;
            p.omega_c = params.omega_v * (0.5 + 1.5 * static_cast<double>(i) / static_cast<double>(points - 1));
            const DerivedCoupling c = derive(p);
            const double w = p.omega_c, wv = p.omega_v, wd = p.omega_d;
            worst = std::max(worst, rel(c.gap, std::sqrt((w - wv) * (w - wv) + wd * wd)));
            worst = std::max(worst, rel(c.omega_plus * c.omega_minus, w * wv));
            worst = std::max(worst, rel(c.omega_plus * c.omega_plus + c.omega_minus * c.omega_minus,
                                        wv * wv + w * w + wd * wd));
        }
        return worst;
    }));

    IntegratorOptions opts;
    opts.order = o.order;
    std::optional<Trajectory> oracle;
    report.checks.push_back(guarded("closed_vs_oracle", 1e-6, [&] {
        oracle = integrate(ic, params, coupling, span, opts);
        double worst = 0.0;
        std::vector<ToneSum> locals;
        for (std::size_t i = 0; i < o.n_molecules; ++i) locals.push_back(model.local(i));
        for (std::size_t k = 0; k < oracle->size(); ++k)
            for (std::size_t i = 0; i < o.n_molecules; ++i)
                worst = std::max(worst, std::fabs(oracle->locals.at(i)[k] - locals[i].value(oracle->times[k])));
        return worst / params.x0;
    }));

    report.checks.push_back(guarded("energy_drift", 1e-8, [&] {
        require(oracle.has_value(), ErrorKind::NumericalDivergence, "no oracle trajectory");
        const EnergySeries e = energy_partition(*oracle, params, coupling.g, excited_set(scenario, ic));
        double worst = 0.0;
        for (double total : e.total) worst = std::max(worst, rel(total, e.total.front()));
        return worst;
    }));

    report.checks.push_back(guarded("time_reversal", 1e-9, [&] {
        const double dt = step_for_resolution(coupling, kDefaultStepsPerPeriod);
        const SymplecticPropagator prop(params, coupling.g, dt, o.order);
        const std::size_t steps = static_cast<std::size_t>(std::ceil(0.25 * span / dt));
        FullState state = FullState::from_initial(ic, params);
        const FullState start = state;
        prop.advance(state, steps);
        for (double& p : state.p) p = -p;
        state.p_q = -state.p_q;
        prop.advance(state, steps);
        double worst = std::max(std::fabs(state.q - start.q), std::fabs(state.p_q + start.p_q));
        for (std::size_t i = 0; i < o.n_molecules; ++i) {
            worst = std::max(worst, std::fabs(state.x[i] - start.x[i]));
            worst = std::max(worst, std::fabs(state.p[i] + start.p[i]));
        }
        return worst / params.x0;
    }));

    report.checks.push_back(guarded("reconstruction", 1e-10, [&] {
        const TimeGrid grid = TimeGrid::sampled(span, params.omega_v, 16);
        std::vector<std::size_t> all(o.n_molecules);
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        const Trajectory t = model.sample(grid, all, true);
        const auto rebuilt = assemble_local(t.collective_x, *t.relatives, params);
        double worst = 0.0;
        for (std::size_t i = 0; i < o.n_molecules; ++i)
            for (std::size_t k = 0; k < grid.count; ++k)
                worst = std::max(worst, std::fabs(rebuilt[i][k] - t.locals.at(i)[k]));
        return worst / params.x0;
    }));

    if (coupling.gap < kEstimatorMaxGapRatio * params.omega_v) {
        report.checks.push_back(guarded("beat_period", 0.02, [&] {
            const Trajectory t = model.sample(default_grid(params, coupling), {});
            return rel(measure_beating_period(t, params), coupling.beat_period);
        }));
    }
    return report;
}

void print_report(std::ostream& out, const VerifyReport& report)
{
    char buf[256];
    for (const CheckResult& c : report.checks) {
        std::snprintf(buf, sizeof buf, "%s %-17s value=%.3e tol=%.0e", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                      c.value, c.tolerance);
        out << buf;
        if (!c.note.empty()) out << " (" << c.note << ')';
        out << '\n';
    }
    const auto passed = std::count_if(report.checks.begin(), report.checks.end(),
                                      [](const CheckResult& c) { return c.passed; });
    out << passed << '/' << report.checks.size() << " checks passed\n";
}

} // namespace vscbeat::io
