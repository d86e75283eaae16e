#include "vscbeat/closed_form.hpp"
#include "vscbeat/errors.hpp"
#include "vscbeat/oracle.hpp"
#include "vscbeat/scenarios.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

using namespace vscbeat;

namespace {

SystemParams make(std::size_t n, double w, double wd)
{
    SystemParams p;
    p.n_molecules = n;
    p.omega_c = w;
    p.omega_d = wd;
    return p;
}

ScenarioSpec fully(std::size_t n, double scale, std::uint64_t seed)
{
    ScenarioSpec s;
    s.n_molecules = n;
    s.kind = FullyExcited{1.0, scale, seed};
    return s;
}

ScenarioSpec partial(std::size_t n, double beta)
{
    ScenarioSpec s;
    s.n_molecules = n;
    s.kind = PartiallyActivated{beta, 1.0};
    return s;
}

std::vector<double> linspace(double a, double b, std::size_t n)
{
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

double radius(const PhasePoint& p)
{
    return std::hypot(p.x, p.p_scaled);
}

} // namespace

TEST_SUITE("scenarios") {

TEST_CASE("fully excited without velocities")
{
    const SystemParams p = make(7, 1.0, 0.1);
    const InitialConditions ic = build_initial_conditions(fully(7, 0.0, 3), p);
    for (std::size_t i = 0; i < 7; ++i) {
        CHECK(ic.displacements[i] == 1.0);
        CHECK(ic.velocities[i] == 0.0);
    }
    CHECK(ic.cavity_q == 0.0);
    CHECK(ic.cavity_qdot == 0.0);
}

TEST_CASE("seeded velocities are deterministic, bounded and mean free")
{
    const SystemParams p = make(101, 1.0, 0.1);
    const InitialConditions a = build_initial_conditions(fully(101, 0.5, 42), p);
    const InitialConditions b = build_initial_conditions(fully(101, 0.5, 42), p);
    const InitialConditions c = build_initial_conditions(fully(101, 0.5, 43), p);
    CHECK(a.velocities == b.velocities);
    CHECK(a.velocities != c.velocities);
    CHECK(std::fabs(std::accumulate(a.velocities.begin(), a.velocities.end(), 0.0)) < 1e-12);
    for (double v : a.velocities) CHECK(std::fabs(v) <= 1.0);
}

TEST_CASE("partial activation")
{
    const SystemParams p = make(10, 1.0, 0.1);
    std::vector<Warning> warnings;
    const InitialConditions ic = build_initial_conditions(partial(10, 0.2), p, &warnings);
    CHECK(warnings.empty());
    const std::vector<double> expect{1, 1, 0, 0, 0, 0, 0, 0, 0, 0};
    CHECK(ic.displacements == expect);
    CHECK(std::all_of(ic.velocities.begin(), ic.velocities.end(), [](double v) { return v == 0.0; }));
    CHECK(excited_set(partial(10, 0.2), ic) == std::vector<std::size_t>{0, 1});

    const InitialConditions empty = build_initial_conditions(partial(10, 0.05), p, &warnings);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0] == Warning::EmptyExcitedSet);
    CHECK(std::all_of(empty.displacements.begin(), empty.displacements.end(), [](double x) { return x == 0.0; }));
}

TEST_CASE("scenario validation")
{
    CHECK_THROWS_AS(partial(10, 1.5).validate(), Error);
    CHECK_THROWS_AS(fully(10, -1.0, 0).validate(), Error);
    CHECK_THROWS_AS(build_initial_conditions(fully(10, 0.0, 0), make(9, 1.0, 0.1)), Error);
    ScenarioSpec custom;
    custom.n_molecules = 2;
    custom.kind = Custom{InitialConditions{{1.0}, {0.0}}};
    CHECK_THROWS_AS(custom.validate(), Error);
    CHECK(fully(3, 0.5, 9).describe() == "fully_excited x0=1 velocity_scale=0.5 seed=9 n=3");
}

TEST_CASE("custom scenario keeps the cavity state")
{
    ScenarioSpec s;
    s.n_molecules = 2;
    s.kind = Custom{InitialConditions{{1.0, 0.5}, {0.0, 0.1}, 0.3, -0.2}};
    const InitialConditions ic = build_initial_conditions(s, make(2, 1.0, 0.1));
    CHECK(ic.cavity_q == 0.3);
    CHECK(ic.cavity_qdot == -0.2);
    CHECK(excited_set(s, ic) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("energy partition at t = 0 and along the oracle")
{
    const SystemParams p = make(20, 1.0, 0.07);
    const DerivedCoupling c = derive(p);
    const ScenarioSpec s = partial(20, 0.2);
    const InitialConditions ic = build_initial_conditions(s, p);
    const Trajectory t = integrate(ic, p, c, c.beat_period);
    const EnergySeries e = energy_partition(t, p, c.g, excited_set(s, ic));

    CHECK(e.ground.front() == 0.0);
    CHECK(e.excited.front() == doctest::Approx(4 * 0.5));
    const double self_polarisation = 0.5 * p.omega_c * c.g * c.g * 16.0;
    CHECK(e.cavity.front() == doctest::Approx(self_polarisation).epsilon(1e-14));

    double worst = 0.0;
    for (double total : e.total) worst = std::max(worst, std::fabs(total - e.total.front()) / e.total.front());
    CHECK(worst < 1e-8);
    const double peak = *std::max_element(e.ground.begin(), e.ground.end());
    CHECK(peak > 0.0);
    CHECK(peak > 100.0 * e.ground[1]);

    FullState state = FullState::from_initial(ic, p);
    CHECK(total_energy(state, p, c.g).total == doctest::Approx(e.total.front()).epsilon(1e-14));
}

TEST_CASE("fully excited energy at rest")
{
    const SystemParams p = make(8, 1.3, 0.2);
    const DerivedCoupling c = derive(p);
    const InitialConditions ic = build_initial_conditions(fully(8, 0.0, 0), p);
    const EnergyBreakdown e = total_energy(FullState::from_initial(ic, p), p, c.g);
    CHECK(e.total == doctest::Approx(8 * 0.5 + 0.5 * 1.3 * c.g * c.g * 64).epsilon(1e-14));
    const EnergyBreakdown rest = total_energy(FullState::from_initial(InitialConditions{std::vector<double>(8, 0.0), std::vector<double>(8, 0.0)}, p), p, c.g);
    CHECK(rest.total == 0.0);
}

TEST_CASE("energy partition needs momenta")
{
    const SystemParams p = make(3, 1.0, 0.1);
    const ClosedFormModel m(build_initial_conditions(fully(3, 0.0, 0), p), p);
    const std::vector<std::size_t> molecules{0, 1, 2};
    Trajectory t = m.sample(TimeGrid::covering(5.0, 0.1), molecules);
    CHECK_NOTHROW(energy_partition(t, p, m.coupling().g, std::vector<std::size_t>{0}));
    t.local_velocities.erase(1);
    try {
        energy_partition(t, p, m.coupling().g, std::vector<std::size_t>{0});
        FAIL("expected MissingMomenta");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MissingMomenta);
    }
}

TEST_CASE("uncoupled phase space is a circle")
{
    const SystemParams p = make(1, 1.0, 0.1);
    const auto times = linspace(0.0, 50.0, 301);
    const auto pts = uncoupled_phase_samples(0.8, -0.3, p, times);
    const double r0 = std::hypot(0.8, -0.3);
    for (const auto& pt : pts) CHECK(std::fabs(radius(pt) - r0) < 1e-8);
}

TEST_CASE("coupled molecules spiral inwards at resonance")
{
    const SystemParams p = make(10, 1.0, 0.07);
    const ClosedFormModel m(build_initial_conditions(fully(10, 0.0, 0), p), p);
    const double t4 = m.coupling().beat_period / 4.0;
    const std::vector<double> times{0.0, 5.0, 25.0, t4};
    const auto pts = phase_space_samples(m, 3, times);
    CHECK(radius(pts[0]) == doctest::Approx(1.0));
    CHECK(radius(pts[2]) < radius(pts[1]));
    CHECK(radius(pts[3]) < 0.1 * radius(pts[0]));
    CHECK_THROWS_AS(phase_space_samples(m, 10, times), Error);
}

TEST_CASE("interpolated phase space from a sampled trajectory")
{
    const SystemParams p = make(6, 1.0, 0.07);
    const DerivedCoupling c = derive(p);
    const InitialConditions ic = build_initial_conditions(fully(6, 0.4, 5), p);
    IntegratorOptions o;
    o.sample_every = 2;
    o.record_all = false;
    o.molecules = {2};
    const Trajectory t = integrate(ic, p, c, 30.0, o);
    const ClosedFormModel m(ic, p);
    const std::vector<double> times{0.0, 1.234, 5.0, 17.77, 25.0};
    const auto a = phase_space_samples(t, 2, times, p);
    const auto b = phase_space_samples(m, 2, times);
    for (std::size_t k = 0; k < times.size(); ++k) {
        CHECK(a[k].x == doctest::Approx(b[k].x).epsilon(1e-6));
        CHECK(a[k].p_scaled == doctest::Approx(b[k].p_scaled).epsilon(1e-5));
    }
    try {
        phase_space_samples(t, 1, times, p);
        FAIL("expected InvalidIndex");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidIndex);
    }
    const std::vector<double> late{1000.0};
    CHECK_THROWS_AS(phase_space_samples(t, 2, late, p), Error);
}

TEST_CASE("measure_collective status")
{
    const SystemParams wide = make(4, 1.0, 0.5);
    const ClosedFormModel m(build_initial_conditions(fully(4, 0.0, 0), wide), wide);
    const MeasuredBeat out = measure_collective(m.sample(default_grid(wide, m.coupling()), {}), wide);
    CHECK(out.status == "ok");
    CHECK(out.method == kTwoToneMethod);
    REQUIRE(out.period);
    CHECK(*out.period == doctest::Approx(m.coupling().beat_period).epsilon(1e-9));
    CHECK(*out.envelope_min == doctest::Approx(exact_envelope_min(m)).epsilon(1e-6));

    const SystemParams p = make(4, 1.0, 0.1);
    const ClosedFormModel ok(build_initial_conditions(fully(4, 0.0, 0), p), p);
    const MeasuredBeat beat = measure_collective(ok.sample(default_grid(p, ok.coupling()), {}), p);
    CHECK(beat.status == "ok");
    CHECK(beat.method == kEnvelopeMethod);
    REQUIRE(beat.period);
    CHECK(std::fabs(*beat.period - ok.coupling().beat_period) / ok.coupling().beat_period < 0.02);
    CHECK(exact_envelope_min(ok) == doctest::Approx(0.0499).epsilon(1e-3));
}

TEST_CASE("detuning sweep")
{
    SweepSpec spec;
    spec.detuning_grid = linspace(0.5, 2.0, 301);
    spec.omega_d = 0.02;
    spec.scenario = fully(4, 0.0, 0);
    const auto rows = detuning_sweep(spec, make(4, 1.0, 0.1));
    REQUIRE(rows.size() == 301);
    const auto top = std::max_element(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return a.beat_period_analytic < b.beat_period_analytic;
    });
    CHECK(top->ratio == 1.0);
    CHECK(top->beat_period_analytic == doctest::Approx(4.0 * std::numbers::pi / 0.02).epsilon(1e-12));
    for (const auto& r : rows) {
        const double gap = std::sqrt((r.ratio - 1.0) * (r.ratio - 1.0) + 0.02 * 0.02);
        CHECK(std::fabs(r.gap - gap) / gap < 1e-12);
        CHECK(r.status == "ok");
        CHECK_FALSE(r.beat_period_measured);
    }
}

TEST_CASE("threaded sweep matches the serial one")
{
    SweepSpec spec;
    spec.detuning_grid = linspace(0.8, 1.2, 41);
    spec.omega_d = 0.1;
    spec.scenario = fully(5, 0.0, 0);
    spec.measure = Measure::Both;
    const SystemParams p = make(5, 1.0, 0.1);
    const auto serial = detuning_sweep(spec, p);
    spec.threads = 4;
    const auto threaded = detuning_sweep(spec, p);
    REQUIRE(serial.size() == threaded.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].beat_period_measured == threaded[i].beat_period_measured);
        CHECK(serial[i].envelope_min == threaded[i].envelope_min);
        CHECK(serial[i].status == threaded[i].status);
        if (serial[i].beat_period_measured)
            CHECK(std::fabs(*serial[i].beat_period_measured - serial[i].beat_period_analytic) /
                      serial[i].beat_period_analytic <
                  0.02);
    }
}

TEST_CASE("sweep grid validation")
{
    SweepSpec spec;
    spec.scenario = fully(2, 0.0, 0);
    const SystemParams p = make(2, 1.0, 0.1);
    CHECK_THROWS_AS(detuning_sweep(spec, p), Error);
    spec.detuning_grid = {1.0, 0.9};
    CHECK_THROWS_AS(detuning_sweep(spec, p), Error);
    spec.detuning_grid = {-1.0, 1.0};
    CHECK_THROWS_AS(detuning_sweep(spec, p), Error);
    spec.detuning_grid = {1.0, 1.1};
    spec.omega_d = 0.0;
    CHECK_THROWS_AS(detuning_sweep(spec, p), Error);
}

}
