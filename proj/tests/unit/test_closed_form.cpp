#include "reference.hpp"

#include "vscbeat/closed_form.hpp"
#include "vscbeat/errors.hpp"
#include "vscbeat/scenarios.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

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

InitialConditions random_ic(std::size_t n, std::uint64_t seed, bool cavity)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    InitialConditions ic;
    for (std::size_t i = 0; i < n; ++i) {
        ic.displacements.push_back(u(rng));
        ic.velocities.push_back(u(rng));
    }
    if (cavity) {
        ic.cavity_q = u(rng);
        ic.cavity_qdot = u(rng);
    }
    return ic;
}

} // namespace

TEST_SUITE("closed_form") {

TEST_CASE("fully excited collective coordinate follows the two-polariton law")
{
    for (double w : {1.0, 1.2, 0.8}) {
        const SystemParams p = make(16, w, 0.1);
        InitialConditions ic;
        ic.displacements.assign(16, 1.0);
        ic.velocities.assign(16, 0.0);
        const ClosedFormModel m(ic, p);
        const auto& c = m.coupling();
        const double l2 = c.lambda * c.lambda;
        for (double t = 0.0; t < 200.0; t += 1.7) {
            const double expect = 4.0 * (l2 * std::cos(c.omega_plus * t) + std::cos(c.omega_minus * t)) / (l2 + 1.0);
            CHECK(m.collective().value(t) == doctest::Approx(expect).epsilon(1e-12).scale(4.0));
        }
        // A- = x0 sqrt(m N / (L^2 + 1)) and A+ = |L| A-.
        CHECK(m.modes().a_minus == doctest::Approx(std::sqrt(16.0 / (l2 + 1.0))).epsilon(1e-13));
        CHECK(m.modes().a_plus == doctest::Approx(std::fabs(c.lambda) * m.modes().a_minus).epsilon(1e-13));
    }
}

TEST_CASE("model reproduces arbitrary initial conditions")
{
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const SystemParams p = make(7, 1.1, 0.3);
        const InitialConditions ic = random_ic(7, seed, true);
        const ClosedFormModel m(ic, p);
        for (std::size_t i = 0; i < 7; ++i) {
            CHECK(m.local(i).value(0.0) == doctest::Approx(ic.displacements[i]).epsilon(1e-13).scale(1.0));
            CHECK(m.local(i).rate(0.0) == doctest::Approx(ic.velocities[i]).epsilon(1e-13).scale(1.0));
        }
        CHECK(m.cavity().value(0.0) == doctest::Approx(ic.cavity_q).epsilon(1e-13).scale(1.0));
        CHECK(m.cavity().rate(0.0) == doctest::Approx(ic.cavity_qdot).epsilon(1e-13).scale(1.0));
    }
}

TEST_CASE("relative coordinates oscillate at the bare frequency")
{
    const SystemParams p = make(6, 1.0, 0.2);
    const InitialConditions ic = random_ic(6, 9, false);
    const ClosedFormModel m(ic, p);
    for (std::size_t j = 0; j < 5; ++j) {
        const ToneSum r = m.relative(j);
        REQUIRE(r.tones().size() == 1);
        CHECK(r.tones()[0].frequency == p.omega_v);
        const double expect0 = (ic.displacements[0] - ic.displacements[j + 1]) / std::sqrt(6.0);
        CHECK(r.value(0.0) == doctest::Approx(expect0).epsilon(1e-14).scale(1.0));
    }
    CHECK_THROWS_AS(m.relative(5), Error);
}

TEST_CASE("assemble_local inverts the coordinate transform")
{
    const SystemParams p = make(5, 1.0, 0.1);
    const InitialConditions ic = random_ic(5, 4, false);
    const ClosedFormModel m(ic, p);
    std::vector<std::size_t> all{0, 1, 2, 3, 4};
    const Trajectory t = m.sample(TimeGrid::covering(30.0, 0.5), all, true);
    const auto rebuilt = assemble_local(t.collective_x, *t.relatives, p);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t k = 0; k < t.size(); ++k)
            CHECK(rebuilt[i][k] == doctest::Approx(t.locals.at(i)[k]).epsilon(1e-13).scale(1.0));
    std::vector<std::vector<double>> short_rel(3, std::vector<double>(t.size()));
    CHECK_THROWS_AS(assemble_local(t.collective_x, short_rel, p), Error);
}

TEST_CASE("fully excited local solution with random velocities")
{
    const SystemParams p = make(12, 1.0, 0.07);
    ScenarioSpec s;
    s.n_molecules = 12;
    s.kind = FullyExcited{1.0, 0.5, 21};
    const InitialConditions ic = build_initial_conditions(s, p);
    const ClosedFormModel m(ic, p);
    for (double t : {0.0, 3.0, 25.0, 90.0}) {
        const auto x = fully_excited_local(p, m.coupling(), ic.velocities, t);
        for (std::size_t i = 0; i < 12; ++i) CHECK(x[i] == doctest::Approx(m.local(i).value(t)).epsilon(1e-12).scale(1.0));
    }
    std::vector<double> bad(12, 0.1);
    CHECK_THROWS_AS(fully_excited_local(p, m.coupling(), bad, 0.0), Error);
}

TEST_CASE("partial activation closed form matches the generic model")
{
    const SystemParams p = make(20, 1.0, 0.07);
    for (double beta : {0.05, 0.2, 0.5, 1.0}) {
        ScenarioSpec s;
        s.n_molecules = 20;
        s.kind = PartiallyActivated{beta, 1.0};
        const ClosedFormModel m(build_initial_conditions(s, p), p);
        const std::size_t ex = excited_count(beta, 20);
        for (double t : {0.0, 10.0, 44.0, 150.0}) {
            const ActivatedPair pair = partially_activated_local(p, m.coupling(), beta, t);
            CHECK(pair.excited == doctest::Approx(m.local(0).value(t)).epsilon(1e-12).scale(1.0));
            if (ex < 20) CHECK(pair.ground == doctest::Approx(m.local(19).value(t)).epsilon(1e-12).scale(1.0));
        }
    }
}

TEST_CASE("ground-state response is linear in beta")
{
    const SystemParams p = make(100, 1.0, 0.07);
    const DerivedCoupling c = derive(p);
    for (double t : {5.0, 40.0, 133.0}) {
        const double a = partially_activated_local(p, c, 0.05, t).ground / 0.05;
        const double b = partially_activated_local(p, c, 0.2, t).ground / 0.2;
        CHECK(std::fabs(a - b) <= 1e-12);
    }
}

TEST_CASE("excited_count and realized_beta")
{
    CHECK(excited_count(0.2, 10) == 2);
    CHECK(excited_count(0.05, 100) == 5);
    CHECK(excited_count(0.3, 10) == 3); // 0.3 * 10 is 2.9999999999999996 in binary
    CHECK(excited_count(0.0, 10) == 0);
    CHECK(excited_count(1.0, 10) == 10);
    CHECK(realized_beta(0.25, 10) == doctest::Approx(0.2));
    CHECK_THROWS_AS(excited_count(1.5, 10), Error);
}

TEST_CASE("time grids")
{
    const TimeGrid g = TimeGrid::covering(1.0, 0.25);
    CHECK(g.count == 5);
    CHECK(g.end() == 1.0);
    const TimeGrid s = TimeGrid::sampled(2.0 * 3.141592653589793, 1.0, 64);
    CHECK(s.count == 65);
    CHECK_THROWS_AS(TimeGrid::sampled(1.0, 1.0, 2), Error);
}

TEST_CASE("initial condition and trajectory validation")
{
    InitialConditions ic;
    ic.displacements = {1.0, 2.0};
    ic.velocities = {0.0};
    CHECK_THROWS_AS(ic.validate(2), Error);
    ic.velocities = {0.0, std::nan("")};
    CHECK_THROWS_AS(ic.validate(2), Error);

    Trajectory t;
    t.times = {0.0, 1.0, 3.0};
    t.collective_x = {0, 0, 0};
    t.cavity_q = {0, 0, 0};
    CHECK_THROWS_AS(t.validate(), Error);
    t.times = {0.0, 1.0, 2.0};
    CHECK_NOTHROW(t.validate());
    t.cavity_q.pop_back();
    CHECK_THROWS_AS(t.validate(), Error);
}

}
