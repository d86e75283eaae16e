// Acceptance gate: one PASS/FAIL line per criterion. Detail lines start with
// two spaces. Exit status is non-zero when any selected criterion fails.

#include "vscbeat/closed_form.hpp"
#include "vscbeat/envelope.hpp"
#include "vscbeat/oracle.hpp"
#include "vscbeat/params.hpp"
#include "vscbeat/scenarios.hpp"

#include <CLI11.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace vscbeat;

namespace {

constexpr double kPi = std::numbers::pi;

std::string cli_path;

struct Verdict {
    bool pass = true;
    std::vector<std::string> details;

    void check(bool ok, const std::string& what)
    {
        pass = pass && ok;
        details.push_back(std::string(ok ? "ok   " : "MISS ") + what);
    }
};

std::string fmt(const char* f, double a)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

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

double rel(double a, double b)
{
    return std::fabs(a - b) / std::fabs(b);
}

// Quadratic-root polariton frequencies, written out independently of the library.
std::pair<double, double> polaritons(double wv, double w, double wd)
{
    const long double b = (long double)wv * wv + (long double)wd * wd + (long double)w * w;
    const long double c = (long double)w * wv * w * wv;
    const long double up2 = 0.5L * (b + std::sqrt(b * b - 4.0L * c));
    return {static_cast<double>(std::sqrt(up2)), static_cast<double>(std::sqrt(c / up2))};
}

// ---- AC1 -------------------------------------------------------------------

Verdict ac1()
{
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    bool multiplicity = true;
    for (std::size_t n : {2u, 5u, 50u}) {
        for (double w : {1.0, 0.8, 1.2}) {
            const SystemParams p = make(n, w, 0.1);
            const HessianSpectrum s = hessian_spectrum(p, derive(p));
            const auto [up, lo] = polaritons(1.0, w, 0.1);
            std::vector<double> expected(n - 1, 1.0);
            expected.push_back(up);
            expected.push_back(lo);
            std::sort(expected.begin(), expected.end());
            for (std::size_t i = 0; i < expected.size(); ++i) worst = std::max(worst, rel(s.frequencies[i], expected[i]));
            multiplicity = multiplicity && s.multiplicity_v == n - 1;
        }
    }
    const double elapsed = seconds_since(start);
    v.check(worst <= 1e-9, "max relative eigenfrequency error " + fmt("%.2e", worst) + " (N = 2, 5, 50)");
    v.check(multiplicity, "N-1 modes at omega_v");
    v.check(elapsed < 1.0, "runtime " + fmt("%.3f", elapsed) + " s");
    return v;
}

// ---- AC2 -------------------------------------------------------------------

Verdict ac2()
{
    Verdict v;
    for (double scale : {0.0, 0.3}) {
        const auto start = std::chrono::steady_clock::now();
        const SystemParams p = make(20, 1.0, 0.1);
        const DerivedCoupling c = derive(p);
        const InitialConditions ic = build_initial_conditions(fully(20, scale, 1), p);
        IntegratorOptions o;
        o.dt = step_for_resolution(c, 200.0);
        const Trajectory t = integrate(ic, p, c, 2.0 * c.beat_period, o);
        const ClosedFormModel m(ic, p);
        double worst = 0.0;
        for (std::size_t i = 0; i < 20; ++i) {
            const ToneSum x = m.local(i);
            const auto& series = t.locals.at(i);
            for (std::size_t k = 0; k < t.size(); ++k) worst = std::max(worst, std::fabs(series[k] - x.value(t.times[k])));
        }
        const double elapsed = seconds_since(start);
        const std::string label = "velocity_scale " + fmt("%.1f", scale) + ": ";
        v.check(worst < 1e-6, label + "max |x_closed - x_oracle| " + fmt("%.2e", worst) + " over " +
                                  std::to_string(t.size()) + " samples to t = " + fmt("%.1f", t.times.back()));
        v.check(elapsed < 10.0, label + "runtime " + fmt("%.3f", elapsed) + " s");
    }
    return v;
}

// ---- AC3 -------------------------------------------------------------------

Verdict ac3()
{
    Verdict v;
    double gap = 0.0, product = 0.0, sum = 0.0;
    for (double wd : {0.02, 0.1, 0.2, 0.5}) {
        for (std::size_t i = 0; i < 200; ++i) {
            const double w = 0.5 + 1.5 * static_cast<double>(i) / 199.0;
            const DerivedCoupling c = derive(make(10, w, wd));
            gap = std::max(gap, rel(c.gap, std::sqrt((w - 1.0) * (w - 1.0) + wd * wd)));
            product = std::max(product, rel(c.omega_plus * c.omega_minus, w));
            sum = std::max(sum, rel(c.omega_plus * c.omega_plus + c.omega_minus * c.omega_minus, 1.0 + w * w + wd * wd));
        }
    }
    v.check(gap <= 1e-12, "gap law " + fmt("%.2e", gap));
    v.check(product <= 1e-12, "product rule " + fmt("%.2e", product));
    v.check(sum <= 1e-12, "trace rule " + fmt("%.2e", sum));
    return v;
}

// ---- AC4 -------------------------------------------------------------------

double fwhm(const std::vector<double>& x, const std::vector<double>& y)
{
    const auto top = std::max_element(y.begin(), y.end()) - y.begin();
    const double half = 0.5 * y[static_cast<std::size_t>(top)];
    auto cross = [&](long from, long step) {
        for (long i = from; i + step >= 0 && i + step < static_cast<long>(y.size()); i += step)
            if (y[static_cast<std::size_t>(i + step)] < half) {
                const double a = y[static_cast<std::size_t>(i)], b = y[static_cast<std::size_t>(i + step)];
                return x[static_cast<std::size_t>(i)] +
                       (x[static_cast<std::size_t>(i + step)] - x[static_cast<std::size_t>(i)]) * (a - half) / (a - b);
            }
        return std::nan("");
    };
    return cross(top, 1) - cross(top, -1);
}

Verdict ac4()
{
    Verdict v;
    std::vector<double> grid;
    for (int i = 0; i <= 1500; ++i) grid.push_back(0.5 + i * 0.001);
    double widths[2] = {};
    for (int s = 0; s < 2; ++s) {
        const double wd = s == 0 ? 0.02 : 0.2;
        SweepSpec spec;
        spec.detuning_grid = grid;
        spec.omega_d = wd;
        spec.scenario = fully(10, 0.0, 0);
        spec.measure = Measure::Both;
        spec.threads = std::max(1u, std::thread::hardware_concurrency());
        const auto rows = detuning_sweep(spec, make(10, 1.0, wd));

        std::vector<double> period;
        std::size_t by_envelope = 0, by_fit = 0, failed = 0;
        double worst_envelope = 0.0, worst_fit = 0.0;
        for (const SweepRow& r : rows) {
            period.push_back(r.beat_period_analytic);
            if (!r.beat_period_measured) {
                ++failed;
                continue;
            }
            const double err = rel(*r.beat_period_measured, r.beat_period_analytic);
            if (r.method == kEnvelopeMethod) {
                ++by_envelope;
                worst_envelope = std::max(worst_envelope, err);
            } else {
                ++by_fit;
                worst_fit = std::max(worst_fit, err);
            }
        }
        const auto top = std::max_element(period.begin(), period.end()) - period.begin();
        widths[s] = fwhm(grid, period);
        const std::string label = "Omega_R/omega_v = " + fmt("%g", wd) + ": ";
        v.check(failed == 0 && std::max(worst_envelope, worst_fit) <= 0.02,
                label + "measured vs analytic on " + std::to_string(rows.size()) + " rows: envelope max " +
                    fmt("%.2e", worst_envelope) + " (" + std::to_string(by_envelope) + " rows), two-tone fit max " +
                    fmt("%.2e", worst_fit) + " (" + std::to_string(by_fit) + " rows), " + std::to_string(failed) +
                    " unmeasured");
        if (s == 0)
            v.check(grid[static_cast<std::size_t>(top)] == 1.0,
                    label + "argmax at omega/omega_v = " + fmt("%.3f", grid[static_cast<std::size_t>(top)]));
    }
    const double ratio = widths[1] / widths[0];
    v.check(std::fabs(ratio - 10.0) <= 0.5, "FWHM ratio " + fmt("%.4f", ratio) + " (widths " + fmt("%.5f", widths[0]) +
                                                 ", " + fmt("%.5f", widths[1]) + ")");
    return v;
}

// ---- AC5 -------------------------------------------------------------------

Verdict ac5()
{
    Verdict v;
    for (double wd : {0.02, 0.05, 0.1}) {
        const SystemParams p = make(100, 1.0, wd);
        const ClosedFormModel m(build_initial_conditions(fully(100, 0.0, 0), p), p);
        const double exact = exact_envelope_min(m);
        const double target = wd / 2.0;
        v.check(exact >= 0.8 * target && exact <= 1.2 * target,
                "resonance, omega_d = " + fmt("%g", wd) + ": envelope minimum " + fmt("%.5f", exact) + " vs " +
                    fmt("%.5f", target) + " (ratio " + fmt("%.3f", exact / target) + ")");
        const MeasuredBeat b = measure_collective(m.sample(default_grid(p, m.coupling()), {}), p);
        if (b.envelope_min) {
            v.check(*b.envelope_min >= 0.8 * target && *b.envelope_min <= 1.2 * target,
                    "  sampled trajectory: " + fmt("%.5f", *b.envelope_min) + " (ratio " +
                        fmt("%.3f", *b.envelope_min / target) + ")");
        }
    }
    const SystemParams off = make(100, 1.2, 0.05);
    const ClosedFormModel m(build_initial_conditions(fully(100, 0.0, 0), off), off);
    const double exact = exact_envelope_min(m);
    v.check(exact >= 0.9, "omega = 1.2, omega_d = 0.05: envelope minimum " + fmt("%.5f", exact));
    return v;
}

// ---- AC6 -------------------------------------------------------------------

Verdict ac6()
{
    Verdict v;
    const std::size_t n = 100;
    for (double beta : {0.05, 0.2}) {
        const SystemParams p = make(n, 1.0, 0.07);
        const DerivedCoupling c = derive(p);
        const ScenarioSpec spec = partial(n, beta);
        const InitialConditions ic = build_initial_conditions(spec, p);
        const ClosedFormModel m(ic, p);
        const std::size_t ground_index = n - 1;
        const std::string label = "beta = " + fmt("%g", beta) + ": ";

        // (a) ground molecules start at exactly zero: initial conditions, the
        // activation formula and the integrated reference at t = 0.
        bool zero = true;
        for (std::size_t i = excited_count(beta, n); i < n; ++i) zero = zero && ic.displacements[i] == 0.0;
        zero = zero && partially_activated_local(p, c, beta, 0.0).ground == 0.0;
        IntegratorOptions o;
        o.record_all = false;
        o.molecules = {ground_index};
        const Trajectory start = integrate(ic, p, c, 1.0, o);
        zero = zero && start.locals.at(ground_index).front() == 0.0;
        v.check(zero, label + "(a) ground molecules start at 0 (mode-sum evaluation gives " +
                          fmt("%.1e", m.local(ground_index).value(0.0)) + ")");

        // (b) ground peak amplitude over one beat period
        double peak = 0.0;
        const double dt = 2.0 * kPi / 256.0;
        for (double t = 0.0; t <= c.beat_period; t += dt) peak = std::max(peak, std::fabs(partially_activated_local(p, c, beta, t).ground));
        v.check(peak >= 1.8 * beta && peak <= 2.0 * beta,
                label + "(b) ground peak " + fmt("%.5f", peak) + " in [" + fmt("%.3f", 1.8 * beta) + ", " +
                    fmt("%.3f", 2.0 * beta) + "]");

        // (c) excited envelope, max |x| over one bare period centred on t, at
        // T/4 and at its lowest point for t in [T/8, 3T/8].
        auto envelope = [&](double centre) {
            double env = 0.0;
            for (double u = -kPi; u <= kPi; u += dt) env = std::max(env, std::fabs(partially_activated_local(p, c, beta, centre + u).excited));
            return env;
        };
        double lowest = INFINITY, lowest_at = 0.0;
        for (double centre = c.beat_period / 8; centre <= 3 * c.beat_period / 8; centre += 0.25) {
            const double env = envelope(centre);
            if (env < lowest) {
                lowest = env;
                lowest_at = centre;
            }
        }
        v.check(lowest < 0.1, label + "(c) excited envelope " + fmt("%.4f", envelope(c.beat_period / 4)) +
                                  " at T/4 = " + fmt("%.1f", c.beat_period / 4) + ", lowest " + fmt("%.4f", lowest) +
                                  " at t = " + fmt("%.1f", lowest_at) + "; criterion < 0.1 x0");

        // (e) linearity in beta
        double worst = 0.0;
        const SystemParams p2 = make(n, 1.0, 0.07);
        for (double t = 0.5; t <= c.beat_period; t += 0.731) {
            const double g1 = partially_activated_local(p2, c, beta, t).ground;
            const double g2 = partially_activated_local(p2, c, 2.0 * beta, t).ground;
            if (std::fabs(g1) > 1e-6) worst = std::max(worst, std::fabs(g2 / g1 - 2.0) / 2.0);
        }
        v.check(worst <= 1e-12, label + "(e) ground(2 beta) / ground(beta) = 2 within " + fmt("%.2e", worst));
    }

    // (d) beta = 1 reproduces the fully excited result with zero velocities
    const SystemParams p = make(n, 1.0, 0.07);
    const DerivedCoupling c = derive(p);
    const std::vector<double> zero_v(n, 0.0);
    double worst = 0.0;
    for (double t = 0.0; t <= c.beat_period; t += 0.37)
        worst = std::max(worst, std::fabs(partially_activated_local(p, c, 1.0, t).excited - fully_excited_local(p, c, zero_v, t)[0]));
    v.check(worst <= 4 * std::numeric_limits<double>::epsilon(), "(d) beta = 1 vs fully excited: " + fmt("%.2e", worst));
    return v;
}

// ---- AC7 -------------------------------------------------------------------

Verdict ac7()
{
    Verdict v;
    struct Case {
        std::string name;
        ScenarioSpec spec;
    };
    const std::size_t n = 20;
    for (const Case& cs : {Case{"fully excited", fully(n, 0.0, 0)}, Case{"fully excited, velocities", fully(n, 0.5, 3)},
                           Case{"partial beta = 0.2", partial(n, 0.2)}}) {
        const SystemParams p = make(n, 1.0, 0.07);
        const DerivedCoupling c = derive(p);
        const InitialConditions ic = build_initial_conditions(cs.spec, p);
        IntegratorOptions o;
        o.dt = step_for_resolution(c, 200.0);
        const Trajectory t = integrate(ic, p, c, 2.0 * c.beat_period, o);
        const EnergySeries e = energy_partition(t, p, c.g, excited_set(cs.spec, ic));
        double drift = 0.0;
        for (double total : e.total) drift = std::max(drift, std::fabs(total - e.total.front()) / e.total.front());
        v.check(drift < 1e-8, cs.name + ": energy drift " + fmt("%.2e", drift) + " over 2T");
        if (std::holds_alternative<PartiallyActivated>(cs.spec.kind)) {
            const auto peak = std::max_element(e.ground.begin(), e.ground.end());
            const double t_peak = e.times[static_cast<std::size_t>(peak - e.ground.begin())];
            v.check(e.ground.front() == 0.0 && *peak > 0.0,
                    cs.name + ": ground energy 0 -> max " + fmt("%.4f", *peak) + " at t = " + fmt("%.1f", t_peak) +
                        " (excited starts at " + fmt("%.3f", e.excited.front()) + ")");
            v.check(t_peak > 0.0 && t_peak <= c.beat_period, cs.name + ": first maximum inside (0, T]");
        }
    }
    return v;
}

// ---- AC8 -------------------------------------------------------------------

Verdict ac8()
{
    Verdict v;
    const double eps0 = 8.8541878128e-12, c = 2.99792458e8, e = 1.602176634e-19, me = 9.1093837015e-31;
    const double omega = 2.0 * kPi * 1e12;
    const double area = 1e-12, length = kPi * c / omega;
    // omega_d / omega_v for a single molecule; the ratio scales as sqrt(N).
    const double per_molecule = std::sqrt(e * e / (4000.0 * me * eps0 * area * length)) / omega;

    const PhysicalConstants k;
    const CavityGeometry geometry = CavityGeometry::from_frequency(k, area, omega);
    for (auto [target, claim] : {std::pair{0.02, 1e7}, std::pair{0.2, 1e9}}) {
        const double n_star = std::pow(target / per_molecule, 2);
        const SystemParams p = from_si(k, geometry, 1.0, 4000.0, 1.0, static_cast<std::size_t>(std::llround(n_star)));
        const double ratio = derive(p).vrs / p.omega_v;
        v.check(n_star >= claim / 4.0 && n_star <= claim * 4.0 && rel(ratio, target) < 1e-6,
                "Omega_R/omega_v = " + fmt("%g", target) + " at N = " + fmt("%.3e", n_star) + " (claim " +
                    fmt("%.0e", claim) + ", factor " + fmt("%.2f", claim / n_star) + "); library gives " +
                    fmt("%.6f", ratio));
    }
    const SystemParams a = from_si(k, geometry, 1.0, 4000.0, 1.0, 1000000);
    const SystemParams b = from_si(k, geometry, 1.0, 4000.0, 1.0, 4000000);
    v.check(rel(b.omega_d / a.omega_d, 2.0) < 1e-12, "4x molecules doubles the splitting");
    return v;
}

// ---- AC9 -------------------------------------------------------------------

struct Captured {
    int code = -1;
    std::string out;
};

Captured run(const std::string& args)
{
    const std::string cmd = "'" + cli_path + "' " + args + " 2>&1";
    Captured r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Verdict ac9()
{
    Verdict v;
    if (cli_path.empty()) {
        v.check(false, "--cli not given");
        return v;
    }
    const Captured a = run("verify --quick");
    const Captured b = run("verify --quick");
    v.check(a.code == 0 && b.code == 0 && a.out == b.out,
            "verify --quick: identical stdout (" + std::to_string(a.out.size()) + " bytes), exit " +
                std::to_string(a.code));

    const fs::path root = fs::temp_directory_path() / ("vscbeat_ac9_" + std::to_string(::getpid()));
    fs::remove_all(root);
    const std::string args = "simulate --n 50 --omega 1.05 --omega-d 0.07 --velocity-scale 0.5 --seed 42 "
                             "--molecules 1,2,50 --outputs trajectory,observables,energies,phase_space --output-dir ";
    const Captured r1 = run(args + "'" + (root / "one").string() + "'");
    const Captured r2 = run(args + "'" + (root / "two").string() + "'");
    bool same = r1.code == 0 && r2.code == 0;
    std::size_t bytes = 0;
    for (const char* f : {"trajectory.csv", "observables.json", "energies.csv", "phase_space.csv"}) {
        const std::string x = slurp(root / "one" / f);
        same = same && !x.empty() && x == slurp(root / "two" / f);
        bytes += x.size();
    }
    v.check(same, "seeded simulate: 4 files, " + std::to_string(bytes) + " bytes identical");
    fs::remove_all(root);
    return v;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"acceptance criteria"};
    std::vector<std::string> only;
    app.add_option("--cli", cli_path, "path to the vscbeat executable");
    app.add_option("--only", only, "criteria to run (AC1..AC9)");
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<Verdict()>>> all{
        {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
        {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}};
    const std::set<std::string> selected(only.begin(), only.end());

    bool ok = true;
    for (const auto& [name, fn] : all) {
        if (!selected.empty() && !selected.contains(name)) continue;
        Verdict v;
        try {
            v = fn();
        } catch (const std::exception& e) {
            v.check(false, std::string("exception: ") + e.what());
        }
        for (const std::string& d : v.details) std::cout << "  " << d << '\n';
        std::cout << name << (v.pass ? " PASS" : " FAIL") << '\n';
        ok = ok && v.pass;
    }
    return ok ? 0 : 1;
}
