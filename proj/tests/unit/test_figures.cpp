#include "vscbeat/errors.hpp"
#include "vscbeat/io/figures.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace vscbeat;
using namespace vscbeat::io;

TEST_SUITE("figures") {

TEST_CASE("every panel produces a consistent table and plot")
{
    FigureOptions o;
    o.n_molecules = 20;
    o.sampling = 32;
    o.sweep_step = 0.01;
    for (const std::string& id : figure_ids()) {
        CAPTURE(id);
        const FigureDataset f = make_figure(id, o);
        CHECK(f.id == id);
        CHECK(f.table.columns.size() >= 2);
        CHECK(f.table.rows.size() >= 10);
        for (const auto& row : f.table.rows) CHECK(row.size() == f.table.columns.size());
        CHECK_FALSE(f.plot.series.empty());
        CHECK(render_svg(f.plot).find("<svg") != std::string::npos);
    }
}

TEST_CASE("beat period sweep peaks at resonance")
{
    FigureOptions o;
    o.n_molecules = 10;
    o.couplings = {0.02};
    const FigureDataset f = make_figure("1d", o);
    const auto ratio = f.table.values("omega_ratio");
    const auto period = f.table.values("T_0.02");
    const auto top = std::max_element(period.begin(), period.end()) - period.begin();
    CHECK(ratio[static_cast<std::size_t>(top)] == 1.0);
    CHECK(period[static_cast<std::size_t>(top)] == doctest::Approx(4.0 * std::numbers::pi / 0.02).epsilon(1e-12));
}

TEST_CASE("partial activation panel starts with ground molecules at rest")
{
    FigureOptions o;
    o.n_molecules = 40;
    const FigureDataset f = make_figure("3a", o);
    for (const std::string& c : f.table.columns) {
        if (c.rfind("ground_", 0) != 0) continue;
        CHECK(f.table.values(c).front() == 0.0);
    }
}

TEST_CASE("unknown panel")
{
    CHECK_THROWS_AS(make_figure("9z", FigureOptions{}), Error);
}

}
