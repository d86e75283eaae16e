#pragma once

// Datasets for the figure panels: collective beating (1a-1c), beat period vs
// detuning (1d), local vibrations and phase-space portraits with random
// initial velocities (2a-2e), partial activation (3a-3b). Couplings are given
// as the vacuum Rabi splitting over omega_v, which equals omega_d here.

#include "vscbeat/io/csv.hpp"
#include "vscbeat/io/svg.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace vscbeat::io {

struct FigureOptions {
    std::vector<double> couplings; // replaces the preset coupling series of 1a-1d when non-empty
    std::size_t n_molecules = 100;
    std::size_t sampling = 64;
    double velocity_scale = 0.5;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    double sweep_step = 0.0025;
};

struct FigureDataset {
    std::string id;
    CsvTable table;
    Plot plot;
};

const std::vector<std::string>& figure_ids();

/// Throws InvalidInput for an unknown id.
FigureDataset make_figure(std::string_view id, const FigureOptions& options);

} // namespace vscbeat::io
