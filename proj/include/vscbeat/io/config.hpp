#pragma once

// TOML run configuration:
//
//   seed = 0
//   [params]            omega_v, omega, omega_d, n, mass, x0
//   [params.si]         freq_thz, cavity_freq_thz, area_um2, length_um, mass_me, dipole_e, n
//   [scenario]          kind = "fully_excited" | "partial" | "custom", beta, x0,
//                       velocity_scale, displacements, velocities
//   [output]            dir, span, sampling, outputs, molecules (1-based), svg
//
// [params] physical keys and [params.si] are mutually exclusive.

#include "vscbeat/params.hpp"
#include "vscbeat/scenarios.hpp"

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace vscbeat::io {

enum class Output { Trajectory, Observables, PhaseSpace, Energies };
const char* to_string(Output output) noexcept;
Output parse_output(std::string_view name);

inline constexpr std::size_t kDefaultConfigMolecules = 100;

struct RunConfig {
    SystemParams params;
    ScenarioSpec scenario;
    double span = 2.0;          // beat periods
    std::size_t sampling = 64;  // samples per bare period
    std::set<Output> outputs{Output::Trajectory, Output::Observables};
    std::uint64_t seed = 0;
    std::filesystem::path output_dir; // empty: not set
    std::vector<std::size_t> molecules; // 0-based; defaults to the first one
    bool svg = false;

    RunConfig();

    /// Pushes shared values (n, seed) into the scenario and checks everything.
    void finalize();
};

RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(std::string_view text, std::string_view source = "<config>");

/// "# key: value" lines identifying the tool, the resolved parameters and the seed.
std::vector<std::string> output_header(const RunConfig& config);

} // namespace vscbeat::io
