#pragma once

// Comma-separated tables with '#' header comments. Numbers are written as the
// shortest decimal that round-trips; a missing value is an empty field.

#include "vscbeat/closed_form.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace vscbeat::io {

struct CsvTable {
    std::vector<std::string> comments; // without the leading "# "
    std::vector<std::string> columns;
    std::vector<std::vector<std::optional<double>>> rows;

    std::size_t column(std::string_view name) const; // throws InvalidInput if absent
    std::vector<double> values(std::string_view name) const;
};

void write_csv(std::ostream& out, const CsvTable& table);
void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

/// Columns t, X, q, then x_<i+1> for each requested molecule (0-based input).
CsvTable trajectory_table(const Trajectory& traj, std::span<const std::size_t> molecules,
                          std::vector<std::string> header);

/// Inverse of trajectory_table for t, X, q and any x_k columns.
Trajectory trajectory_from_table(const CsvTable& table);

} // namespace vscbeat::io
