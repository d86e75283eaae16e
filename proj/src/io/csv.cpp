#include "vscbeat/io/csv.hpp"

#include "vscbeat/errors.hpp"
#include "vscbeat/format.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

namespace vscbeat::io {

namespace {

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out(1);
    for (char c : line) {
        if (c == ',')
            out.emplace_back();
        else if (c != '\r')
            out.back().push_back(c);
    }
    return out;
}

std::optional<double> parse_number(const std::string& field, std::size_t line)
{
    if (field.empty()) return std::nullopt;
    if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (field == "inf") return std::numeric_limits<double>::infinity();
    if (field == "-inf") return -std::numeric_limits<double>::infinity();
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    require(ec == std::errc() && ptr == field.data() + field.size(), ErrorKind::InvalidInput,
            "line " + std::to_string(line) + ": not a number: '" + field + "'");
    return value;
}

} // namespace

std::size_t CsvTable::column(std::string_view name) const
{
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    fail(ErrorKind::InvalidInput, "missing column '" + std::string(name) + "'");
}

std::vector<double> CsvTable::values(std::string_view name) const
{
    const std::size_t c = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        require(row[c].has_value(), ErrorKind::InvalidInput, "empty field in column '" + std::string(name) + "'");
        out.push_back(*row[c]);
    }
    return out;
}

void write_csv(std::ostream& out, const CsvTable& table)
{
    for (const std::string& c : table.comments) out << "# " << c << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            if (row[i]) out << shortest(*row[i]);
        }
        out << '\n';
    }
}

void write_csv(const std::filesystem::path& path, const CsvTable& table)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorKind::InvalidInput, "cannot write " + path.string());
    write_csv(out, table);
}

CsvTable read_csv(std::istream& in)
{
    CsvTable table;
    std::string line;
    std::size_t number = 0;
    bool have_columns = false;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            table.comments.push_back(line.size() > 1 && line[1] == ' ' ? line.substr(2) : line.substr(1));
            continue;
        }
        const std::vector<std::string> fields = split(line);
        if (!have_columns) {
            table.columns = fields;
            have_columns = true;
            continue;
        }
        require(fields.size() == table.columns.size(), ErrorKind::InvalidInput,
                "line " + std::to_string(number) + ": expected " + std::to_string(table.columns.size()) + " fields");
        auto& row = table.rows.emplace_back();
        for (const std::string& f : fields) row.push_back(parse_number(f, number));
    }
    require(have_columns, ErrorKind::InvalidInput, "CSV has no column header");
    return table;
}

CsvTable read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorKind::InvalidInput, "cannot open " + path.string());
    return read_csv(in);
}

CsvTable trajectory_table(const Trajectory& traj, std::span<const std::size_t> molecules,
                          std::vector<std::string> header)
{
    traj.validate();
    CsvTable table;
    table.comments = std::move(header);
    table.columns = {"t", "X", "q"};
    std::vector<const std::vector<double>*> locals;
    for (std::size_t m : molecules) {
        const auto it = traj.locals.find(m);
        require(it != traj.locals.end(), ErrorKind::InvalidIndex,
                "molecule " + std::to_string(m + 1) + " was not recorded");
        table.columns.push_back("x_" + std::to_string(m + 1));
        locals.push_back(&it->second);
    }
    table.rows.reserve(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) {
        auto& row = table.rows.emplace_back();
        row.reserve(table.columns.size());
        row.push_back(traj.times[k]);
        row.push_back(traj.collective_x[k]);
        row.push_back(traj.cavity_q[k]);
        for (const auto* s : locals) row.push_back((*s)[k]);
    }
    return table;
}

Trajectory trajectory_from_table(const CsvTable& table)
{
    Trajectory traj;
    traj.times = table.values("t");
    traj.collective_x = table.values("X");
    traj.cavity_q = table.values("q");
    for (const std::string& name : table.columns) {
        if (name.rfind("x_", 0) != 0) continue;
        std::size_t index = 0;
        const auto [ptr, ec] = std::from_chars(name.data() + 2, name.data() + name.size(), index);
        require(ec == std::errc() && ptr == name.data() + name.size() && index >= 1, ErrorKind::InvalidInput,
                "bad molecule column '" + name + "'");
        traj.locals[index - 1] = table.values(name);
    }
    traj.validate();
    return traj;
}

} // namespace vscbeat::io
