#include "ctfsyn/csv.hpp"

#include "ctfsyn/error.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <sstream>

namespace ctfsyn {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ','))
        out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

} // namespace

std::string format_number(double v)
{
    return fmt::format("{}", v);
}

double parse_number(const std::string& text)
{
    const std::string t = trim(text);
    double v = 0.0;
    const auto* first = t.data();
    const auto* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw DomainError("not a number: '" + text + "'");
    return v;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> cells)
{
    if (cells.size() != header_.size())
        throw DomainError(fmt::format("csv row has {} cells, header has {}", cells.size(), header_.size()));
    rows_.push_back(std::move(cells));
}

void CsvTable::add_row(const std::vector<double>& values)
{
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values)
        cells.push_back(format_number(v));
    add_row(std::move(cells));
}

std::string CsvTable::str() const
{
    std::string out;
    auto emit = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i)
                out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    emit(header_);
    for (const auto& r : rows_)
        emit(r);
    return out;
}

void CsvTable::write(const std::filesystem::path& path) const
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw Error("cannot open for writing: " + path.string());
    f << str();
}

CsvTable CsvTable::parse(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> header;
    while (header.empty() && std::getline(in, line)) {
        ++lineno;
        if (!trim(line).empty())
            header = split(trim(line));
    }
    if (header.empty())
        throw DomainError("csv has no header");
    CsvTable table(header);
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        auto cells = split(trim(line));
        if (cells.size() != header.size())
            throw DomainError(fmt::format("csv line {}: expected {} cells, got {}", lineno, header.size(), cells.size()));
        table.rows_.push_back(std::move(cells));
    }
    return table;
}

CsvTable CsvTable::read(const std::filesystem::path& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw Error("cannot open: " + path.string());
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

std::size_t CsvTable::column(const std::string& name) const
{
    for (std::size_t i = 0; i < header_.size(); ++i)
        if (header_[i] == name)
            return i;
    throw DomainError("csv column not found: " + name);
}

} // namespace ctfsyn
