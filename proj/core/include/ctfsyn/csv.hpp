#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace ctfsyn {

/// In-memory CSV table with a fixed header. Numbers are written with
/// round-trip precision so re-runs produce byte-identical files.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::vector<std::string> cells);
    void add_row(const std::vector<double>& values);

    const std::vector<std::string>& header() const noexcept { return header_; }
    const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }
    std::size_t size() const noexcept { return rows_.size(); }

    std::string str() const;
    void write(const std::filesystem::path& path) const;

    /// Parse text with a header line. Blank lines are skipped; ragged rows throw.
    static CsvTable parse(const std::string& text);
    static CsvTable read(const std::filesystem::path& path);

    /// Index of a header column, or throws DomainError.
    std::size_t column(const std::string& name) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

std::string format_number(double v);
double parse_number(const std::string& text);

} // namespace ctfsyn
