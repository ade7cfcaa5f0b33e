#pragma once

#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace dcesim {

/// Decimal rendering with 17 significant digits (round-trips doubles).
std::string format_number(double x);

/// Comma-separated file with `# key: value` preamble lines and a fixed header.
class CsvWriter {
public:
    using Field = std::variant<double, long long, std::string>;

    CsvWriter(std::string const& path, std::vector<std::string> columns,
              std::vector<std::pair<std::string, std::string>> const& preamble = {});

    void row(std::vector<Field> const& fields);
    void close();
    std::string const& path() const { return path_; }
    std::size_t rows() const { return rows_; }

private:
    std::string path_;
    std::size_t columns_;
    std::size_t rows_ = 0;
    std::ofstream out_;
};

} // namespace dcesim
