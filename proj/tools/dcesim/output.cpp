#include "output.hpp"

#include "config.hpp"

#include <cstdio>

namespace dcesim {

std::string format_number(double x) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", x);
    return buffer;
}

CsvWriter::CsvWriter(std::string const& path, std::vector<std::string> columns,
                     std::vector<std::pair<std::string, std::string>> const& preamble)
    : path_(path), columns_(columns.size()), out_(path) {
    if (!out_)
        throw IoError("cannot open '" + path + "' for writing");
    for (auto const& [key, value] : preamble)
        out_ << "# " << key << ": " << value << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i)
        out_ << (i ? "," : "") << columns[i];
    out_ << '\n';
}

void CsvWriter::row(std::vector<Field> const& fields) {
    if (fields.size() != columns_)
        throw std::logic_error("csv row width does not match the header of " + path_);
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            out_ << ',';
        std::visit(
            [&](auto const& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, double>)
                    out_ << format_number(v);
                else
                    out_ << v;
            },
            fields[i]);
    }
    out_ << '\n';
    if (!out_)
        throw IoError("write failed on '" + path_ + "'");
    ++rows_;
}

void CsvWriter::close() {
    out_.close();
    if (out_.fail())
        throw IoError("write failed on '" + path_ + "'");
}

} // namespace dcesim
