#include "qchaos/csv.hpp"

#include <cstdio>
#include <stdexcept>

#include "qchaos/error.hpp"

namespace qchaos {

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, std::initializer_list<std::string> columns)
    : out_(path), columns_(columns.size()), path_(path) {
    if (!out_) throw ConfigError("csv: cannot open " + path + " for writing");
    bool first = true;
    for (const auto& c : columns) {
        if (!first) out_ << ',';
        out_ << c;
        first = false;
    }
    out_ << '\n';
}

CsvWriter::~CsvWriter() = default;

void CsvWriter::row(std::initializer_list<double> values) {
    if (values.size() != columns_)
        throw std::invalid_argument("csv: row width mismatch in " + path_);
    bool first = true;
    for (double v : values) {
        if (!first) out_ << ',';
        out_ << format_full(v);
        first = false;
    }
    out_ << '\n';
}

void CsvWriter::raw_row(const std::string& line) { out_ << line << '\n'; }

}  // namespace qchaos
