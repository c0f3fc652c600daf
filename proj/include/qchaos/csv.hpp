#pragma once

#include <cstddef>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

// CSV output: single header row, UTF-8, '.' decimal separator, 17 significant
// digits so reruns reproduce files bit-identically.

namespace qchaos {

std::string format_full(double v);

class CsvWriter {
public:
    CsvWriter(const std::string& path, std::initializer_list<std::string> columns);
    ~CsvWriter();

    void row(std::initializer_list<double> values);
    void raw_row(const std::string& line);  // pre-formatted, for mixed columns

private:
    std::ofstream out_;
    std::size_t columns_;
    std::string path_;
};

}  // namespace qchaos
