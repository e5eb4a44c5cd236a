#include "wishart/csv.hpp"

#include <cstdio>

namespace wishart {

void CsvWriter::comment(const std::string& line) { out_ << "# " << line << "\n"; }

void CsvWriter::header(const std::vector<std::string>& columns) {
    for (size_t i = 0; i < columns.size(); ++i) {
        if (i) out_ << ',';
        out_ << columns[i];
    }
    out_ << "\n";
}

CsvWriter& CsvWriter::field(const std::string& s) {
    if (row_open_) out_ << ',';
    out_ << s;
    row_open_ = true;
    return *this;
}

CsvWriter& CsvWriter::field(double v) { return field(format(v)); }

CsvWriter& CsvWriter::field(long long v) { return field(std::to_string(v)); }

CsvWriter& CsvWriter::field(bool v) { return field(std::string(v ? "true" : "false")); }

void CsvWriter::end_row() {
    out_ << "\n";
    row_open_ = false;
}

std::string CsvWriter::format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace wishart
