#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace wishart {

// CSV with '#'-prefixed comment lines; floats printed with 17 significant
// digits so values round-trip losslessly.
class CsvWriter {
  public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void comment(const std::string& line);
    void header(const std::vector<std::string>& columns);

    CsvWriter& field(const std::string& s);
    CsvWriter& field(double v);
    CsvWriter& field(long long v);
    CsvWriter& field(bool v);
    void end_row();

    static std::string format(double v);

  private:
    std::ostream& out_;
    bool row_open_ = false;
};

}  // namespace wishart
