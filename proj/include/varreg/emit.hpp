#ifndef VARREG_EMIT_HPP
#define VARREG_EMIT_HPP

#include <string>
#include <vector>

namespace varreg {

struct Column {
    std::string name;
    std::vector<double> values;
};

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

// Full-precision CSV: header row, comma separator, 17-significant-digit
// scientific notation, "nan" passthrough. Byte-deterministic.
void emit_csv(const std::vector<Column>& columns, const std::string& path);
std::string render_csv(const std::vector<Column>& columns);

// Single-panel polyline chart with axes, tick labels and a legend.
// Byte-deterministic for identical inputs.
void emit_svg(const std::vector<Series>& series, const std::string& path,
              const std::string& title = "");
std::string render_svg(const std::vector<Series>& series, const std::string& title = "");

} // namespace varreg

#endif
