#include "varreg/emit.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace varreg {

namespace {

std::string sci(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

std::string fixed2(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit: cannot write '" + path + "'");
    out << content;
    if (!out) throw std::runtime_error("emit: write failed for '" + path + "'");
}

} // namespace

std::string render_csv(const std::vector<Column>& columns) {
    if (columns.empty()) throw std::invalid_argument("emit_csv: no columns");
    const std::size_t rows = columns.front().values.size();
    for (const Column& c : columns)
        if (c.values.size() != rows)
            throw std::invalid_argument("emit_csv: column '" + c.name +
                                        "' length differs from the first column");
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c) out += ',';
        out += columns[c].name;
    }
    out += '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) out += ',';
            out += sci(columns[c].values[r]);
        }
        out += '\n';
    }
    return out;
}

void emit_csv(const std::vector<Column>& columns, const std::string& path) {
    write_file(path, render_csv(columns));
}

std::string render_svg(const std::vector<Series>& series, const std::string& title) {
    constexpr double W = 800, H = 500;
    constexpr double ml = 70, mr = 160, mt = 40, mb = 50;
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const Series& s : series) {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("emit_svg: series '" + s.name + "' length mismatch");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (std::isnan(s.x[i]) || std::isnan(s.y[i])) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (!(xmin < xmax)) { xmin -= 0.5; xmax += 0.5; }
    if (!(ymin < ymax)) { ymin -= 0.5; ymax += 0.5; }
    if (!std::isfinite(xmin)) { xmin = 0; xmax = 1; ymin = 0; ymax = 1; }

    auto X = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto Y = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" "
           "viewBox=\"0 0 800 500\">\n";
    svg += "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
    if (!title.empty())
        svg += "<text x=\"400\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" "
               "text-anchor=\"middle\">" + title + "</text>\n";
    // axes
    svg += "<line x1=\"" + fixed2(ml) + "\" y1=\"" + fixed2(H - mb) + "\" x2=\"" +
           fixed2(W - mr) + "\" y2=\"" + fixed2(H - mb) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + fixed2(ml) + "\" y1=\"" + fixed2(mt) + "\" x2=\"" + fixed2(ml) +
           "\" y2=\"" + fixed2(H - mb) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    for (int k = 0; k <= 5; ++k) {
        const double xv = xmin + (xmax - xmin) * k / 5;
        const double yv = ymin + (ymax - ymin) * k / 5;
        svg += "<line x1=\"" + fixed2(X(xv)) + "\" y1=\"" + fixed2(H - mb) + "\" x2=\"" +
               fixed2(X(xv)) + "\" y2=\"" + fixed2(H - mb + 5) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fixed2(X(xv)) + "\" y=\"" + fixed2(H - mb + 18) +
               "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
               tick_label(xv) + "</text>\n";
        svg += "<line x1=\"" + fixed2(ml - 5) + "\" y1=\"" + fixed2(Y(yv)) + "\" x2=\"" +
               fixed2(ml) + "\" y2=\"" + fixed2(Y(yv)) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fixed2(ml - 8) + "\" y=\"" + fixed2(Y(yv) + 4) +
               "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" +
               tick_label(yv) + "</text>\n";
    }
    // polylines
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = palette[s % 6];
        std::string pts;
        for (std::size_t i = 0; i < series[s].x.size(); ++i) {
            if (std::isnan(series[s].x[i]) || std::isnan(series[s].y[i])) continue;
            if (!pts.empty()) pts += ' ';
            pts += fixed2(X(series[s].x[i])) + "," + fixed2(Y(series[s].y[i]));
        }
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    }
    // legend
    for (std::size_t s = 0; s < series.size(); ++s) {
        const double ly = mt + 16 + 18 * static_cast<double>(s);
        svg += "<line x1=\"" + fixed2(W - mr + 12) + "\" y1=\"" + fixed2(ly) + "\" x2=\"" +
               fixed2(W - mr + 36) + "\" y2=\"" + fixed2(ly) + "\" stroke=\"" +
               palette[s % 6] + "\" stroke-width=\"1.5\"/>\n";
        svg += "<text x=\"" + fixed2(W - mr + 42) + "\" y=\"" + fixed2(ly + 4) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + series[s].name +
               "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

void emit_svg(const std::vector<Series>& series, const std::string& path,
              const std::string& title) {
    write_file(path, render_svg(series, title));
}

} // namespace varreg
