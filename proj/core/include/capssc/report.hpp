#pragma once

#include <string>
#include <vector>

namespace capssc {

// write `text` to `path` via a temp file + rename so readers never observe a
// partial file
void write_text_atomic(const std::string& path, const std::string& text);

// incremental CSV builder; all rows must match the header width
struct csv_table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(const std::vector<std::string>& row);
    void add_row(const std::vector<double>& row);
    std::string render() const;
    void save(const std::string& path) const;
};

struct svg_series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct svg_chart_options {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    int width = 860;
    int height = 520;
};

// self-contained line chart (axes, ticks, legend); returns the SVG document
std::string svg_line_chart(const std::vector<svg_series>& series,
                           const svg_chart_options& opt);

}  // namespace capssc
