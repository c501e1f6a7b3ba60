#include "capssc/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace capssc {

void write_text_atomic(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        out.write(text.data(), (std::streamsize)text.size());
        out.flush();
        if (!out) throw std::runtime_error("short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("cannot move " + tmp + " into place");
    }
}

namespace {

// quote a CSV cell only when it needs it
std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

void csv_table::add_row(const std::vector<std::string>& row) {
    if (!header.empty() && row.size() != header.size())
        throw std::invalid_argument("csv row width mismatch");
    rows.push_back(row);
}

void csv_table::add_row(const std::vector<double>& row) {
    std::vector<std::string> cells;
    cells.reserve(row.size());
    for (double v : row) cells.push_back(format_number(v));
    add_row(cells);
}

std::string csv_table::render() const {
    std::ostringstream os;
    auto emit = [&os](const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) os << ',';
            os << csv_cell(cells[i]);
        }
        os << '\n';
    };
    if (!header.empty()) emit(header);
    for (const auto& row : rows) emit(row);
    return os.str();
}

void csv_table::save(const std::string& path) const {
    write_text_atomic(path, render());
}

namespace {

struct axis_ticks {
    std::vector<double> values;
    double lo = 0.0, hi = 1.0;
};

// pick round tick positions covering [lo, hi]
axis_ticks linear_ticks(double lo, double hi) {
    axis_ticks t;
    if (!(hi > lo)) {
        double mid = lo;
        lo = mid - 1.0;
        hi = mid + 1.0;
    }
    double span = hi - lo;
    double raw = span / 6.0;
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double norm = raw / mag;
    double step = (norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0) * mag;
    double first = std::ceil(lo / step) * step;
    for (double v = first; v <= hi + step * 1e-9; v += step) t.values.push_back(v);
    t.lo = lo;
    t.hi = hi;
    return t;
}

axis_ticks log_ticks(double lo, double hi) {
    axis_ticks t;
    double llo = std::log10(lo), lhi = std::log10(hi);
    if (!(lhi > llo)) {
        llo -= 0.5;
        lhi += 0.5;
    }
    int e0 = (int)std::floor(llo), e1 = (int)std::ceil(lhi);
    for (int e = e0; e <= e1; ++e) t.values.push_back(std::pow(10.0, e));
    t.lo = std::pow(10.0, llo);
    t.hi = std::pow(10.0, lhi);
    return t;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string tick_label(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

const char* series_color(size_t i) {
    static const char* palette[] = {"#1f6fb2", "#d1495b", "#3a9d6b",
                                    "#8c5fa8", "#c87f1e", "#4d4d4d"};
    return palette[i % 6];
}

}  // namespace

std::string svg_line_chart(const std::vector<svg_series>& series,
                           const svg_chart_options& opt) {
    const double margin_l = 72, margin_r = 24, margin_t = 44, margin_b = 56;
    const double plot_w = opt.width - margin_l - margin_r;
    const double plot_h = opt.height - margin_t - margin_b;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        size_t n = std::min(s.x.size(), s.y.size());
        for (size_t i = 0; i < n; ++i) {
            double y = s.y[i];
            if (!std::isfinite(s.x[i]) || !std::isfinite(y)) continue;
            if (opt.log_y && y <= 0.0) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (!std::isfinite(xmin)) {
        xmin = 0.0;
        xmax = 1.0;
        ymin = opt.log_y ? 0.1 : 0.0;
        ymax = 1.0;
    }

    axis_ticks xt = linear_ticks(xmin, xmax);
    axis_ticks yt = opt.log_y ? log_ticks(ymin, ymax) : linear_ticks(ymin, ymax);

    auto map_x = [&](double v) {
        return margin_l + (v - xt.lo) / (xt.hi - xt.lo) * plot_w;
    };
    auto map_y = [&](double v) {
        double t = opt.log_y
                       ? (std::log10(v) - std::log10(yt.lo)) /
                             (std::log10(yt.hi) - std::log10(yt.lo))
                       : (v - yt.lo) / (yt.hi - yt.lo);
        return margin_t + (1.0 - t) * plot_h;
    };

    std::ostringstream os;
    os.precision(8);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width
       << "\" height=\"" << opt.height << "\" viewBox=\"0 0 " << opt.width
       << " " << opt.height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << opt.width / 2.0 << "\" y=\"24\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"16\">"
       << escape_xml(opt.title) << "</text>\n";

    // grid and ticks
    for (double v : xt.values) {
        double px = map_x(v);
        os << "<line x1=\"" << px << "\" y1=\"" << margin_t << "\" x2=\"" << px
           << "\" y2=\"" << margin_t + plot_h
           << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        os << "<text x=\"" << px << "\" y=\"" << margin_t + plot_h + 18
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
              "font-size=\"11\">"
           << tick_label(v) << "</text>\n";
    }
    for (double v : yt.values) {
        double py = map_y(v);
        os << "<line x1=\"" << margin_l << "\" y1=\"" << py << "\" x2=\""
           << margin_l + plot_w << "\" y2=\"" << py
           << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        os << "<text x=\"" << margin_l - 8 << "\" y=\"" << py + 4
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
              "font-size=\"11\">"
           << tick_label(v) << "</text>\n";
    }
    os << "<rect x=\"" << margin_l << "\" y=\"" << margin_t << "\" width=\""
       << plot_w << "\" height=\"" << plot_h
       << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

    // axis labels
    os << "<text x=\"" << margin_l + plot_w / 2.0 << "\" y=\""
       << opt.height - 12
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"13\">"
       << escape_xml(opt.x_label) << "</text>\n";
    os << "<text x=\"18\" y=\"" << margin_t + plot_h / 2.0
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"13\" transform=\"rotate(-90 18 "
       << margin_t + plot_h / 2.0 << ")\">" << escape_xml(opt.y_label)
       << "</text>\n";

    // polylines
    for (size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        size_t n = std::min(s.x.size(), s.y.size());
        std::ostringstream pts;
        bool open = false;
        std::string paths;
        for (size_t i = 0; i < n; ++i) {
            double y = s.y[i];
            bool ok = std::isfinite(s.x[i]) && std::isfinite(y) &&
                      (!opt.log_y || y > 0.0);
            if (!ok) {
                if (open) {
                    paths += "<polyline points=\"" + pts.str() +
                             "\" fill=\"none\" stroke=\"" +
                             series_color(si) + "\" stroke-width=\"1.8\"/>\n";
                    pts.str("");
                    open = false;
                }
                continue;
            }
            if (open) pts << ' ';
            pts << map_x(s.x[i]) << ',' << map_y(y);
            open = true;
        }
        if (open)
            paths += "<polyline points=\"" + pts.str() +
                     "\" fill=\"none\" stroke=\"" + series_color(si) +
                     "\" stroke-width=\"1.8\"/>\n";
        os << paths;
    }

    // legend
    double ly = margin_t + 10;
    for (size_t si = 0; si < series.size(); ++si) {
        double lx = margin_l + plot_w - 160;
        os << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 26
           << "\" y2=\"" << ly << "\" stroke=\"" << series_color(si)
           << "\" stroke-width=\"2.4\"/>\n";
        os << "<text x=\"" << lx + 32 << "\" y=\"" << ly + 4
           << "\" font-family=\"sans-serif\" font-size=\"12\">"
           << escape_xml(series[si].label) << "</text>\n";
        ly += 18;
    }

    os << "</svg>\n";
    return os.str();
}

}  // namespace capssc
