#include "envc/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "envc/errors.hpp"

namespace envc {

namespace {

constexpr std::array<const char*, 11> kContourColumns = {
    "theta",        "ux",          "uy",          "C",
    "Cbar",         "Cbar_scaled", "vx_classical", "vy_classical",
    "vx_buffered",  "vy_buffered", "convex_ok"};

double parse_cell(const std::string& cell, const char* column, std::size_t line) {
    double out = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    const auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc{} || res.ptr != last) {
        throw input_error("contour CSV line " + std::to_string(line) +
                          ": column '" + column + "' is not a number: '" + cell + "'");
    }
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (const char ch : line) {
        if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    cells.push_back(cur);
    return cells;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot open output file: " + path);
    return out;
}

} // namespace

std::string format_double(double x) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x,
                                   std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

ContourTable make_contour_table(const DirectionGrid& grid,
                                const DirectionalSupport& support, double scale_a,
                                const ContourPolygon& classical,
                                const ContourPolygon& buffered) {
    const std::size_t m = grid.size();
    ContourTable t;
    t.theta = grid.angles;
    t.ux = grid.ux;
    t.uy = grid.uy;
    t.c = support.classical;
    t.cbar = support.buffered;
    t.cbar_scaled.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        t.cbar_scaled[j] = scale_support(support.buffered[j], scale_a);
    }
    t.vx_classical = classical.vx;
    t.vy_classical = classical.vy;
    t.vx_buffered = buffered.vx;
    t.vy_buffered = buffered.vy;
    t.convex_ok.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        t.convex_ok[j] = static_cast<std::uint8_t>(classical.convex_ok[j] &&
                                                   buffered.convex_ok[j]);
    }
    return t;
}

void write_contour_csv(const std::string& path, const ContourTable& table) {
    std::ofstream out = open_out(path);
    for (std::size_t i = 0; i < kContourColumns.size(); ++i) {
        out << (i ? "," : "") << kContourColumns[i];
    }
    out << '\n';
    for (std::size_t j = 0; j < table.size(); ++j) {
        out << format_double(table.theta[j]) << ',' << format_double(table.ux[j]) << ','
            << format_double(table.uy[j]) << ',' << format_double(table.c[j]) << ','
            << format_double(table.cbar[j]) << ',' << format_double(table.cbar_scaled[j])
            << ',' << format_double(table.vx_classical[j]) << ','
            << format_double(table.vy_classical[j]) << ','
            << format_double(table.vx_buffered[j]) << ','
            << format_double(table.vy_buffered[j]) << ','
            << (table.convex_ok[j] ? '1' : '0') << '\n';
    }
}

ContourTable read_contour_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open contour CSV: " + path);

    std::string line;
    if (!std::getline(in, line)) throw input_error("contour CSV is empty: " + path);
    const auto header = split_csv_line(line);
    if (header.size() != kContourColumns.size()) {
        throw input_error("contour CSV header has " + std::to_string(header.size()) +
                          " columns, expected " + std::to_string(kContourColumns.size()));
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] != kContourColumns[i]) {
            throw input_error("contour CSV header mismatch in column " +
                              std::to_string(i + 1) + ": got '" + header[i] +
                              "', expected '" + kContourColumns[i] + "'");
        }
    }

    ContourTable t;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != kContourColumns.size()) {
            throw input_error("contour CSV line " + std::to_string(lineno) + " has " +
                              std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(kContourColumns.size()));
        }
        t.theta.push_back(parse_cell(cells[0], kContourColumns[0], lineno));
        t.ux.push_back(parse_cell(cells[1], kContourColumns[1], lineno));
        t.uy.push_back(parse_cell(cells[2], kContourColumns[2], lineno));
        t.c.push_back(parse_cell(cells[3], kContourColumns[3], lineno));
        t.cbar.push_back(parse_cell(cells[4], kContourColumns[4], lineno));
        t.cbar_scaled.push_back(parse_cell(cells[5], kContourColumns[5], lineno));
        t.vx_classical.push_back(parse_cell(cells[6], kContourColumns[6], lineno));
        t.vy_classical.push_back(parse_cell(cells[7], kContourColumns[7], lineno));
        t.vx_buffered.push_back(parse_cell(cells[8], kContourColumns[8], lineno));
        t.vy_buffered.push_back(parse_cell(cells[9], kContourColumns[9], lineno));
        const double flag = parse_cell(cells[10], kContourColumns[10], lineno);
        if (flag != 0.0 && flag != 1.0) {
            throw input_error("contour CSV line " + std::to_string(lineno) +
                              ": column 'convex_ok' must be 0 or 1");
        }
        t.convex_ok.push_back(static_cast<std::uint8_t>(flag));
    }
    if (t.size() < 3) {
        throw input_error("contour CSV has fewer than 3 direction rows");
    }
    return t;
}

DirectionGrid grid_from_table(const ContourTable& table) {
    DirectionGrid grid(table.size());
    for (std::size_t j = 0; j < table.size(); ++j) {
        if (std::abs(grid.angles[j] - table.theta[j]) > 1e-12) {
            throw input_error("contour CSV is not on a uniform direction grid (row " +
                              std::to_string(j) + ")");
        }
    }
    return grid;
}

DirectionalSupport support_from_table(const ContourTable& table, double pe,
                                      std::size_t sample_size) {
    DirectionalSupport s;
    s.classical = table.c;
    s.buffered = table.cbar;
    s.pe = pe;
    s.sample_size = sample_size;
    s.tail_count = 0; // unknown from the file alone
    return s;
}

void write_sample_csv(const std::string& path, const SampleSet& samples) {
    std::ofstream out = open_out(path);
    out << "t,h\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
        out << format_double(samples.t[i]) << ',' << format_double(samples.h[i]) << '\n';
    }
}

std::vector<double> read_scalar_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open sample file: " + path);
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        const std::string cell = line.substr(first, last - first + 1);
        double v = 0.0;
        const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size() ||
            !std::isfinite(v)) {
            throw input_error(path + ": line " + std::to_string(lineno) +
                              " is not a finite number: '" + cell + "'");
        }
        values.push_back(v);
    }
    if (values.empty()) throw input_error(path + ": no numeric values found");
    return values;
}

namespace {

double nice_step(double range) {
    const double raw = range / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    if (norm < 1.5) return mag;
    if (norm < 3.5) return 2.0 * mag;
    if (norm < 7.5) return 5.0 * mag;
    return 10.0 * mag;
}

std::string fmt_px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

} // namespace

void write_contour_svg(const std::string& path, const ContourPolygon& classical,
                       const ContourPolygon* buffered) {
    double xmin = classical.vx[0], xmax = classical.vx[0];
    double ymin = classical.vy[0], ymax = classical.vy[0];
    auto grow = [&](const ContourPolygon& p) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            xmin = std::min(xmin, p.vx[i]);
            xmax = std::max(xmax, p.vx[i]);
            ymin = std::min(ymin, p.vy[i]);
            ymax = std::max(ymax, p.vy[i]);
        }
    };
    grow(classical);
    if (buffered) grow(*buffered);
    const double padx = 0.08 * std::max(xmax - xmin, 1e-12);
    const double pady = 0.08 * std::max(ymax - ymin, 1e-12);
    xmin -= padx; xmax += padx;
    ymin -= pady; ymax += pady;

    constexpr double W = 720.0, H = 720.0, M = 56.0;
    auto px = [&](double x) { return M + (x - xmin) / (xmax - xmin) * (W - 2 * M); };
    auto py = [&](double y) { return H - M - (y - ymin) / (ymax - ymin) * (H - 2 * M); };

    std::ofstream out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
        << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<rect x=\"" << M << "\" y=\"" << M << "\" width=\"" << W - 2 * M
        << "\" height=\"" << H - 2 * M
        << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";

    const double sx = nice_step(xmax - xmin);
    for (double x = std::ceil(xmin / sx) * sx; x <= xmax + 1e-12 * sx; x += sx) {
        const double X = px(x);
        out << "<line x1=\"" << fmt_px(X) << "\" y1=\"" << H - M << "\" x2=\""
            << fmt_px(X) << "\" y2=\"" << H - M + 6 << "\" stroke=\"#333\"/>\n"
            << "<text x=\"" << fmt_px(X) << "\" y=\"" << H - M + 20
            << "\" font-size=\"12\" text-anchor=\"middle\">" << fmt_tick(x)
            << "</text>\n";
    }
    const double sy = nice_step(ymax - ymin);
    for (double y = std::ceil(ymin / sy) * sy; y <= ymax + 1e-12 * sy; y += sy) {
        const double Y = py(y);
        out << "<line x1=\"" << M - 6 << "\" y1=\"" << fmt_px(Y) << "\" x2=\"" << M
            << "\" y2=\"" << fmt_px(Y) << "\" stroke=\"#333\"/>\n"
            << "<text x=\"" << M - 10 << "\" y=\"" << fmt_px(Y + 4)
            << "\" font-size=\"12\" text-anchor=\"end\">" << fmt_tick(y) << "</text>\n";
    }

    auto polyline = [&](const ContourPolygon& p, const char* color) {
        out << "<polygon points=\"";
        for (std::size_t i = 0; i < p.size(); ++i) {
            out << fmt_px(px(p.vx[i])) << ',' << fmt_px(py(p.vy[i])) << ' ';
        }
        out << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
    };
    if (buffered) polyline(*buffered, "#000000");
    polyline(classical, "#999999");
    out << "</svg>\n";
}

} // namespace envc
