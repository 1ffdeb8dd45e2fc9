#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "eigenscope/driver.hpp"
#include "eigenscope/errors.hpp"
#include "eigenscope/fit.hpp"
#include "eigenscope/util.hpp"

namespace eigenscope {

namespace {

struct CsvData {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
}

CsvData read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open CSV '" + path + "'");
    CsvData data;
    std::string line;
    if (!std::getline(in, line) || line.empty()) throw ConfigError("CSV '" + path + "' is empty");
    data.header = split_csv_line(line);
    if (data.header.size() < 2) throw ConfigError("CSV needs at least two columns");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != data.header.size())
            throw ConfigError("CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                              std::to_string(data.header.size()));
        std::vector<double> row;
        for (std::size_t c = 0; c < 2; ++c) {
            try {
                row.push_back(std::stod(cells[c]));
            } catch (const std::exception&) {
                throw ConfigError("CSV cell '" + cells[c] + "' is not numeric");
            }
        }
        data.rows.push_back(row);
    }
    if (data.rows.empty()) throw ConfigError("CSV '" + path + "' has no data rows");
    return data;
}

std::string svg_num(double v) { return format_fixed(v, 2); }

}  // namespace

void plot_csv(const std::string& csv_path, const std::string& kind, const std::string& out_svg) {
    if (kind != "loglog" && kind != "linear") throw ConfigError("plot kind must be loglog or linear");
    CsvData data = read_csv(csv_path);

    std::vector<std::pair<double, double>> pts;
    std::string annotation;
    if (kind == "loglog") {
        std::vector<std::pair<double, double>> raw;
        for (auto& r : data.rows)
            if (r[0] > 0 && std::isfinite(r[1])) raw.emplace_back(r[0], r[1]);
        ExponentFit fit;
        try {
            fit = fit_exponent(raw);
        } catch (const NumericError& e) {
            throw ConfigError(std::string("loglog plot: ") + e.what());
        }
        for (auto& [x, v] : fit.samples) pts.emplace_back(std::log10(x), std::log10(std::abs(v)));
        annotation = "slope " + format_fixed(fit.slope, 2) + " (r2=" + format_fixed(fit.r2, 3) + ")";
    } else {
        for (auto& r : data.rows)
            if (std::isfinite(r[0]) && std::isfinite(r[1])) pts.emplace_back(r[0], r[1]);
        if (pts.empty()) throw ConfigError("no finite points to plot");
    }

    double xmin = pts[0].first, xmax = xmin, ymin = pts[0].second, ymax = ymin;
    for (auto& [x, y] : pts) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
    if (xmax - xmin < 1e-12) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (ymax - ymin < 1e-12) {
        ymin -= 0.5;
        ymax += 0.5;
    }

    const double W = 640, H = 480, ml = 70, mr = 20, mt = 30, mb = 50;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    svg << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\"" << H - mb
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
        << "\" stroke=\"black\"/>\n";

    for (int i = 0; i <= 5; ++i) {
        double x = xmin + (xmax - xmin) * i / 5.0;
        double y = ymin + (ymax - ymin) * i / 5.0;
        svg << "<line x1=\"" << svg_num(px(x)) << "\" y1=\"" << H - mb << "\" x2=\"" << svg_num(px(x))
            << "\" y2=\"" << H - mb + 5 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << svg_num(px(x)) << "\" y=\"" << H - mb + 20
            << "\" font-size=\"11\" text-anchor=\"middle\">" << format_fixed(x, 2) << "</text>\n";
        svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << svg_num(py(y)) << "\" x2=\"" << ml << "\" y2=\""
            << svg_num(py(y)) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << ml - 8 << "\" y=\"" << svg_num(py(y) + 4)
            << "\" font-size=\"11\" text-anchor=\"end\">" << format_fixed(y, 2) << "</text>\n";
    }

    svg << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (auto& [x, y] : pts) svg << svg_num(px(x)) << "," << svg_num(py(y)) << " ";
    svg << "\"/>\n";
    for (auto& [x, y] : pts)
        svg << "<circle cx=\"" << svg_num(px(x)) << "\" cy=\"" << svg_num(py(y))
            << "\" r=\"2.5\" fill=\"#1f77b4\"/>\n";

    if (kind == "loglog") {
        // dashed least-squares line over the plotted range
        std::vector<std::pair<double, double>> logpts = pts;
        LinearFit lf = fit_linear(logpts);
        double y1 = lf.intercept + lf.slope * xmin, y2 = lf.intercept + lf.slope * xmax;
        svg << "<line x1=\"" << svg_num(px(xmin)) << "\" y1=\"" << svg_num(py(y1)) << "\" x2=\""
            << svg_num(px(xmax)) << "\" y2=\"" << svg_num(py(y2))
            << "\" stroke=\"#d62728\" stroke-dasharray=\"6 4\"/>\n";
        svg << "<text x=\"" << W - mr - 8 << "\" y=\"" << mt + 16
            << "\" font-size=\"14\" text-anchor=\"end\" fill=\"#d62728\">" << annotation
            << "</text>\n";
    }
    svg << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12
        << "\" font-size=\"12\" text-anchor=\"middle\">" << data.header[0]
        << (kind == "loglog" ? " (log10)" : "") << "</text>\n";
    svg << "<text x=\"16\" y=\"" << (mt + H - mb) / 2
        << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << (mt + H - mb) / 2 << ")\">" << data.header[1] << (kind == "loglog" ? " (log10)" : "")
        << "</text>\n";
    svg << "</svg>\n";

    std::filesystem::path p(out_svg);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot open '" + out_svg + "' for writing");
    out << svg.str();
}

}  // namespace eigenscope
