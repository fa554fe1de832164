#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "prdkit/pr_curve.hpp"

namespace prdkit {

/// Renders curves as polylines in the unit square with axes, ticks and a
/// legend. Static SVG, no interactivity.
inline void write_svg_plot(const std::vector<std::pair<std::string, PRCurve>>& curves,
                           const std::string& path) {
    if (curves.empty()) throw std::invalid_argument("write_svg_plot: no curves");
    constexpr double size = 560.0, margin = 60.0;
    const double plot = size - 2.0 * margin;
    auto sx = [&](double beta) { return margin + beta * plot; };
    auto sy = [&](double alpha) { return size - margin - alpha * plot; };
    static const char* palette[] = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
        << "\" viewBox=\"0 0 " << size << " " << size << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // axes
    out << "<line x1=\"" << sx(0) << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(1) << "\" y2=\""
        << sy(0) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << sx(0) << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(0) << "\" y2=\""
        << sy(1) << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 5; ++t) {
        const double v = t / 5.0;
        out << "<line x1=\"" << sx(v) << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(v) << "\" y2=\""
            << sy(0) + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << sx(v) << "\" y=\"" << sy(0) + 20
            << "\" font-size=\"12\" text-anchor=\"middle\">" << v << "</text>\n";
        out << "<line x1=\"" << sx(0) - 5 << "\" y1=\"" << sy(v) << "\" x2=\"" << sx(0)
            << "\" y2=\"" << sy(v) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << sx(0) - 10 << "\" y=\"" << sy(v) + 4
            << "\" font-size=\"12\" text-anchor=\"end\">" << v << "</text>\n";
    }
    out << "<text x=\"" << sx(0.5) << "\" y=\"" << size - 12
        << "\" font-size=\"14\" text-anchor=\"middle\">recall</text>\n";
    out << "<text x=\"16\" y=\"" << sy(0.5)
        << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << sy(0.5)
        << ")\">precision</text>\n";
    for (std::size_t c = 0; c < curves.size(); ++c) {
        const char* color = palette[c % (sizeof(palette) / sizeof(palette[0]))];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& p : curves[c].second.points) out << sx(p.beta) << ',' << sy(p.alpha) << ' ';
        out << "\"/>\n";
        const double ly = margin + 18.0 * static_cast<double>(c);
        out << "<line x1=\"" << size - margin - 110 << "\" y1=\"" << ly << "\" x2=\""
            << size - margin - 86 << "\" y2=\"" << ly << "\" stroke=\"" << color
            << "\" stroke-width=\"1.5\"/>\n";
        out << "<text x=\"" << size - margin - 80 << "\" y=\"" << ly + 4
            << "\" font-size=\"12\">" << curves[c].first << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace prdkit
