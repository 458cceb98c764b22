#include "sentifolio/svg_chart.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sentifolio/errors.hpp"

namespace sentifolio {

namespace {

constexpr double kWidth = 960, kHeight = 540;
constexpr double kMarginLeft = 70, kMarginRight = 20, kMarginTop = 50, kMarginBottom = 45;

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string num(double v) { return fmt::format("{:.2f}", v); }

// round tick spacing to 1/2/5 * 10^k
double nice_step(double range, int target_ticks) {
    const double raw = range / std::max(target_ticks, 1);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (raw <= m * mag) return m * mag;
    return 10.0 * mag;
}

}  // namespace

std::string render_line_chart(const std::string& title, const std::vector<Date>& dates,
                              const std::vector<ChartSeries>& series) {
    if (dates.empty() || series.empty())
        throw ConfigError("render_line_chart: nothing to draw");
    for (const auto& s : series)
        if (s.values.size() != dates.size())
            throw ConfigError(fmt::format("render_line_chart: series '{}' has {} points, "
                                          "expected {}", s.label, s.values.size(),
                                          dates.size()));

    double lo = series[0].values[0], hi = lo;
    for (const auto& s : series)
        for (double v : s.values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (hi == lo) {
        hi += 1;
        lo -= 1;
    }
    const double pad = (hi - lo) * 0.05;
    lo -= pad;
    hi += pad;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto map_x = [&](std::size_t i) {
        return kMarginLeft +
               (dates.size() == 1 ? 0.5 : static_cast<double>(i) / (dates.size() - 1)) * plot_w;
    };
    auto map_y = [&](double v) { return kMarginTop + (1.0 - (v - lo) / (hi - lo)) * plot_h; };

    std::ostringstream svg;
    svg << fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
                       "viewBox=\"0 0 {} {}\">\n", kWidth, kHeight, kWidth, kHeight);
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << fmt::format("<text x=\"{}\" y=\"28\" font-family=\"sans-serif\" font-size=\"18\" "
                       "text-anchor=\"middle\">{}</text>\n", kWidth / 2, xml_escape(title));

    // horizontal grid + y labels
    const double step = nice_step(hi - lo, 8);
    const double first_tick = std::ceil(lo / step) * step;
    svg << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
    for (double tick = first_tick; tick <= hi; tick += step)
        svg << fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n", num(kMarginLeft),
                           num(map_y(tick)), num(kWidth - kMarginRight), num(map_y(tick)));
    svg << "</g>\n";
    svg << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\" "
           "text-anchor=\"end\">\n";
    for (double tick = first_tick; tick <= hi; tick += step)
        svg << fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", num(kMarginLeft - 6),
                           num(map_y(tick) + 4), fmt::format("{:.4g}", tick));
    svg << "</g>\n";

    // x labels: first, middle, last date
    svg << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\" "
           "text-anchor=\"middle\">\n";
    for (std::size_t i : {std::size_t{0}, dates.size() / 2, dates.size() - 1})
        svg << fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", num(map_x(i)),
                           num(kHeight - kMarginBottom + 18), dates[i].to_string());
    svg << "</g>\n";

    svg << fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" "
                       "stroke=\"#000000\"/>\n", num(kMarginLeft), num(kMarginTop),
                       num(plot_w), num(plot_h));

    for (const auto& s : series) {
        svg << fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" "
                           "points=\"", s.color);
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            if (i) svg << ' ';
            svg << num(map_x(i)) << ',' << num(map_y(s.values[i]));
        }
        svg << "\"/>\n";
    }

    // legend
    double ly = kMarginTop + 14;
    for (const auto& s : series) {
        svg << fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" "
                           "stroke-width=\"2\"/>\n", num(kMarginLeft + 12), num(ly),
                           num(kMarginLeft + 36), num(ly), s.color);
        svg << fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" "
                           "font-size=\"12\" fill=\"#111111\">{}</text>\n",
                           num(kMarginLeft + 42), num(ly + 4), xml_escape(s.label));
        ly += 18;
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_line_chart(const std::string& path, const std::string& title,
                      const std::vector<Date>& dates,
                      const std::vector<ChartSeries>& series) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(fmt::format("cannot write '{}'", path));
    out << render_line_chart(title, dates, series);
}

}  // namespace sentifolio
