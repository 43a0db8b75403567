#include "ccabc/plots.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ccabc/metrics_io.hpp"

namespace ccabc {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 420;
constexpr int kMarginLeft = 80;
constexpr int kMarginRight = 24;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 56;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
constexpr int kPaletteSize = 6;

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

struct SeriesData {
    std::string name;
    std::vector<double> xs;
    std::vector<double> ys;
};

// round a span upward to a friendly tick step
double nice_step(double span) {
    if (span <= 0.0) return 1.0;
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (raw <= m * mag) return m * mag;
    }
    return 10.0 * mag;
}

std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<SeriesData>& series,
                       double y_min_fixed = std::nan(""), double y_max_fixed = std::nan("")) {
    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    bool any = false;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            if (!any) {
                x_min = x_max = s.xs[i];
                y_min = y_max = s.ys[i];
                any = true;
            }
            x_min = std::min(x_min, s.xs[i]);
            x_max = std::max(x_max, s.xs[i]);
            y_min = std::min(y_min, s.ys[i]);
            y_max = std::max(y_max, s.ys[i]);
        }
    }
    if (!std::isnan(y_min_fixed)) y_min = y_min_fixed;
    if (!std::isnan(y_max_fixed)) y_max = y_max_fixed;
    if (y_max <= y_min) y_max = y_min + 1.0;
    if (x_max <= x_min) x_max = x_min + 1.0;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto px = [&](double x) { return kMarginLeft + (x - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double y) { return kMarginTop + plot_h - (y - y_min) / (y_max - y_min) * plot_h; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth) +
           "\" height=\"" + std::to_string(kHeight) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + std::to_string(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">" + esc(title) + "</text>\n";

    // axes + ticks
    const double ty_step = nice_step(y_max - y_min);
    for (double ty = std::ceil(y_min / ty_step) * ty_step; ty <= y_max + 1e-12 * ty_step; ty += ty_step) {
        const double yy = py(ty);
        svg += "<line x1=\"" + fmt_g9(kMarginLeft) + "\" y1=\"" + fmt_g9(yy) + "\" x2=\"" +
               fmt_g9(kWidth - kMarginRight) + "\" y2=\"" + fmt_g9(yy) +
               "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + fmt_g9(kMarginLeft - 6) + "\" y=\"" + fmt_g9(yy + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fmt_g9(ty) +
               "</text>\n";
    }
    const double tx_step = nice_step(x_max - x_min);
    for (double tx = std::ceil(x_min / tx_step) * tx_step; tx <= x_max + 1e-12 * tx_step; tx += tx_step) {
        const double xx = px(tx);
        svg += "<text x=\"" + fmt_g9(xx) + "\" y=\"" + fmt_g9(kHeight - kMarginBottom + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + fmt_g9(tx) +
               "</text>\n";
    }
    svg += "<line x1=\"" + fmt_g9(kMarginLeft) + "\" y1=\"" + fmt_g9(kMarginTop) + "\" x2=\"" +
           fmt_g9(kMarginLeft) + "\" y2=\"" + fmt_g9(kHeight - kMarginBottom) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + fmt_g9(kMarginLeft) + "\" y1=\"" + fmt_g9(kHeight - kMarginBottom) +
           "\" x2=\"" + fmt_g9(kWidth - kMarginRight) + "\" y2=\"" +
           fmt_g9(kHeight - kMarginBottom) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";

    svg += "<text x=\"" + std::to_string(kWidth / 2) + "\" y=\"" + std::to_string(kHeight - 12) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + esc(x_label) +
           "</text>\n";
    svg += "<text x=\"18\" y=\"" + std::to_string(kHeight / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 18 " +
           std::to_string(kHeight / 2) + ")\">" + esc(y_label) + "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        if (s.xs.empty()) continue;
        std::string points;
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            points += fmt_g9(px(s.xs[i]));
            points += ',';
            points += fmt_g9(py(s.ys[i]));
            points += ' ';
        }
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(kPalette[si % kPaletteSize]) +
               "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
        svg += "<text x=\"" + std::to_string(kMarginLeft + 10) + "\" y=\"" +
               std::to_string(kMarginTop + 16 + 16 * static_cast<int>(si)) +
               "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" +
               kPalette[si % kPaletteSize] + "\">" + esc(s.name) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

std::string bar_chart(const std::string& title, const std::vector<std::string>& bar_labels,
                      const std::vector<std::pair<std::string, std::vector<double>>>& groups) {
    double y_max = 0.0;
    for (const auto& [name, vals] : groups)
        for (double v : vals) y_max = std::max(y_max, v);
    if (y_max <= 0.0) y_max = 1.0;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    const std::size_t n_bars = bar_labels.size();
    const std::size_t n_groups = std::max<std::size_t>(1, groups.size());
    const double slot = plot_w / static_cast<double>(std::max<std::size_t>(1, n_bars));
    const double bar_w = slot * 0.8 / static_cast<double>(n_groups);

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth) +
           "\" height=\"" + std::to_string(kHeight) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + std::to_string(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">" + esc(title) + "</text>\n";

    const double ty_step = nice_step(y_max);
    for (double ty = 0.0; ty <= y_max + 1e-12 * ty_step; ty += ty_step) {
        const double yy = kMarginTop + plot_h - ty / y_max * plot_h;
        svg += "<line x1=\"" + fmt_g9(kMarginLeft) + "\" y1=\"" + fmt_g9(yy) + "\" x2=\"" +
               fmt_g9(kWidth - kMarginRight) + "\" y2=\"" + fmt_g9(yy) +
               "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + fmt_g9(kMarginLeft - 6) + "\" y=\"" + fmt_g9(yy + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fmt_g9(ty) +
               "</text>\n";
    }

    for (std::size_t b = 0; b < n_bars; ++b) {
        const double x0 = kMarginLeft + slot * static_cast<double>(b) + slot * 0.1;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            const double v = b < groups[g].second.size() ? groups[g].second[b] : 0.0;
            const double bh = v / y_max * plot_h;
            svg += "<rect x=\"" + fmt_g9(x0 + bar_w * static_cast<double>(g)) + "\" y=\"" +
                   fmt_g9(kMarginTop + plot_h - bh) + "\" width=\"" + fmt_g9(bar_w * 0.92) +
                   "\" height=\"" + fmt_g9(bh) + "\" fill=\"" + kPalette[g % kPaletteSize] +
                   "\"/>\n";
        }
        svg += "<text x=\"" + fmt_g9(x0 + slot * 0.4) + "\" y=\"" +
               fmt_g9(kHeight - kMarginBottom + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               esc(bar_labels[b]) + "</text>\n";
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
        svg += "<text x=\"" + std::to_string(kMarginLeft + 10) + "\" y=\"" +
               std::to_string(kMarginTop + 16 + 16 * static_cast<int>(g)) +
               "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" +
               kPalette[g % kPaletteSize] + "\">" + esc(groups[g].first) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace

std::vector<std::string> render_plots(const std::vector<MetricsSeries>& series,
                                      const std::string& out_dir) {
    if (series.empty()) throw std::invalid_argument("render_plots: need at least one series");

    auto collect = [&](auto&& metric) {
        std::vector<SeriesData> out;
        for (const auto& s : series) {
            SeriesData d;
            d.name = s.protocol;
            for (const RoundMetrics& m : s.rows) {
                d.xs.push_back(static_cast<double>(m.round));
                d.ys.push_back(metric(m));
            }
            out.push_back(std::move(d));
        }
        return out;
    };

    std::vector<std::pair<std::string, std::string>> files;
    files.emplace_back("fig6_active_nodes.svg",
                       line_chart("Active nodes per round", "round", "active nodes",
                                  collect([](const RoundMetrics& m) { return double(m.active); }), 0.0));
    files.emplace_back("fig7_alive_nodes.svg",
                       line_chart("Alive nodes per round", "round", "alive nodes",
                                  collect([](const RoundMetrics& m) {
                                      return double(m.active + m.standby);
                                  }),
                                  0.0));
    files.emplace_back(
        "fig8_avg_energy_per_round.svg",
        line_chart("Average energy consumed per node per round", "round", "energy (J)",
                   collect([](const RoundMetrics& m) {
                       const int n = m.active + m.standby + m.dead;
                       return n > 0 ? m.energy_spent / n : 0.0;
                   }),
                   0.0));
    files.emplace_back("fig9_total_energy.svg",
                       line_chart("Total network energy", "round", "energy (J)",
                                  collect([](const RoundMetrics& m) { return m.energy_total; }), 0.0));
    files.emplace_back("fig10_coverage.svg",
                       line_chart("Network coverage", "round", "coverage (%)",
                                  collect([](const RoundMetrics& m) { return 100.0 * m.coverage; }),
                                  0.0, 100.0));

    bool have_breakdown = false;
    for (const auto& s : series)
        if (s.breakdown.total() > 0.0) have_breakdown = true;
    if (have_breakdown) {
        std::vector<std::pair<std::string, std::vector<double>>> groups;
        for (const auto& s : series)
            groups.emplace_back(s.protocol,
                                std::vector<double>{s.breakdown.tx, s.breakdown.rx,
                                                    s.breakdown.aggregation, s.breakdown.standby});
        files.emplace_back("fig11_energy_breakdown.svg",
                           bar_chart("Energy utilization by charge type (J)",
                                     {"tx", "rx", "aggregation", "standby"}, groups));
    } else {
        // parsed-from-CSV series carry no per-category totals
        std::vector<std::pair<std::string, std::vector<double>>> groups;
        for (const auto& s : series) {
            double total = 0.0;
            for (const RoundMetrics& m : s.rows) total += m.energy_spent;
            groups.emplace_back(s.protocol, std::vector<double>{total});
        }
        files.emplace_back("fig11_energy_breakdown.svg",
                           bar_chart("Total energy spent (J)", {"total"}, groups));
    }

    std::vector<std::string> paths;
    for (const auto& [name, content] : files) {
        const std::string path = out_dir + "/" + name;
        write_text_file(path, content);
        paths.push_back(path);
    }
    return paths;
}

}  // namespace ccabc
