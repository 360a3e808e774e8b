#include "astroturf/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "astroturf/csv.hpp"

namespace astroturf::svg {
namespace {

constexpr std::array<const char*, 6> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

// Fixed-precision coordinates keep the files diffable.
std::string fmt(double v) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(2);
    out << v;
    return out.str();
}

std::string header(double width, double height) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" + fmt(height) +
           "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n"
           "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string text(double x, double y, const std::string& s, const char* anchor = "start", int size = 11) {
    return "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" text-anchor=\"" + anchor + "\" font-size=\"" +
           std::to_string(size) + "\">" + escape(s) + "</text>\n";
}

std::string line(double x1, double y1, double x2, double y2, const char* stroke = "#333") {
    return "<line x1=\"" + fmt(x1) + "\" y1=\"" + fmt(y1) + "\" x2=\"" + fmt(x2) + "\" y2=\"" + fmt(y2) +
           "\" stroke=\"" + stroke + "\"/>\n";
}

// Round axis maximum: 1, 2 or 5 times a power of ten.
double nice_max(double v) {
    if (!(v > 0)) return 1.0;
    const double p = std::pow(10.0, std::floor(std::log10(v)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (v <= m * p) return m * p;
    }
    return 10 * p;
}

std::string panel(const std::vector<eval::RocPoint>& points, double x0, double y0, double size, double fpr_max,
                  const std::string& caption) {
    std::string s;
    s += "<rect x=\"" + fmt(x0) + "\" y=\"" + fmt(y0) + "\" width=\"" + fmt(size) + "\" height=\"" + fmt(size) +
         "\" fill=\"none\" stroke=\"#333\"/>\n";
    auto px = [&](double fpr) { return x0 + size * std::min(fpr, fpr_max) / fpr_max; };
    auto py = [&](double tpr) { return y0 + size * (1.0 - tpr); };
    s += "<line x1=\"" + fmt(px(0)) + "\" y1=\"" + fmt(py(0)) + "\" x2=\"" + fmt(px(fpr_max)) + "\" y2=\"" +
         fmt(py(fpr_max)) + "\" stroke=\"#aaa\" stroke-dasharray=\"4 3\"/>\n";
    std::string path;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        if (p.fpr > fpr_max) {
            // Interpolate the crossing of the panel edge and stop.
            if (i > 0) {
                const auto& q = points[i - 1];
                const double t = (fpr_max - q.fpr) / (p.fpr - q.fpr);
                path += " " + fmt(px(fpr_max)) + "," + fmt(py(q.tpr + t * (p.tpr - q.tpr)));
            }
            break;
        }
        path += (path.empty() ? "" : " ") + fmt(px(p.fpr)) + "," + fmt(py(p.tpr));
    }
    s += "<polyline fill=\"none\" stroke=\"" + std::string(kPalette[0]) + "\" stroke-width=\"2\" points=\"" + path + "\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double f = fpr_max * k / 4.0;
        s += text(px(f), y0 + size + 14, csv::number(std::round(f * 1000) / 1000), "middle");
        s += text(x0 - 6, py(k / 4.0) + 4, csv::number(k / 4.0), "end");
    }
    s += text(x0 + size / 2, y0 + size + 30, "false positive rate", "middle");
    s += text(x0 + size / 2, y0 - 8, caption, "middle", 12);
    return s;
}

}  // namespace

std::string escape(const std::string& in) {
    std::string out;
    for (char c : in) {
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

std::string bar_chart(const std::string& title, const std::vector<std::pair<std::string, double>>& bars) {
    const double label_w = 200, plot_w = 420, bar_h = 18, gap = 6, top = 40;
    const double height = top + static_cast<double>(bars.size()) * (bar_h + gap) + 40;
    double vmax = 0;
    for (const auto& [_, v] : bars) vmax = std::max(vmax, v);
    vmax = nice_max(vmax);
    std::string s = header(label_w + plot_w + 60, height);
    s += text((label_w + plot_w + 60) / 2, 22, title, "middle", 14);
    double y = top;
    for (const auto& [name, v] : bars) {
        const double w = plot_w * v / vmax;
        s += text(label_w - 6, y + bar_h - 5, name, "end");
        s += "<rect x=\"" + fmt(label_w) + "\" y=\"" + fmt(y) + "\" width=\"" + fmt(w) + "\" height=\"" + fmt(bar_h) +
             "\" fill=\"" + kPalette[0] + "\"/>\n";
        s += text(label_w + w + 4, y + bar_h - 5, csv::number(v));
        y += bar_h + gap;
    }
    s += line(label_w, top - 4, label_w, y);
    s += text(label_w, y + 16, "0", "middle");
    s += text(label_w + plot_w, y + 16, csv::number(vmax), "middle");
    s += "</svg>\n";
    return s;
}

std::string line_chart(const std::string& title, const std::vector<std::string>& x_labels,
                       const std::vector<Series>& series) {
    const double left = 70, top = 40, plot_w = 640, plot_h = 300, legend_h = 20.0 * static_cast<double>(series.size());
    double vmax = 0;
    for (const auto& se : series) {
        for (double v : se.values) vmax = std::max(vmax, v);
    }
    vmax = nice_max(vmax);
    const std::size_t n = x_labels.size();
    auto px = [&](std::size_t i) { return left + (n <= 1 ? 0.0 : plot_w * static_cast<double>(i) / static_cast<double>(n - 1)); };
    auto py = [&](double v) { return top + plot_h * (1.0 - v / vmax); };
    std::string s = header(left + plot_w + 40, top + plot_h + 60 + legend_h);
    s += text(left + plot_w / 2, 22, title, "middle", 14);
    s += line(left, top, left, top + plot_h);
    s += line(left, top + plot_h, left + plot_w, top + plot_h);
    for (int k = 0; k <= 4; ++k) {
        const double v = vmax * k / 4.0;
        s += text(left - 6, py(v) + 4, csv::number(v), "end");
        s += line(left - 3, py(v), left, py(v));
    }
    const std::size_t step = std::max<std::size_t>(1, (n + 7) / 8);
    for (std::size_t i = 0; i < n; i += step) s += text(px(i), top + plot_h + 16, x_labels[i], "middle", 10);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const char* color = kPalette[k % kPalette.size()];
        std::string pts;
        for (std::size_t i = 0; i < series[k].values.size() && i < n; ++i) {
            pts += (pts.empty() ? "" : " ") + fmt(px(i)) + "," + fmt(py(series[k].values[i]));
        }
        s += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        const double ly = top + plot_h + 36 + 20.0 * static_cast<double>(k);
        s += "<rect x=\"" + fmt(left) + "\" y=\"" + fmt(ly - 9) + "\" width=\"12\" height=\"10\" fill=\"" + color + "\"/>\n";
        s += text(left + 18, ly, series[k].name);
    }
    s += "</svg>\n";
    return s;
}

std::string roc_chart(const std::string& title, const std::vector<eval::RocPoint>& points, double auc,
                      double bounded_auc, double fpr_bound) {
    const double size = 280, margin = 60;
    std::string s = header(2 * size + 3 * margin, size + 2 * margin + 20);
    s += text(size + 1.5 * margin, 20, title, "middle", 14);
    s += panel(points, margin, margin, size, 1.0, "AUC " + fmt(auc));
    s += panel(points, 2 * margin + size, margin, size, fpr_bound,
               "FPR <= " + csv::number(fpr_bound) + ", bounded AUC " + fmt(bounded_auc));
    s += "<text x=\"16\" y=\"" + fmt(margin + size / 2) + "\" transform=\"rotate(-90 16 " + fmt(margin + size / 2) +
         ")\" text-anchor=\"middle\">true positive rate</text>\n";
    s += "</svg>\n";
    return s;
}

}  // namespace astroturf::svg
