#pragma once

#include <string>
#include <utility>
#include <vector>

#include "astroturf/eval.hpp"

// Dependency-free SVG charts. Output carries no timestamps, so equal data
// renders to identical bytes.
namespace astroturf::svg {

struct Series {
    std::string name;
    std::vector<double> values;
};

// Horizontal bars, first entry on top.
std::string bar_chart(const std::string& title, const std::vector<std::pair<std::string, double>>& bars);

// One polyline per series over shared x labels; only every n-th label is
// printed so the axis stays legible.
std::string line_chart(const std::string& title, const std::vector<std::string>& x_labels,
                       const std::vector<Series>& series);

// Two panels: the full ROC curve and the part with FPR <= fpr_bound.
std::string roc_chart(const std::string& title, const std::vector<eval::RocPoint>& points, double auc,
                      double bounded_auc, double fpr_bound = 0.1);

std::string escape(const std::string& text);

}  // namespace astroturf::svg
