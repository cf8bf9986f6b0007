#pragma once
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hubbard/io/table.hpp"

namespace hubbard::io {

inline double relative_deviation(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-30});
}

struct ComparisonRow {
    std::string label;
    double analytic = 0.0;
    double oracle = 0.0;
    double deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;

    ComparisonRow& add(std::string label, double analytic, double oracle, double tolerance) {
        double d = relative_deviation(analytic, oracle);
        rows.push_back({std::move(label), analytic, oracle, d, tolerance, d <= tolerance});
        return rows.back();
    }
    bool pass() const {
        return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.pass; });
    }
    double worst() const {
        double w = 0.0;
        for (const auto& r : rows) w = std::max(w, r.deviation);
        return w;
    }

    // Labels become the leading numeric column `index`; the label text goes to meta.
    Table table(json meta = json::object()) const {
        Table t({"index", "analytic", "oracle", "deviation", "tolerance", "pass"}, std::move(meta));
        json labels = json::array();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            t.add({double(i), r.analytic, r.oracle, r.deviation, r.tolerance, r.pass ? 1.0 : 0.0});
            labels.push_back(r.label);
        }
        t.meta["labels"] = labels;
        return t;
    }
};

}  // namespace hubbard::io
