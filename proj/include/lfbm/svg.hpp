#pragma once

#include <string>
#include <vector>

namespace lfbm {

/// Minimal self-contained SVG 1.1 line-plot writer: axes plus one polyline
/// per series. No external plotting dependency; output is deterministic.
class SvgPlot {
public:
    SvgPlot(std::string title, std::string x_label, std::string y_label, bool log_x = false,
            bool log_y = false);

    void add_series(const std::string& label, const std::vector<double>& x,
                    const std::vector<double>& y);

    std::string render() const;

private:
    std::string title_, x_label_, y_label_;
    bool log_x_, log_y_;
    struct Series {
        std::string label;
        std::vector<double> x, y;
    };
    std::vector<Series> series_;
};

} // namespace lfbm
