#include "lfbm/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lfbm {
namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

} // namespace

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label, bool log_x,
                 bool log_y)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)),
      log_x_(log_x), log_y_(log_y) {}

void SvgPlot::add_series(const std::string& label, const std::vector<double>& x,
                         const std::vector<double>& y) {
    if (x.size() != y.size() || x.empty())
        throw std::invalid_argument("SvgPlot: series size mismatch");
    series_.push_back({label, x, y});
}

std::string SvgPlot::render() const {
    const double W = 800, H = 500, ml = 70, mr = 20, mt = 40, mb = 50;
    auto tx = [&](double v) { return log_x_ ? std::log10(v) : v; };
    auto ty = [&](double v) { return log_y_ ? std::log10(v) : v; };

    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const auto& s : series_)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double xv = tx(s.x[i]);
            const double yv = ty(s.y[i]);
            if (!std::isfinite(xv) || !std::isfinite(yv)) continue;
            if (first) {
                xmin = xmax = xv;
                ymin = ymax = yv;
                first = false;
            } else {
                xmin = std::min(xmin, xv);
                xmax = std::max(xmax, xv);
                ymin = std::min(ymin, yv);
                ymax = std::max(ymax, yv);
            }
        }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    auto px = [&](double v) { return ml + (tx(v) - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto py = [&](double v) { return H - mb - (ty(v) - ymin) / (ymax - ymin) * (H - mt - mb); };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W
       << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
       << title_ << "</text>\n";
    // axes
    os << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
       << H - mb << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12
       << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label_
       << (log_x_ ? " (log10)" : "") << "</text>\n";
    os << "<text x=\"16\" y=\"" << (mt + H - mb) / 2
       << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
       << (mt + H - mb) / 2 << ")\">" << y_label_ << (log_y_ ? " (log10)" : "") << "</text>\n";
    // axis extremes
    os << "<text x=\"" << ml << "\" y=\"" << H - mb + 16 << "\" font-size=\"11\">"
       << fmt(log_x_ ? std::pow(10, xmin) : xmin) << "</text>\n";
    os << "<text x=\"" << W - mr << "\" y=\"" << H - mb + 16
       << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(log_x_ ? std::pow(10, xmax) : xmax)
       << "</text>\n";
    os << "<text x=\"" << ml - 6 << "\" y=\"" << H - mb << "\" text-anchor=\"end\" "
       << "font-size=\"11\">" << fmt(log_y_ ? std::pow(10, ymin) : ymin) << "</text>\n";
    os << "<text x=\"" << ml - 6 << "\" y=\"" << mt + 4 << "\" text-anchor=\"end\" "
       << "font-size=\"11\">" << fmt(log_y_ ? std::pow(10, ymax) : ymax) << "</text>\n";

    for (std::size_t s = 0; s < series_.size(); ++s) {
        const auto& sr = series_[s];
        const char* color = kColors[s % 8];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < sr.x.size(); ++i) {
            if (i) os << " ";
            os << fmt(px(sr.x[i])) << "," << fmt(py(sr.y[i]));
        }
        os << "\"/>\n";
        os << "<text x=\"" << W - mr - 6 << "\" y=\"" << mt + 16 + 16 * s
           << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << color << "\">" << sr.label
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace lfbm
