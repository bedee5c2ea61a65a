#include "lfbm/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace lfbm {

TimeGrid::TimeGrid(double t_start, double t_end, std::size_t n_cells)
    : t_start_(t_start), t_end_(t_end), n_(n_cells) {
    if (!(t_start >= 0.0)) throw std::invalid_argument("TimeGrid: t_start must be >= 0");
    if (!(t_end > t_start)) throw std::invalid_argument("TimeGrid: t_end must exceed t_start");
    if (n_cells == 0) throw std::invalid_argument("TimeGrid: n_cells must be positive");
    dt_ = (t_end_ - t_start_) / static_cast<double>(n_);
}

bool TimeGrid::operator==(const TimeGrid& o) const {
    return t_start_ == o.t_start_ && t_end_ == o.t_end_ && n_ == o.n_;
}

StepFunction::StepFunction(TimeGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.n_cells())
        throw std::invalid_argument("StepFunction: values length must equal n_cells");
}

StepFunction StepFunction::constant(const TimeGrid& grid, double c) {
    return StepFunction(grid, std::vector<double>(grid.n_cells(), c));
}

double StepFunction::l2_norm() const {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return std::sqrt(grid_.dt() * s);
}

StepFunction StepFunction::reversed() const {
    std::vector<double> v(values_.rbegin(), values_.rend());
    return StepFunction(grid_, std::move(v));
}

StepFunction StepFunction::refined(std::size_t factor) const {
    if (factor == 0) throw std::invalid_argument("StepFunction: refine factor must be positive");
    std::vector<double> v;
    v.reserve(values_.size() * factor);
    for (double x : values_)
        for (std::size_t r = 0; r < factor; ++r) v.push_back(x);
    return StepFunction(grid_.refined(factor), std::move(v));
}

} // namespace lfbm
