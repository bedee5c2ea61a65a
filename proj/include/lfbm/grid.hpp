#pragma once

#include <cstddef>
#include <vector>

namespace lfbm {

/// Uniform partition of [t_start, t_end] into n_cells cells.
/// Cell j (1-based) covers (t_{j-1}, t_j] with t_i = t_start + i*dt.
class TimeGrid {
public:
    TimeGrid(double t_start, double t_end, std::size_t n_cells);

    double t_start() const { return t_start_; }
    double t_end() const { return t_end_; }
    std::size_t n_cells() const { return n_; }
    double dt() const { return dt_; }
    double length() const { return t_end_ - t_start_; }

    /// Node t_i, i = 0..n_cells.
    double node(std::size_t i) const { return t_start_ + static_cast<double>(i) * dt_; }
    /// Midpoint of cell j (0-based).
    double midpoint(std::size_t j) const { return t_start_ + (static_cast<double>(j) + 0.5) * dt_; }

    /// Grid with each cell split into `factor` subcells.
    TimeGrid refined(std::size_t factor) const { return TimeGrid(t_start_, t_end_, n_ * factor); }

    bool operator==(const TimeGrid& o) const;

private:
    double t_start_;
    double t_end_;
    std::size_t n_;
    double dt_;
};

/// Piecewise-constant function on a TimeGrid: one value per cell.
class StepFunction {
public:
    StepFunction(TimeGrid grid, std::vector<double> values);
    /// Constant c on the whole grid.
    static StepFunction constant(const TimeGrid& grid, double c);

    const TimeGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }
    double value(std::size_t cell) const { return values_[cell]; }
    std::size_t size() const { return values_.size(); }

    double l2_norm() const;

    /// f(b - (t - a)), cell values reversed.
    StepFunction reversed() const;
    /// Each cell split into `factor` subcells, values repeated. Exact.
    StepFunction refined(std::size_t factor) const;

private:
    TimeGrid grid_;
    std::vector<double> values_;
};

} // namespace lfbm
