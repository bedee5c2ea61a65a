#pragma once

#include <functional>

namespace lfbm {

/// Adaptive Simpson integration of f over [a,b].
/// Integrands are expected to be bounded; callers substitute away endpoint
/// singularities before integrating.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol = 1e-12, int max_depth = 52);

} // namespace lfbm
