#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "lfbm/cylindrical.hpp"
#include "lfbm/grid.hpp"
#include "lfbm/sampling.hpp"

namespace lfbm {

/// Shortest stable decimal rendering of a double ("%.17g"); identical input
/// bits give identical text, which is what the byte-identical artifact
/// contract needs.
std::string format_double(double v);

/// "# key=value" comment header lines used to echo the configuration into CSV
/// artifacts.
void write_csv_header(std::ostream& os, const std::map<std::string, std::string>& config);

/// Step function as CSV rows "t,value" (cell right endpoint, cell value).
void write_step_csv(std::ostream& os, const StepFunction& f,
                    const std::map<std::string, std::string>& config);

/// Node array as CSV rows "t,value".
void write_nodes_csv(std::ostream& os, const TimeGrid& grid, const std::vector<double>& nodes,
                     bool left_endpoints, const std::map<std::string, std::string>& config);

/// Ensemble in long format: path_id,t,value.
void write_ensemble_csv(std::ostream& os, const PathEnsemble& ens,
                        const std::map<std::string, std::string>& config);

/// Grid + values as JSON.
std::string step_to_json(const StepFunction& f);
StepFunction step_from_json(const std::string& text);

/// Ensemble summary JSON: seed, scheme, grid, per-node moment statistics.
std::string ensemble_summary_json(const PathEnsemble& ens,
                                  const std::map<std::string, std::string>& config);

/// Operator path JSON: {m, e, grid, cells: [[row-major e x m]...]}.
std::string operator_path_to_json(const OperatorPath& phi);
OperatorPath operator_path_from_json(const std::string& text);

/// RFC-4180-style quoting for a CSV field (quotes doubled, field quoted when
/// it contains comma/quote/newline).
std::string csv_quote(const std::string& field);

} // namespace lfbm
