#include "lfbm/serialize.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "lfbm/linalg.hpp"

namespace lfbm {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        out += c;
    }
    out += "\"";
    return out;
}

void write_csv_header(std::ostream& os, const std::map<std::string, std::string>& config) {
    for (const auto& [k, v] : config) os << "# " << k << "=" << v << "\n";
}

void write_step_csv(std::ostream& os, const StepFunction& f,
                    const std::map<std::string, std::string>& config) {
    write_csv_header(os, config);
    os << "t,value\n";
    for (std::size_t j = 0; j < f.size(); ++j)
        os << format_double(f.grid().node(j + 1)) << "," << format_double(f.value(j)) << "\n";
}

void write_nodes_csv(std::ostream& os, const TimeGrid& grid, const std::vector<double>& nodes,
                     bool left_endpoints, const std::map<std::string, std::string>& config) {
    write_csv_header(os, config);
    os << "t,value\n";
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double t = left_endpoints ? grid.node(i) : grid.node(i + 1);
        os << format_double(t) << "," << format_double(nodes[i]) << "\n";
    }
}

void write_ensemble_csv(std::ostream& os, const PathEnsemble& ens,
                        const std::map<std::string, std::string>& config) {
    write_csv_header(os, config);
    os << "path_id,t,value\n";
    for (std::size_t r = 0; r < ens.n_paths(); ++r) {
        auto p = ens.path(r);
        for (std::size_t i = 0; i < p.size(); ++i)
            os << r << "," << format_double(ens.grid().node(i + 1)) << ","
               << format_double(p[i]) << "\n";
    }
}

namespace {

nlohmann::json grid_to_json(const TimeGrid& g) {
    return {{"t_start", g.t_start()}, {"t_end", g.t_end()}, {"n_cells", g.n_cells()}};
}

TimeGrid grid_from_json(const nlohmann::json& j) {
    return TimeGrid(j.at("t_start").get<double>(), j.at("t_end").get<double>(),
                    j.at("n_cells").get<std::size_t>());
}

} // namespace

std::string step_to_json(const StepFunction& f) {
    nlohmann::json j;
    j["grid"] = grid_to_json(f.grid());
    j["values"] = f.values();
    return j.dump(2);
}

StepFunction step_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    return StepFunction(grid_from_json(j.at("grid")), j.at("values").get<std::vector<double>>());
}

std::string ensemble_summary_json(const PathEnsemble& ens,
                                  const std::map<std::string, std::string>& config) {
    nlohmann::json j;
    j["seed"] = ens.master_seed();
    j["scheme"] = ens.scheme() == SampleScheme::cholesky ? "cholesky" : "moving_average";
    j["kind"] = ens.kind() == CovKind::liouville ? "liouville" : "classical";
    j["beta"] = ens.beta().beta();
    j["grid"] = grid_to_json(ens.grid());
    j["n_paths"] = ens.n_paths();
    nlohmann::json cfg;
    for (const auto& [k, v] : config) cfg[k] = v;
    j["config"] = cfg;
    std::vector<double> mean(ens.n_nodes(), 0.0), var(ens.n_nodes(), 0.0);
    std::vector<double> col(ens.n_paths());
    for (std::size_t i = 0; i < ens.n_nodes(); ++i) {
        for (std::size_t r = 0; r < ens.n_paths(); ++r) col[r] = ens.path(r)[i];
        const MomentStats ms = moments(col);
        mean[i] = ms.mean;
        var[i] = ms.variance;
    }
    j["node_mean"] = mean;
    j["node_variance"] = var;
    return j.dump(2);
}

std::string operator_path_to_json(const OperatorPath& phi) {
    nlohmann::json j;
    j["m"] = phi.dim_noise();
    j["e"] = phi.dim_state();
    j["grid"] = grid_to_json(phi.grid());
    nlohmann::json cells = nlohmann::json::array();
    for (std::size_t c = 0; c < phi.grid().n_cells(); ++c)
        cells.push_back(phi.cell(c).entries());
    j["cells"] = cells;
    return j.dump(2);
}

OperatorPath operator_path_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const std::size_t m = j.at("m").get<std::size_t>();
    const std::size_t e = j.at("e").get<std::size_t>();
    TimeGrid grid = grid_from_json(j.at("grid"));
    std::vector<FiniteRankMap> cells;
    for (const auto& c : j.at("cells"))
        cells.emplace_back(e, m, c.get<std::vector<double>>());
    return OperatorPath(grid, std::move(cells));
}

} // namespace lfbm
