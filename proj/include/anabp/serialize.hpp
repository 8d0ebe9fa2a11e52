#pragma once

#include <string>

#include <json.hpp>

#include "anabp/approx.hpp"
#include "anabp/cosparsity.hpp"
#include "anabp/experiments.hpp"
#include "anabp/operators.hpp"
#include "anabp/rate.hpp"
#include "anabp/solver.hpp"
#include "anabp/statdim.hpp"

namespace anabp {

using Json = nlohmann::ordered_json;

// Binary operator container: fixed header {kind, n, N, levels, seed}
// followed by row-major 64-bit float entries (little endian).
void save_operator(const AnalysisOperator& op, const std::string& path);
AnalysisOperator load_operator(const std::string& path);

// Instance archive: {seed, m, n, eta} header plus the raw A and y payloads.
void save_instance(const MeasurementInstance& inst, const std::string& path);
MeasurementInstance load_instance(const std::string& path);

Json profile_to_json(const CosparsityProfile& prof);
Json rate_to_json(const RateReport& report);
Json estimate_to_json(const StatDimEstimate& est);
Json trace_to_json(const GreedyTrace& trace);
Json sweep_to_json(const std::vector<CompressPoint>& points);

Json grid_to_json(const ExperimentGrid& grid);
ExperimentGrid grid_from_json(const Json& j);
std::string grid_to_csv(const ExperimentGrid& grid);

// format is "csv" or "json"; output is byte-stable for identical grids.
void emit_report(const ExperimentGrid& grid, const std::string& format,
                 const std::string& path);

}  // namespace anabp
