#include "anabp/serialize.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace anabp {

namespace {

constexpr std::uint32_t kOperatorMagic = 0x50424e41;  // "ANBP"
constexpr std::uint32_t kInstanceMagic = 0x49424e41;  // "ANBI"
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("serialize: truncated file");
  return v;
}

void write_matrix(std::ostream& out, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) write_pod(out, m(i, j));
}

void read_matrix(std::istream& in, Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = read_pod<double>(in);
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void save_operator(const AnalysisOperator& op, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_operator: cannot open " + path);
  write_pod(out, kOperatorMagic);
  write_pod(out, kVersion);
  write_pod(out, static_cast<std::uint32_t>(op.kind));
  write_pod(out, static_cast<std::uint64_t>(op.cols()));
  write_pod(out, static_cast<std::uint64_t>(op.rows()));
  write_pod(out, static_cast<std::uint32_t>(op.levels));
  write_pod(out, static_cast<std::uint8_t>(op.seed.has_value() ? 1 : 0));
  write_pod(out, static_cast<std::uint64_t>(op.seed.value_or(0)));
  write_matrix(out, op.matrix);
  if (!out) throw std::runtime_error("save_operator: write failed");
}

AnalysisOperator load_operator(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_operator: cannot open " + path);
  if (read_pod<std::uint32_t>(in) != kOperatorMagic)
    throw std::runtime_error("load_operator: bad magic");
  if (read_pod<std::uint32_t>(in) != kVersion)
    throw std::runtime_error("load_operator: unsupported version");
  AnalysisOperator op;
  op.kind = static_cast<OperatorKind>(read_pod<std::uint32_t>(in));
  const auto n = static_cast<Eigen::Index>(read_pod<std::uint64_t>(in));
  const auto N = static_cast<Eigen::Index>(read_pod<std::uint64_t>(in));
  op.levels = static_cast<int>(read_pod<std::uint32_t>(in));
  const bool has_seed = read_pod<std::uint8_t>(in) != 0;
  const auto seed = read_pod<std::uint64_t>(in);
  if (has_seed) op.seed = seed;
  op.matrix.resize(N, n);
  read_matrix(in, op.matrix);
  return op;
}

void save_instance(const MeasurementInstance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_instance: cannot open " + path);
  write_pod(out, kInstanceMagic);
  write_pod(out, kVersion);
  write_pod(out, static_cast<std::uint64_t>(inst.seed));
  write_pod(out, static_cast<std::uint64_t>(inst.A.rows()));
  write_pod(out, static_cast<std::uint64_t>(inst.A.cols()));
  write_pod(out, inst.eta);
  write_matrix(out, inst.A);
  for (Eigen::Index i = 0; i < inst.y.size(); ++i) write_pod(out, inst.y(i));
  if (!out) throw std::runtime_error("save_instance: write failed");
}

MeasurementInstance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_instance: cannot open " + path);
  if (read_pod<std::uint32_t>(in) != kInstanceMagic)
    throw std::runtime_error("load_instance: bad magic");
  if (read_pod<std::uint32_t>(in) != kVersion)
    throw std::runtime_error("load_instance: unsupported version");
  MeasurementInstance inst;
  inst.seed = read_pod<std::uint64_t>(in);
  const auto m = static_cast<Eigen::Index>(read_pod<std::uint64_t>(in));
  const auto n = static_cast<Eigen::Index>(read_pod<std::uint64_t>(in));
  inst.eta = read_pod<double>(in);
  inst.A.resize(m, n);
  read_matrix(in, inst.A);
  inst.y.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) inst.y(i) = read_pod<double>(in);
  return inst;
}

Json profile_to_json(const CosparsityProfile& prof) {
  Json j;
  j["S"] = prof.S;
  j["L"] = prof.L;
  j["genS"] = prof.gen_sparsity;
  j["genL"] = prof.gen_cosparsity;
  j["genLbar"] = prof.gen_cosparsity_diag;
  j["support"] = prof.support;
  return j;
}

Json rate_to_json(const RateReport& report) {
  Json j;
  j["M"] = report.M;
  j["simplified"] = report.simplified;
  switch (report.degenerate) {
    case Degeneracy::none: j["degenerate"] = "none"; break;
    case Degeneracy::kernel_member: j["degenerate"] = "kernel_member"; break;
    case Degeneracy::full_support: j["degenerate"] = "full_support"; break;
  }
  if (report.krz) j["krz"] = *report.krz;
  return j;
}

Json estimate_to_json(const StatDimEstimate& est) {
  Json j;
  j["mean"] = est.mean;
  j["std_error"] = est.std_error;
  j["k"] = est.samples;
  j["t"] = est.scale_t;
  j["failures"] = est.failures;
  return j;
}

Json trace_to_json(const GreedyTrace& trace) {
  Json j;
  j["selected_cosupport"] = trace.selected_cosupport;
  j["reached_target"] = trace.reached_target;
  Json iters = Json::array();
  for (const GreedyIteration& rec : trace.per_iteration) {
    Json r;
    r["chosen"] = rec.chosen;
    r["excluded"] = rec.excluded;
    r["S0"] = rec.S0;
    r["residual"] = rec.residual;
    iters.push_back(r);
  }
  j["per_iteration"] = iters;
  j["subspace_dim"] = trace.final_U.dim();
  return j;
}

Json sweep_to_json(const std::vector<CompressPoint>& points) {
  Json arr = Json::array();
  for (const CompressPoint& p : points) {
    Json j;
    j["m"] = p.m;
    j["S_used"] = p.S_used;
    j["feasible"] = p.feasible;
    if (p.feasible) j["approx_error"] = p.approx_error;
    arr.push_back(j);
  }
  return arr;
}

Json grid_to_json(const ExperimentGrid& grid) {
  Json j;
  j["solver_failures"] = grid.solver_failures;
  j["total_solves"] = grid.total_solves;
  j["infeasible_axis"] = grid.infeasible_axis;
  Json records = Json::array();
  for (const ExperimentCell& c : grid.records) {
    Json r;
    r["axis"] = c.axis;
    r["m"] = c.m;
    r["trials"] = c.trials;
    r["successes"] = c.successes;
    r["mean_error"] = c.mean_error;
    r["M_mean"] = c.M_mean;
    r["krz_mean"] = c.krz_mean;
    r["seed_base"] = c.seed_base;
    records.push_back(r);
  }
  j["records"] = records;
  return j;
}

ExperimentGrid grid_from_json(const Json& j) {
  ExperimentGrid grid;
  grid.solver_failures = j.at("solver_failures").get<int>();
  grid.total_solves = j.at("total_solves").get<int>();
  grid.infeasible_axis = j.at("infeasible_axis").get<std::vector<double>>();
  for (const Json& r : j.at("records")) {
    ExperimentCell c;
    c.axis = r.at("axis").get<double>();
    c.m = r.at("m").get<long>();
    c.trials = r.at("trials").get<int>();
    c.successes = r.at("successes").get<int>();
    c.mean_error = r.at("mean_error").get<double>();
    c.M_mean = r.at("M_mean").get<double>();
    c.krz_mean = r.at("krz_mean").get<double>();
    c.seed_base = r.at("seed_base").get<std::uint64_t>();
    grid.records.push_back(c);
  }
  return grid;
}

std::string grid_to_csv(const ExperimentGrid& grid) {
  std::string out = "axis_value,m,trials,successes,mean_error,M_mean,krz_mean,seed_base\n";
  for (const ExperimentCell& c : grid.records) {
    out += fmt_double(c.axis);
    out += ',';
    out += std::to_string(c.m);
    out += ',';
    out += std::to_string(c.trials);
    out += ',';
    out += std::to_string(c.successes);
    out += ',';
    out += fmt_double(c.mean_error);
    out += ',';
    out += fmt_double(c.M_mean);
    out += ',';
    out += fmt_double(c.krz_mean);
    out += ',';
    out += std::to_string(c.seed_base);
    out += '\n';
  }
  return out;
}

void emit_report(const ExperimentGrid& grid, const std::string& format,
                 const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_report: cannot open " + path);
  if (format == "csv") {
    out << grid_to_csv(grid);
  } else if (format == "json") {
    out << grid_to_json(grid).dump(2) << '\n';
  } else {
    throw std::invalid_argument("emit_report: format must be csv or json");
  }
  if (!out) throw std::runtime_error("emit_report: write failed");
}

}  // namespace anabp
