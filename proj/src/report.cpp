#include "c2e/report.hpp"

#include <cmath>

#include "c2e/errors.hpp"

namespace c2e {

namespace {

template <class T>
void read(const nlohmann::json& j, const char* key, T& dst) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("config field '") + key + "': " + e.what());
  }
}

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

}  // namespace

RunConfig merge_config(RunConfig c, const nlohmann::json& j) {
  if (!j.is_object()) throw StructuralError("config must be a JSON object");
  static const char* keys[] = {"suite", "chart", "points", "trials", "order", "tol", "seed", "serial", "out"};
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw StructuralError("unknown config field '" + k + "'");
  }
  read(j, "suite", c.suite);
  read(j, "chart", c.chart);
  read(j, "points", c.points);
  read(j, "trials", c.trials);
  read(j, "order", c.order);
  read(j, "tol", c.tol);
  read(j, "seed", c.seed);
  read(j, "serial", c.serial);
  read(j, "out", c.out);
  return c;
}

nlohmann::json to_json(const RunConfig& c) {
  return {{"suite", c.suite}, {"chart", c.chart}, {"points", c.points}, {"trials", c.trials},
          {"order", c.order}, {"tol", c.tol},     {"seed", c.seed}};
}

nlohmann::json report_json(const VerificationReport& rep, const RunConfig& cfg, double seconds) {
  nlohmann::json ids = nlohmann::json::array();
  std::size_t failed = 0, skipped = 0;
  for (const auto& r : rep.results) {
    if (!r.pass) ++failed;
    if (!r.applicable) ++skipped;
    nlohmann::json row{{"name", r.name},
                       {"relation", r.relation},
                       {"applicable", r.applicable},
                       {"max_residual", number(r.max_residual)},
                       {"tol", r.tol},
                       {"pass", r.pass}};
    if (r.applicable && r.worst_point < rep.points.size()) {
      row["worst_point"] = r.worst_point;
      row["worst_coordinates"] = rep.points[r.worst_point];
    }
    if (!r.note.empty()) row["note"] = r.note;
    ids.push_back(std::move(row));
  }
  return {{"schema", kReportSchema},
          {"command", "verify"},
          {"config", to_json(cfg)},
          {"suite", rep.suite},
          {"seed", rep.seed},
          {"points", rep.points},
          {"identities", ids},
          {"summary",
           {{"identities", rep.results.size()},
            {"failed", failed},
            {"not_applicable", skipped},
            {"max_residual", number(rep.max_residual())},
            {"pass", rep.all_pass()}}},
          {"timing", {{"seconds", seconds}, {"execution", cfg.serial ? "serial" : "parallel"}}}};
}

std::string report_body(const nlohmann::json& report) {
  nlohmann::json j = report;
  j.erase("timing");
  return j.dump(2);
}

}  // namespace c2e
