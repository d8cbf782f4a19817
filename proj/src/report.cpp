#include "kreach/report.hpp"

#include <fstream>
#include <iomanip>
#include <limits>

#include "kreach/errors.hpp"

namespace kreach {
namespace {

nlohmann::json to_array(const Eigen::VectorXd& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

nlohmann::json verdict_to_json(const Verdict& verdict,
                               const std::optional<std::filesystem::path>& witness_x0_path) {
  nlohmann::json doc;
  doc["status"] = verdict.status == VerdictStatus::Safe ? "safe" : "unsafe";
  doc["strategy"] = to_string(verdict.strategy);
  doc["direction"] = to_string(verdict.direction);
  if (verdict.status == VerdictStatus::Unsafe) {
    doc["step"] = verdict.step;
    doc["time"] = verdict.time;
    doc["witness_z0"] = to_array(verdict.witness_z0);
    if (witness_x0_path)
      doc["witness_x0_path"] = witness_x0_path->string();
    else
      doc["witness_x0"] = to_array(verdict.witness_x0);
    doc["outputs"] = to_array(verdict.outputs);
    if (verdict.validation_rel_error) {
      doc["validation_rel_error"] = *verdict.validation_rel_error;
      doc["tolerance_violation"] = verdict.tolerance_violation;
    }
  }
  if (verdict.krylov)
    doc["krylov"] = {{"k", verdict.krylov->first}, {"bound", verdict.krylov->second}};
  return doc;
}

void write_vector(const std::filesystem::path& path, const Eigen::VectorXd& v) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < v.size(); ++i) out << v[i] << '\n';
}

void write_bounds_csv(std::ostream& out, const std::vector<StepBounds>& bounds) {
  const auto precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "step,time,min,max\n";
  for (const StepBounds& b : bounds)
    out << b.step << ',' << b.time << ',' << b.min << ',' << b.max << '\n';
  out.precision(precision);
}

nlohmann::json bounds_to_json(const std::vector<StepBounds>& bounds) {
  nlohmann::json a = nlohmann::json::array();
  for (const StepBounds& b : bounds)
    a.push_back({{"step", b.step}, {"time", b.time}, {"min", b.min}, {"max", b.max}});
  return a;
}

}  // namespace kreach
