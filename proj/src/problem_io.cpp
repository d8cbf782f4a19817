#include "kreach/problem_io.hpp"

#include <fstream>
#include <string>

#include "kreach/errors.hpp"
#include "kreach/matrix_market.hpp"

namespace kreach {
namespace {

using nlohmann::json;

const json& require(const json& doc, const char* key) {
  if (!doc.contains(key)) throw InputError(std::string("problem file: missing field '") + key + "'");
  return doc.at(key);
}

double require_number(const json& doc, const char* key) {
  const json& v = require(doc, key);
  if (!v.is_number()) throw InputError(std::string("problem file: '") + key + "' must be a number");
  return v.get<double>();
}

Eigen::MatrixXd dense_rows(const json& rows, const std::string& what) {
  if (!rows.is_array()) throw InputError(what + ": expected an array of rows");
  const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
  Eigen::Index c = -1;
  Eigen::MatrixXd m;
  for (Eigen::Index i = 0; i < r; ++i) {
    const json& row = rows[i];
    if (!row.is_array()) throw InputError(what + ": row " + std::to_string(i) + " is not an array");
    if (c < 0) {
      c = static_cast<Eigen::Index>(row.size());
      m.resize(r, c);
    } else if (static_cast<Eigen::Index>(row.size()) != c) {
      throw InputError(what + ": ragged rows (row " + std::to_string(i) + ")");
    }
    for (Eigen::Index j = 0; j < c; ++j) {
      if (!row[j].is_number()) throw InputError(what + ": non-numeric entry");
      m(i, j) = row[j].get<double>();
    }
  }
  if (r == 0) m.resize(0, 0);
  return m;
}

SparseMatrix matrix_field(const json& v, const std::filesystem::path& base_dir,
                          const std::string& what) {
  if (v.is_string()) {
    const std::filesystem::path p = base_dir / v.get<std::string>();
    if (!std::filesystem::exists(p))
      throw InputError(what + ": referenced matrix file " + p.string() + " does not exist");
    return load_matrix_market(p);
  }
  if (v.is_array()) return SparseMatrix::from_dense(dense_rows(v, what));
  if (v.is_object()) {
    const Index rows = v.at("rows").get<Index>();
    const Index cols = v.at("cols").get<Index>();
    std::vector<Triplet> t;
    for (const auto& e : v.at("entries")) {
      if (!e.is_array() || e.size() != 3) throw InputError(what + ": entries must be [i, j, v]");
      t.push_back({e[0].get<Index>(), e[1].get<Index>(), e[2].get<double>()});
    }
    return SparseMatrix::from_triplets(rows, cols, std::move(t));
  }
  throw InputError(what + ": expected a path, dense rows, or a triplet object");
}

Eigen::MatrixXd dense_field(const json& v, const std::filesystem::path& base_dir,
                            const std::string& what) {
  if (v.is_array()) return dense_rows(v, what);
  return matrix_field(v, base_dir, what).to_dense();
}

LinearConstraintSet constraint_field(const json& v, const std::filesystem::path& base_dir,
                                     const std::string& what) {
  if (!v.is_object()) throw InputError(what + ": expected an object with mat, kinds, rhs");
  LinearConstraintSet set;
  set.matrix = dense_field(require(v, "mat"), base_dir, what + ".mat");
  for (const auto& k : require(v, "kinds")) {
    const std::string s = k.get<std::string>();
    if (s == "le") {
      set.kinds.push_back(ConstraintKind::LessEqual);
    } else if (s == "eq") {
      set.kinds.push_back(ConstraintKind::Equal);
    } else {
      throw InputError(what + ": unknown constraint kind '" + s + "' (use le or eq)");
    }
  }
  const auto rhs = require(v, "rhs").get<std::vector<double>>();
  set.rhs = Eigen::Map<const Eigen::VectorXd>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  set.validate(what.c_str());
  return set;
}

}  // namespace

ProblemSpec parse_problem_spec(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw InputError("problem file: top level must be an object");
  try {
    ProblemSpec spec;
    spec.a_matrix = matrix_field(require(doc, "a_matrix"), base_dir, "a_matrix");
    if (doc.contains("b_vector") && !doc.at("b_vector").is_null())
      spec.b_vector = doc.at("b_vector").get<std::vector<double>>();
    spec.init_space = dense_field(require(doc, "init_space"), base_dir, "init_space");
    spec.init_constraints =
        constraint_field(require(doc, "init_constraints"), base_dir, "init_constraints");
    spec.output_matrix = dense_field(require(doc, "output_matrix"), base_dir, "output_matrix");
    if (doc.contains("unsafe_constraints") && !doc.at("unsafe_constraints").is_null())
      spec.unsafe_constraints =
          constraint_field(doc.at("unsafe_constraints"), base_dir, "unsafe_constraints");
    spec.step = require_number(doc, "step");
    spec.time_bound = require_number(doc, "time_bound");
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("problem file: ") + e.what());
  }
}

VerificationProblem load_problem(const std::filesystem::path& path,
                                 const ValidationOptions& options) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open problem file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return finalize_problem(parse_problem_spec(doc, path.parent_path()), options);
}

json constraints_to_json(const LinearConstraintSet& set) {
  json mat = json::array();
  for (Eigen::Index r = 0; r < set.matrix.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < set.matrix.cols(); ++c) row.push_back(set.matrix(r, c));
    mat.push_back(row);
  }
  json kinds = json::array();
  for (auto k : set.kinds) kinds.push_back(k == ConstraintKind::Equal ? "eq" : "le");
  json rhs = json::array();
  for (Eigen::Index r = 0; r < set.rhs.size(); ++r) rhs.push_back(set.rhs[r]);
  return json{{"mat", mat}, {"kinds", kinds}, {"rhs", rhs}};
}

std::filesystem::path write_problem(const std::filesystem::path& dir,
                                    const VerificationProblem& problem) {
  std::filesystem::create_directories(dir);
  write_matrix_market(dir / "a.mtx", problem.a_matrix);
  write_matrix_market(dir / "e.mtx", SparseMatrix::from_dense(problem.init_space));
  write_matrix_market(dir / "c.mtx", SparseMatrix::from_dense(problem.output_matrix));
  json doc;
  doc["a_matrix"] = "a.mtx";
  doc["init_space"] = "e.mtx";
  doc["output_matrix"] = "c.mtx";
  doc["init_constraints"] = constraints_to_json(problem.init_constraints);
  if (!problem.unsafe_constraints.empty())
    doc["unsafe_constraints"] = constraints_to_json(problem.unsafe_constraints);
  doc["step"] = problem.step;
  doc["time_bound"] = problem.time_bound;
  const auto path = dir / "problem.json";
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  return path;
}

}  // namespace kreach
