#include "kreach/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "kreach/errors.hpp"

namespace kreach {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void parse_error(const std::string& source, std::size_t line, const std::string& msg) {
  throw InputError(source + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

SparseMatrix read_matrix_market(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) parse_error(source, 1, "empty file");
  ++line_no;
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket") parse_error(source, line_no, "missing %%MatrixMarket banner");
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix") parse_error(source, line_no, "only 'matrix' objects are supported");
  if (format != "coordinate") parse_error(source, line_no, "only coordinate format is supported");
  if (field != "real" && field != "integer" && field != "double")
    parse_error(source, line_no, "field must be real or integer, got '" + field + "'");
  const bool symmetric = symmetry == "symmetric";
  if (!symmetric && symmetry != "general")
    parse_error(source, line_no, "symmetry must be general or symmetric, got '" + symmetry + "'");

  // Skip comments up to the size line.
  Index rows = -1, cols = -1, declared = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream size_line(line);
    if (!(size_line >> rows >> cols >> declared) || rows < 0 || cols < 0 || declared < 0)
      parse_error(source, line_no, "malformed size line");
    break;
  }
  if (rows < 0) parse_error(source, line_no, "missing size line");
  if (symmetric && rows != cols) parse_error(source, line_no, "symmetric matrix must be square");

  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(symmetric ? 2 * declared : declared));
  Index seen = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '%') continue;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); }))
      continue;
    std::istringstream entry(line);
    Index i, j;
    double v;
    if (!(entry >> i >> j >> v)) parse_error(source, line_no, "malformed entry");
    if (++seen > declared)
      parse_error(source, line_no, "more entries than the declared " + std::to_string(declared));
    if (i < 1 || i > rows || j < 1 || j > cols)
      parse_error(source, line_no,
                  "index (" + std::to_string(i) + ", " + std::to_string(j) +
                      ") outside declared dimensions " + std::to_string(rows) + "x" +
                      std::to_string(cols));
    triplets.push_back({i - 1, j - 1, v});
    if (symmetric && i != j) triplets.push_back({j - 1, i - 1, v});
  }
  if (seen != declared)
    parse_error(source, line_no,
                "expected " + std::to_string(declared) + " entries, found " + std::to_string(seen));
  return SparseMatrix::from_triplets(rows, cols, std::move(triplets));
}

SparseMatrix load_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open MatrixMarket file " + path.string());
  return read_matrix_market(in, path.string());
}

void write_matrix_market(std::ostream& out, const SparseMatrix& a) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  out << std::setprecision(17);
  for (const auto& t : a.triplets()) out << t.row + 1 << ' ' << t.col + 1 << ' ' << t.value << '\n';
}

void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& a) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write MatrixMarket file " + path.string());
  write_matrix_market(out, a);
}

}  // namespace kreach
