#pragma once

#include <filesystem>
#include <iosfwd>

#include "kreach/sparse_matrix.hpp"

namespace kreach {

/// Reads a MatrixMarket coordinate file (real or integer; general or
/// symmetric). Symmetric storage is expanded to full storage and duplicate
/// entries are summed. Parse errors carry the offending line number.
SparseMatrix load_matrix_market(const std::filesystem::path& path);
SparseMatrix read_matrix_market(std::istream& in, const std::string& source_name = "<stream>");

/// Writes a general real coordinate file with 17 significant digits, which
/// round-trips doubles exactly.
void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& a);
void write_matrix_market(std::ostream& out, const SparseMatrix& a);

}  // namespace kreach
