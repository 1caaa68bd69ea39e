#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "obsolve/lalg.hpp"

// Plain-text matrix files. A file is a sequence of blocks; each block is a
// header line "rows cols" followed by `rows` lines of `cols`
// whitespace-separated numbers. '#' starts a comment that runs to the end of
// the line, and blank lines are ignored. Vectors are single-column blocks.
namespace obsolve::io {

std::vector<Matrix> read_matrices(std::istream& in,
                                  const std::string& source = "<input>");
std::vector<Matrix> read_matrix_file(const std::string& path);

/// Shortest round-trip form: 17 significant digits.
std::string format_double(double v);

void write_matrix(std::ostream& out, const Matrix& m);
void write_matrix_file(const std::string& path, const std::vector<Matrix>& blocks);

/// Single-column (or single-row) block as a vector.
Vec as_vector(const Matrix& m, const std::string& what);
/// Rows of an N x d block as N vectors of dimension d.
std::vector<Vec> as_sequence(const Matrix& m);
Matrix from_sequence(const std::vector<Vec>& seq);

}  // namespace obsolve::io
