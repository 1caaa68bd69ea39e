#include "obsolve/textio.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "obsolve/errors.hpp"

namespace obsolve::io {

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string_view> tokens;
};

std::vector<std::string_view> split(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\t' && text[j] != '\r') ++j;
    if (j > i) out.push_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

[[noreturn]] void parse_error(const std::string& source, std::size_t line,
                              const std::string& what) {
  std::ostringstream os;
  os << source << ":" << line << ": " << what;
  throw Error(ErrorCode::Parse, os.str());
}

double parse_number(std::string_view token, const std::string& source,
                    std::size_t line, std::size_t column) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = token.data() + token.size();
  if (!token.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    std::ostringstream os;
    os << "column " << column << ": '" << token << "' is not a number";
    parse_error(source, line, os.str());
  }
  if (!std::isfinite(value)) {
    std::ostringstream os;
    os << "column " << column << ": value '" << token << "' is not finite";
    parse_error(source, line, os.str());
  }
  return value;
}

std::size_t parse_dimension(std::string_view token, const std::string& source,
                            std::size_t line) {
  std::size_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || value == 0)
    parse_error(source, line,
                "header dimensions must be positive integers, got '" +
                    std::string(token) + "'");
  return value;
}

}  // namespace

std::vector<Matrix> read_matrices(std::istream& in, const std::string& source) {
  std::vector<std::string> storage;
  std::vector<Line> lines;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    storage.push_back(raw);
  }
  for (std::size_t i = 0; i < storage.size(); ++i) {
    auto tokens = split(storage[i]);
    if (!tokens.empty()) lines.push_back({i + 1, std::move(tokens)});
  }

  std::vector<Matrix> blocks;
  std::size_t at = 0;
  while (at < lines.size()) {
    const Line& header = lines[at++];
    if (header.tokens.size() != 2)
      parse_error(source, header.number,
                  "expected a header line 'rows cols'");
    const std::size_t rows = parse_dimension(header.tokens[0], source, header.number);
    const std::size_t cols = parse_dimension(header.tokens[1], source, header.number);
    std::vector<double> data;
    data.reserve(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
      if (at >= lines.size()) {
        std::ostringstream os;
        os << "block declared " << rows << " rows but the input ends after "
           << r;
        parse_error(source, number, os.str());
      }
      const Line& row = lines[at++];
      if (row.tokens.size() != cols) {
        std::ostringstream os;
        os << "expected " << cols << " values, found " << row.tokens.size();
        parse_error(source, row.number, os.str());
      }
      for (std::size_t c = 0; c < cols; ++c)
        data.push_back(parse_number(row.tokens[c], source, row.number, c + 1));
    }
    blocks.emplace_back(rows, cols, std::move(data));
  }
  return blocks;
}

std::vector<Matrix> read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  return read_matrices(in, path);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_matrix(std::ostream& out, const Matrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
}

void write_matrix_file(const std::string& path,
                       const std::vector<Matrix>& blocks) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  for (const Matrix& m : blocks) write_matrix(out, m);
  if (!out) throw Error(ErrorCode::Io, "failed writing '" + path + "'");
}

Vec as_vector(const Matrix& m, const std::string& what) {
  if (m.cols() != 1 && m.rows() != 1) {
    std::ostringstream os;
    os << what << ": expected a vector, got a " << m.rows() << "x" << m.cols()
       << " block";
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  return Vec(std::vector<double>(m.data().begin(), m.data().end()));
}

std::vector<Vec> as_sequence(const Matrix& m) {
  std::vector<Vec> out;
  out.reserve(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    out.emplace_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
  return out;
}

Matrix from_sequence(const std::vector<Vec>& seq) {
  if (seq.empty()) throw Error(ErrorCode::InvalidArgument, "empty sequence");
  std::vector<double> data;
  for (const Vec& v : seq) {
    if (v.dim() != seq.front().dim())
      throw Error(ErrorCode::DimensionMismatch, "ragged sequence");
    data.insert(data.end(), v.values().begin(), v.values().end());
  }
  return Matrix(seq.size(), seq.front().dim(), std::move(data));
}

}  // namespace obsolve::io
