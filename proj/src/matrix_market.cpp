#include "cdkit/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "cdkit/errors.hpp"
#include "cdkit/format.hpp"

namespace cdkit {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool is_blank_or_comment(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '%';
}

/// Reads the next non-comment line; returns false at end of input.
bool next_data_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!is_blank_or_comment(line)) return true;
  }
  return false;
}

double parse_value(std::istringstream& ss, std::size_t line_no) {
  std::string tok;
  if (!(ss >> tok)) throw ParseError("missing value", line_no);
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw ParseError("malformed value '" + tok + "'", line_no);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("malformed value '" + tok + "'", line_no);
  }
}

void require_line_end(std::istringstream& ss, std::size_t line_no) {
  std::string extra;
  if (ss >> extra) throw ParseError("unexpected trailing token '" + extra + "'", line_no);
}

}  // namespace

SymmetricOperator read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_matrix_market(in);
}

SymmetricOperator read_matrix_market(std::istream& in) {
  std::size_t line_no = 0;
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty file", 1);
  ++line_no;

  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") throw ParseError("missing %%MatrixMarket banner", line_no);
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix") throw ParseError("object must be 'matrix'", line_no);
  if (format != "coordinate" && format != "array") {
    throw ParseError("format must be 'coordinate' or 'array'", line_no);
  }
  if (field != "real") throw ParseError("field must be 'real'", line_no);
  if (symmetry != "symmetric") {
    throw ParseError("structure '" + symmetry + "' is not 'symmetric'", line_no);
  }

  if (!next_data_line(in, line, line_no)) throw ParseError("missing size line", line_no + 1);
  std::istringstream size_line(line);
  long long rows = 0, cols = 0, nnz = 0;
  if (!(size_line >> rows >> cols)) throw ParseError("malformed size line", line_no);
  if (format == "coordinate" && !(size_line >> nnz)) {
    throw ParseError("coordinate size line needs rows cols nnz", line_no);
  }
  require_line_end(size_line, line_no);
  if (rows <= 0 || rows != cols) throw ParseError("matrix must be square and non-empty", line_no);
  const auto n = static_cast<std::size_t>(rows);

  if (format == "array") {
    // Column-major lower triangle.
    std::vector<double> full(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = j; i < n; ++i) {
        if (!next_data_line(in, line, line_no)) {
          throw ParseError("array data ends early", line_no + 1);
        }
        std::istringstream ss(line);
        const double v = parse_value(ss, line_no);
        require_line_end(ss, line_no);
        full[i * n + j] = v;
        full[j * n + i] = v;
      }
    }
    return SymmetricOperator::dense(n, full);
  }

  if (nnz < 0) throw ParseError("negative entry count", line_no);
  std::vector<SymmetricOperator::Triplet> entries;
  entries.reserve(static_cast<std::size_t>(nnz));
  std::unordered_map<unsigned long long, std::size_t> seen;
  for (long long k = 0; k < nnz; ++k) {
    if (!next_data_line(in, line, line_no)) {
      throw ParseError("expected " + std::to_string(nnz) + " entries, found " +
                           std::to_string(k),
                       line_no + 1);
    }
    std::istringstream ss(line);
    long long i = 0, j = 0;
    if (!(ss >> i >> j)) throw ParseError("malformed entry", line_no);
    if (i < 1 || j < 1 || i > rows || j > rows) {
      throw ParseError("index (" + std::to_string(i) + ", " + std::to_string(j) +
                           ") out of range",
                       line_no);
    }
    const double v = parse_value(ss, line_no);
    require_line_end(ss, line_no);
    auto r = static_cast<std::size_t>(i - 1);
    auto c = static_cast<std::size_t>(j - 1);
    if (c < r) std::swap(r, c);
    const auto key = static_cast<unsigned long long>(r) * n + c;
    if (auto [it, fresh] = seen.emplace(key, line_no); !fresh) {
      throw ParseError("position (" + std::to_string(i) + ", " + std::to_string(j) +
                           ") already given on line " + std::to_string(it->second),
                       line_no);
    }
    entries.push_back({r, c, v});
  }
  if (next_data_line(in, line, line_no)) {
    throw ParseError("more entries than declared", line_no);
  }
  return SymmetricOperator::sparse(n, std::move(entries));
}

void write_matrix_market(const SymmetricOperator& A,
                         const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_matrix_market(A, out);
  if (!out) throw Error("write failed for " + path.string());
}

void write_matrix_market(const SymmetricOperator& A, std::ostream& out) {
  const std::size_t n = A.dim();
  if (A.kind() == SymmetricOperator::Kind::kDense) {
    out << "%%MatrixMarket matrix array real symmetric\n";
    out << n << ' ' << n << '\n';
    // Column-major lower triangle == row-major upper triangle.
    A.for_each_upper([&](std::size_t, std::size_t, double v) {
      out << format_double(v) << '\n';
    });
    return;
  }
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << n << ' ' << n << ' ' << A.stored_entries() << '\n';
  A.for_each_upper([&](std::size_t i, std::size_t j, double v) {
    out << (i + 1) << ' ' << (j + 1) << ' ' << format_double(v) << '\n';
  });
}

}  // namespace cdkit
