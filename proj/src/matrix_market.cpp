#include "vmo/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace vmo {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

bool parse_double(const std::string& tok, double& out) {
  const char* b = tok.data();
  const char* e = b + tok.size();
  auto [p, ec] = std::from_chars(b, e, out);
  if (ec == std::errc() && p == e) return true;
  // from_chars in libstdc++ handles inf/nan and exponents; fall back for
  // Fortran-style exponents like 1.0D+01.
  std::string fixed = tok;
  for (char& c : fixed)
    if (c == 'D' || c == 'd') c = 'e';
  char* end = nullptr;
  out = std::strtod(fixed.c_str(), &end);
  return end == fixed.c_str() + fixed.size() && !fixed.empty();
}

bool parse_index(const std::string& tok, Index& out) {
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && p == tok.data() + tok.size();
}

// Formats a double with shortest round-trip representation.
std::string format_double(double v) {
  char buf[64];
  int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  double back = 0.0;
  for (int prec = 1; prec <= 16; ++prec) {
    int k = std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    std::from_chars(buf, buf + k, back);
    if (back == v) return std::string(buf, static_cast<std::size_t>(k));
  }
  n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

}  // namespace

SparseMatrix parse_matrix_market(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;

  if (!std::getline(in, line)) throw ParseError(1, "empty input");
  ++lineno;
  auto header = split_ws(lower(line));
  if (header.size() < 4 || header[0] != "%%matrixmarket" || header[1] != "matrix")
    throw ParseError(lineno, "expected MatrixMarket header");
  const std::string& format = header[2];
  if (format == "array") throw ParseError(lineno, "array (dense) format not supported");
  if (format != "coordinate") throw ParseError(lineno, "unknown format '" + format + "'");
  const std::string& field = header[3];
  if (field == "complex" || field == "hermitian")
    throw ParseError(lineno, "complex fields not supported");
  if (field != "real" && field != "integer" && field != "pattern")
    throw ParseError(lineno, "unknown field '" + field + "'");
  std::string symmetry = header.size() > 4 ? header[4] : "general";
  if (symmetry == "hermitian" || symmetry == "skew-symmetric")
    throw ParseError(lineno, "symmetry '" + symmetry + "' not supported");
  if (symmetry != "general" && symmetry != "symmetric")
    throw ParseError(lineno, "unknown symmetry '" + symmetry + "'");
  const bool pattern = field == "pattern";
  const bool symmetric = symmetry == "symmetric";

  // comments, then the size line
  Index nrows = 0, ncols = 0, nnz = 0;
  for (;;) {
    if (!std::getline(in, line)) throw ParseError(lineno + 1, "missing size line");
    ++lineno;
    if (!line.empty() && line[0] == '%') continue;
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks.size() != 3 || !parse_index(toks[0], nrows) || !parse_index(toks[1], ncols) ||
        !parse_index(toks[2], nnz))
      throw ParseError(lineno, "expected 'rows cols nnz' size line");
    if (nrows < 0 || ncols < 0 || nnz < 0) throw ParseError(lineno, "negative size");
    break;
  }
  if (symmetric && nrows != ncols) throw ParseError(lineno, "symmetric matrix must be square");

  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(symmetric ? 2 * nnz : nnz));
  Index seen = 0;
  while (seen < nnz) {
    if (!std::getline(in, line)) throw ParseError(lineno + 1, "unexpected end of entries");
    ++lineno;
    if (!line.empty() && line[0] == '%') continue;
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    const std::size_t want = pattern ? 2 : 3;
    if (toks.size() != want) throw ParseError(lineno, "expected " + std::to_string(want) + " tokens");
    Index i = 0, j = 0;
    double v = 1.0;
    if (!parse_index(toks[0], i) || !parse_index(toks[1], j))
      throw ParseError(lineno, "bad entry index");
    if (!pattern && !parse_double(toks[2], v)) throw ParseError(lineno, "bad entry value");
    if (i < 1 || i > nrows || j < 1 || j > ncols)
      throw ParseError(lineno, "entry index out of range");
    entries.push_back({i - 1, j - 1, v});
    if (symmetric && i != j) entries.push_back({j - 1, i - 1, v});
    ++seen;
  }
  return SparseMatrix::from_triplets(nrows, ncols, std::move(entries));
}

SparseMatrix parse_matrix_market(const std::string& text) {
  std::istringstream ss(text);
  return parse_matrix_market(ss);
}

SparseMatrix read_matrix_market_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError(0, "cannot open '" + path + "'");
  return parse_matrix_market(f);
}

std::string write_matrix_market(const SparseMatrix& m) {
  std::string out = "%%MatrixMarket matrix coordinate real general\n";
  out += std::to_string(m.nrows()) + " " + std::to_string(m.ncols()) + " " +
         std::to_string(m.nnz()) + "\n";
  for (const Triplet& t : m.entries())
    out += std::to_string(t.row + 1) + " " + std::to_string(t.col + 1) + " " +
           format_double(t.value) + "\n";
  return out;
}

PointSet parse_coords(std::istream& in, Index expected_count) {
  PointSet pts;
  std::string line;
  std::size_t lineno = 0;
  int dim = 0;
  std::vector<double> p;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    p.clear();
    for (const std::string& tok : toks) {
      double v = 0.0;
      if (!parse_double(tok, v)) throw ParseError(lineno, "bad coordinate '" + tok + "'");
      p.push_back(v);
    }
    if (dim == 0)
      dim = static_cast<int>(p.size());
    else if (static_cast<int>(p.size()) != dim)
      throw ParseError(lineno, "ragged row: expected " + std::to_string(dim) + " columns");
    pts.append(p);
  }
  if (pts.size() != expected_count)
    throw ParseError(lineno, "expected " + std::to_string(expected_count) + " points, got " +
                                 std::to_string(pts.size()));
  return pts;
}

PointSet parse_coords(const std::string& text, Index expected_count) {
  std::istringstream ss(text);
  return parse_coords(ss, expected_count);
}

std::string write_permutation(const std::vector<Index>& perm) {
  std::string out;
  for (Index v : perm) out += std::to_string(v) + "\n";
  return out;
}

std::vector<Index> parse_permutation(std::istream& in) {
  std::vector<Index> perm;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    Index v = 0;
    if (toks.size() != 1 || !parse_index(toks[0], v))
      throw ParseError(lineno, "expected one index per line");
    perm.push_back(v);
  }
  if (!is_permutation_vector(perm)) throw ParseError(lineno, "not a permutation of 0..n-1");
  return perm;
}

std::vector<Index> parse_permutation(const std::string& text) {
  std::istringstream ss(text);
  return parse_permutation(ss);
}

std::string write_block_report(const std::vector<BlockReportRow>& rows, Index nrows, Index ncols,
                               const std::string& form) {
  std::string out = "# vmo-blocks rows=" + std::to_string(nrows) + " cols=" +
                    std::to_string(ncols) + " form=" + form + "\n";
  for (const BlockReportRow& r : rows) {
    out.append(static_cast<std::size_t>(2 * r.level), ' ');
    out += std::to_string(r.level) + " " + std::to_string(r.row_begin) + ":" +
           std::to_string(r.row_end) + " " + std::to_string(r.col_begin) + ":" +
           std::to_string(r.col_end) + " " + std::to_string(r.sep_rows) + " " +
           std::to_string(r.sep_cols) + "\n";
  }
  return out;
}

namespace {
bool parse_range(const std::string& tok, Index& b, Index& e) {
  auto colon = tok.find(':');
  if (colon == std::string::npos) return false;
  return parse_index(tok.substr(0, colon), b) && parse_index(tok.substr(colon + 1), e);
}
}  // namespace

std::vector<BlockReportRow> parse_block_report(std::istream& in) {
  std::vector<BlockReportRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = split_ws(line);
    if (toks.empty() || toks[0][0] == '#') continue;
    if (toks.size() != 5) throw ParseError(lineno, "expected 5 fields per block row");
    BlockReportRow r;
    Index level = 0;
    if (!parse_index(toks[0], level) || !parse_range(toks[1], r.row_begin, r.row_end) ||
        !parse_range(toks[2], r.col_begin, r.col_end) || !parse_index(toks[3], r.sep_rows) ||
        !parse_index(toks[4], r.sep_cols))
      throw ParseError(lineno, "malformed block row");
    r.level = static_cast<int>(level);
    rows.push_back(r);
  }
  return rows;
}

std::vector<BlockReportRow> parse_block_report(const std::string& text) {
  std::istringstream ss(text);
  return parse_block_report(ss);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError(0, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << text;
}

}  // namespace vmo
