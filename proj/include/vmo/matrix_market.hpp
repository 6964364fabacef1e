#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vmo/pointset.hpp"
#include "vmo/sparse_matrix.hpp"

namespace vmo {

/// Matrix Market "coordinate" parser. Accepts field real/integer/pattern and
/// symmetry general/symmetric; symmetric storage is expanded, pattern entries
/// get value 1.0, duplicates are summed.
SparseMatrix parse_matrix_market(std::istream& in);
SparseMatrix parse_matrix_market(const std::string& text);
SparseMatrix read_matrix_market_file(const std::string& path);

/// Coordinate real general, 1-based indices.
std::string write_matrix_market(const SparseMatrix& m);

/// Whitespace-separated reals, one vertex per line; the dimension is inferred
/// from the first line and must be constant.
PointSet parse_coords(std::istream& in, Index expected_count);
PointSet parse_coords(const std::string& text, Index expected_count);

/// One line per position: the 0-based source index placed there.
std::string write_permutation(const std::vector<Index>& perm);
std::vector<Index> parse_permutation(std::istream& in);
std::vector<Index> parse_permutation(const std::string& text);

/// One node of the block-structure report; ranges are half-open positions in
/// the permuted matrix.
struct BlockReportRow {
  int level = 0;
  Index row_begin = 0, row_end = 0;
  Index col_begin = 0, col_end = 0;
  Index sep_rows = 0, sep_cols = 0;
};

std::string write_block_report(const std::vector<BlockReportRow>& rows, Index nrows, Index ncols,
                               const std::string& form);
std::vector<BlockReportRow> parse_block_report(std::istream& in);
std::vector<BlockReportRow> parse_block_report(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace vmo
