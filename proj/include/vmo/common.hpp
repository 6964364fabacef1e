#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace vmo {

using Index = std::int64_t;

/// Thrown by the file parsers; carries the 1-based line of the offending input.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("parse error at line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

class RepresentationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The bipartite pattern admits no perfect matching.
class StructuralSingularError : public std::runtime_error {
public:
  StructuralSingularError(std::vector<Index> unmatched_rows, std::vector<Index> unmatched_cols)
      : std::runtime_error("structurally singular matrix: " +
                           std::to_string(unmatched_rows.size()) + " unmatched rows"),
        unmatched_rows_(std::move(unmatched_rows)),
        unmatched_cols_(std::move(unmatched_cols)) {}
  Index deficiency() const { return static_cast<Index>(unmatched_rows_.size()); }
  const std::vector<Index>& unmatched_rows() const { return unmatched_rows_; }
  const std::vector<Index>& unmatched_cols() const { return unmatched_cols_; }

private:
  std::vector<Index> unmatched_rows_;
  std::vector<Index> unmatched_cols_;
};

/// No admissible pivot inside the current diagonal block.
class SingularBlockError : public std::runtime_error {
public:
  SingularBlockError(Index block_begin, Index block_end, Index column)
      : std::runtime_error("singular block [" + std::to_string(block_begin) + "," +
                           std::to_string(block_end) + "): no pivot in column " +
                           std::to_string(column)),
        block_begin_(block_begin), block_end_(block_end), column_(column) {}
  Index block_begin() const { return block_begin_; }
  Index block_end() const { return block_end_; }
  Index column() const { return column_; }

private:
  Index block_begin_, block_end_, column_;
};

class DegenerateSplitError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Deterministic RNG helpers. Distributions from <random> are implementation
// defined, so all sampling goes through the engine output directly.
inline double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline Index uniform_index(std::mt19937_64& eng, Index n) {
  return static_cast<Index>(eng() % static_cast<std::uint64_t>(n));
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ splitmix64(b));
}

/// perm[i] = source index placed at position i.
bool is_permutation_vector(const std::vector<Index>& perm);

/// inv[perm[i]] = i.
std::vector<Index> invert_permutation(const std::vector<Index>& perm);

}  // namespace vmo
