#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "ugrid/types.hpp"

namespace ugrid {

// How per-cell category counts n_i(c) (rows) and m_j(c) (cols) combine into
// co-occurrence mass:
//   PairProduct: n_i(c) * m_j(c)   -- random event pair lands in the same cell
//   MinCount:    min(n_i(c), m_j(c))
//   Presence:    1 if both are nonzero
enum class CooccurrenceMode : std::uint8_t { PairProduct, MinCount, Presence };

std::string_view to_string(CooccurrenceMode m);

// Cross-category co-occurrence mass accumulated over grid cells, with the
// row side drawn from one source channel and the column side from another.
struct ContingencyTable {
  std::vector<CategoryId> row_labels;
  std::vector<CategoryId> col_labels;
  std::vector<double> weights;  // row-major [row][col], non-negative
  double total = 0.0;
  CooccurrenceMode mode = CooccurrenceMode::PairProduct;

  std::size_t n_rows() const { return row_labels.size(); }
  std::size_t n_cols() const { return col_labels.size(); }
  double at(std::size_t i, std::size_t j) const { return weights[i * n_cols() + j]; }

  std::vector<double> row_marginals() const;  // each summed in ascending column order
  std::vector<double> col_marginals() const;  // each summed in ascending row order
  ContingencyTable transposed() const;
};

ContingencyTable cooccurrence_table(const EventDataset& dataset, SourceChannel row_source,
                                    SourceChannel col_source, CooccurrenceMode mode);

// Natural-log entropy of a probability vector (0*log 0 counts as 0).
// Throws std::invalid_argument unless entries are >= 0 and sum to 1 +- 1e-9.
double entropy(std::span<const double> probabilities);

// MI in nats from cell probabilities P(i,j) = w_ij / N. Zero cells contribute
// nothing. Terms are summed in value order, which makes the result exactly
// invariant under transposition. Throws DataError on a zero-total table.
double mutual_information(const ContingencyTable& table);

// The equivalent set-cardinality formulation,
// sum (w_ij/N) * log(N*w_ij / (row_i * col_j)); kept as an independent
// algebraic route for cross-checking.
double mutual_information_set_form(const ContingencyTable& table);

// MI / sqrt(H(U) H(V)), in [0, 1]. A degenerate marginal (H = 0) yields 0.
double normalized_mutual_information(const ContingencyTable& table);

// Per-pair NMI heatmap: entry (i, j) is the NMI of the 2x2 table that splits
// row mass into {i, not-i} and column mass into {j, not-j}, accumulated over
// cells under `mode`.
struct RelevanceMatrix {
  std::vector<CategoryId> rows;
  std::vector<CategoryId> cols;
  std::vector<double> scores;  // row-major, in [0, 1]
  CooccurrenceMode mode = CooccurrenceMode::PairProduct;
  std::vector<std::uint8_t> row_degenerate;  // category never co-occurs at all
  std::vector<std::uint8_t> col_degenerate;

  double at(std::size_t i, std::size_t j) const { return scores[i * cols.size() + j]; }
};

RelevanceMatrix relevance_matrix(const EventDataset& dataset, SourceChannel row_source,
                                 SourceChannel col_source, CooccurrenceMode mode,
                                 int threads = 1);

}  // namespace ugrid
