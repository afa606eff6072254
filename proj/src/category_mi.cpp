#include "ugrid/category_mi.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "ugrid/parallel.hpp"

namespace ugrid {

std::string_view to_string(CooccurrenceMode m) {
  switch (m) {
    case CooccurrenceMode::PairProduct: return "product";
    case CooccurrenceMode::MinCount: return "min";
    case CooccurrenceMode::Presence: return "presence";
  }
  return "product";
}

std::vector<double> ContingencyTable::row_marginals() const {
  std::vector<double> m(n_rows(), 0.0);
  for (std::size_t i = 0; i < n_rows(); ++i)
    for (std::size_t j = 0; j < n_cols(); ++j) m[i] += at(i, j);
  return m;
}

std::vector<double> ContingencyTable::col_marginals() const {
  std::vector<double> m(n_cols(), 0.0);
  for (std::size_t j = 0; j < n_cols(); ++j)
    for (std::size_t i = 0; i < n_rows(); ++i) m[j] += at(i, j);
  return m;
}

ContingencyTable ContingencyTable::transposed() const {
  ContingencyTable t;
  t.row_labels = col_labels;
  t.col_labels = row_labels;
  t.total = total;
  t.mode = mode;
  t.weights.resize(weights.size());
  for (std::size_t i = 0; i < n_rows(); ++i)
    for (std::size_t j = 0; j < n_cols(); ++j) t.weights[j * n_rows() + i] = at(i, j);
  return t;
}

namespace {

// Per-cell category counts for one source channel, as dense rows over the
// sorted label list of that channel.
struct SideCounts {
  std::vector<CategoryId> labels;
  std::vector<std::uint32_t> counts;  // [cell][label]
  std::vector<std::uint64_t> cell_totals;
  std::size_t n_labels = 0;

  std::uint32_t at(std::size_t cell, std::size_t label) const {
    return counts[cell * n_labels + label];
  }
};

SideCounts side_counts(const EventDataset& ds, SourceChannel source) {
  SideCounts s;
  std::map<std::string_view, std::size_t> index;
  for (const EventRecord& r : ds.records)
    if (r.source == source) index.emplace(r.category, 0);
  s.labels.reserve(index.size());
  for (auto& [name, idx] : index) {
    idx = s.labels.size();
    s.labels.emplace_back(name);
  }
  s.n_labels = s.labels.size();
  s.counts.assign(ds.cells.size() * s.n_labels, 0);
  s.cell_totals.assign(ds.cells.size(), 0);

  std::unordered_map<std::string_view, std::size_t> cell_of;
  cell_of.reserve(ds.cells.size() * 2);
  for (std::size_t i = 0; i < ds.cells.size(); ++i) cell_of.emplace(ds.cells[i].cell_id, i);

  for (const EventRecord& r : ds.records) {
    if (r.source != source) continue;
    const std::size_t c = cell_of.at(r.cell_id);
    ++s.counts[c * s.n_labels + index.at(r.category)];
    ++s.cell_totals[c];
  }
  return s;
}

double combine(CooccurrenceMode mode, std::uint64_t n, std::uint64_t m) {
  switch (mode) {
    case CooccurrenceMode::PairProduct: return static_cast<double>(n) * static_cast<double>(m);
    case CooccurrenceMode::MinCount: return static_cast<double>(std::min(n, m));
    case CooccurrenceMode::Presence: return (n > 0 && m > 0) ? 1.0 : 0.0;
  }
  return 0.0;
}

// Transpose-invariant sum: sorting by value makes the accumulation order a
// function of the multiset of terms only.
double sorted_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

double table_total_sorted(const ContingencyTable& t) {
  std::vector<double> w;
  w.reserve(t.weights.size());
  for (double v : t.weights)
    if (v != 0.0) w.push_back(v);
  return sorted_sum(w);
}

double entropy_of_counts(const std::vector<double>& counts, double n) {
  double h = 0.0;
  for (double c : counts) {
    if (c <= 0.0) continue;
    const double p = c / n;
    h -= p * std::log(p);
  }
  return h;
}

double nmi_2x2(double a, double b, double c, double d) {
  const double n = a + b + c + d;
  if (n <= 0.0) return 0.0;
  const double r0 = a + b, r1 = c + d, c0 = a + c, c1 = b + d;
  const double hu = entropy_of_counts({r0, r1}, n);
  const double hv = entropy_of_counts({c0, c1}, n);
  if (hu <= 0.0 || hv <= 0.0) return 0.0;
  double mi = 0.0;
  const double cells[4][3] = {{a, r0, c0}, {b, r0, c1}, {c, r1, c0}, {d, r1, c1}};
  for (const auto& e : cells) {
    if (e[0] <= 0.0) continue;
    mi += (e[0] / n) * std::log(n * e[0] / (e[1] * e[2]));
  }
  return mi / std::sqrt(hu * hv);
}

}  // namespace

ContingencyTable cooccurrence_table(const EventDataset& dataset, SourceChannel row_source,
                                    SourceChannel col_source, CooccurrenceMode mode) {
  const SideCounts rows = side_counts(dataset, row_source);
  const SideCounts cols = side_counts(dataset, col_source);
  if (rows.n_labels == 0)
    throw DataError(std::string("cooccurrence_table: no events from source '") +
                    std::string(to_string(row_source)) + "'");
  if (cols.n_labels == 0)
    throw DataError(std::string("cooccurrence_table: no events from source '") +
                    std::string(to_string(col_source)) + "'");

  ContingencyTable t;
  t.row_labels = rows.labels;
  t.col_labels = cols.labels;
  t.mode = mode;
  t.weights.assign(rows.n_labels * cols.n_labels, 0.0);

  for (std::size_t c = 0; c < dataset.cells.size(); ++c) {
    if (rows.cell_totals[c] == 0 || cols.cell_totals[c] == 0) continue;
    for (std::size_t i = 0; i < rows.n_labels; ++i) {
      const std::uint32_t n = rows.at(c, i);
      if (n == 0) continue;
      for (std::size_t j = 0; j < cols.n_labels; ++j) {
        const std::uint32_t m = cols.at(c, j);
        if (m == 0) continue;
        t.weights[i * cols.n_labels + j] += combine(mode, n, m);
      }
    }
  }
  for (double w : t.weights) t.total += w;
  return t;
}

double entropy(std::span<const double> probabilities) {
  double sum = 0.0;
  for (double p : probabilities) {
    if (p < 0.0) throw std::invalid_argument("entropy: negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("entropy: probabilities must sum to 1");
  double h = 0.0;
  for (double p : probabilities)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

double mutual_information(const ContingencyTable& table) {
  const double n = table_total_sorted(table);
  if (!(n > 0.0)) throw DataError("mutual_information: table has zero total mass");
  const std::vector<double> rm = table.row_marginals();
  const std::vector<double> cm = table.col_marginals();

  std::vector<double> terms;
  terms.reserve(table.weights.size());
  for (std::size_t i = 0; i < table.n_rows(); ++i) {
    for (std::size_t j = 0; j < table.n_cols(); ++j) {
      const double w = table.at(i, j);
      if (w <= 0.0) continue;
      const double pij = w / n;
      terms.push_back(pij * std::log(pij / ((rm[i] / n) * (cm[j] / n))));
    }
  }
  return sorted_sum(terms);
}

double mutual_information_set_form(const ContingencyTable& table) {
  const double n = table_total_sorted(table);
  if (!(n > 0.0)) throw DataError("mutual_information: table has zero total mass");
  const std::vector<double> rm = table.row_marginals();
  const std::vector<double> cm = table.col_marginals();

  std::vector<double> terms;
  terms.reserve(table.weights.size());
  for (std::size_t i = 0; i < table.n_rows(); ++i) {
    for (std::size_t j = 0; j < table.n_cols(); ++j) {
      const double w = table.at(i, j);
      if (w <= 0.0) continue;
      terms.push_back((w / n) * std::log(n * w / (rm[i] * cm[j])));
    }
  }
  return sorted_sum(terms);
}

double normalized_mutual_information(const ContingencyTable& table) {
  const double n = table_total_sorted(table);
  if (!(n > 0.0)) throw DataError("normalized_mutual_information: table has zero total mass");
  const double hu = entropy_of_counts(table.row_marginals(), n);
  const double hv = entropy_of_counts(table.col_marginals(), n);
  if (hu <= 0.0 || hv <= 0.0) return 0.0;
  return mutual_information(table) / std::sqrt(hu * hv);
}

RelevanceMatrix relevance_matrix(const EventDataset& dataset, SourceChannel row_source,
                                 SourceChannel col_source, CooccurrenceMode mode, int threads) {
  const SideCounts rows = side_counts(dataset, row_source);
  const SideCounts cols = side_counts(dataset, col_source);
  if (rows.n_labels == 0 || cols.n_labels == 0)
    throw DataError("relevance_matrix: both source channels must have events");

  RelevanceMatrix m;
  m.rows = rows.labels;
  m.cols = cols.labels;
  m.mode = mode;
  m.scores.assign(rows.n_labels * cols.n_labels, 0.0);
  m.row_degenerate.assign(rows.n_labels, 1);
  m.col_degenerate.assign(cols.n_labels, 1);

  const std::size_t n_cells = dataset.cells.size();
  std::vector<std::size_t> active;
  active.reserve(n_cells);
  for (std::size_t c = 0; c < n_cells; ++c)
    if (rows.cell_totals[c] > 0 && cols.cell_totals[c] > 0) active.push_back(c);

  // A category that never lands in a cell shared with the other channel has a
  // zero row/column of co-occurrence mass under every mode.
  for (std::size_t c : active) {
    for (std::size_t i = 0; i < rows.n_labels; ++i)
      if (rows.at(c, i) > 0) m.row_degenerate[i] = 0;
    for (std::size_t j = 0; j < cols.n_labels; ++j)
      if (cols.at(c, j) > 0) m.col_degenerate[j] = 0;
  }

  parallel_for(rows.n_labels, threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < cols.n_labels; ++j) {
      double a = 0, b = 0, cc = 0, dd = 0;
      for (std::size_t c : active) {
        const std::uint64_t ni = rows.at(c, i);
        const std::uint64_t nrest = rows.cell_totals[c] - ni;
        const std::uint64_t mj = cols.at(c, j);
        const std::uint64_t mrest = cols.cell_totals[c] - mj;
        a += combine(mode, ni, mj);
        b += combine(mode, ni, mrest);
        cc += combine(mode, nrest, mj);
        dd += combine(mode, nrest, mrest);
      }
      m.scores[i * cols.n_labels + j] = nmi_2x2(a, b, cc, dd);
    }
  });
  return m;
}

}  // namespace ugrid
