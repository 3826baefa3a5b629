#ifndef DOCANALOGY_WEIGHTING_H_
#define DOCANALOGY_WEIGHTING_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "docanalogy/corpus.h"

namespace docanalogy {

enum class MatrixKind { kCount, kTfidf, kPpmi };

std::string_view KindName(MatrixKind kind);

// N x |V| document-word matrix in CSR form. Rows hold strictly increasing
// word ids and no explicit zeros.
class SparseDocTermMatrix {
 public:
  struct Entry {
    WordId word;
    double weight;
  };

  SparseDocTermMatrix() = default;
  SparseDocTermMatrix(std::size_t n_docs, std::size_t n_words, MatrixKind kind,
                      std::vector<std::size_t> row_offsets,
                      std::vector<Entry> entries);

  // Builds from a dense row-major n_docs x n_words table; zeros are dropped.
  static SparseDocTermMatrix FromDense(std::size_t n_docs, std::size_t n_words,
                                       MatrixKind kind,
                                       std::span<const double> values);

  std::size_t n_docs() const { return n_docs_; }
  std::size_t n_words() const { return n_words_; }
  std::size_t nnz() const { return entries_.size(); }
  MatrixKind kind() const { return kind_; }

  std::span<const Entry> row(std::size_t i) const {
    return {entries_.data() + row_offsets_[i],
            row_offsets_[i + 1] - row_offsets_[i]};
  }

  const std::vector<std::size_t>& row_offsets() const { return row_offsets_; }
  const std::vector<Entry>& entries() const { return entries_; }

  double Sum() const;
  std::vector<double> ToDense() const;

  // Debug export: header "N |V| nnz kind", then "doc word weight" triples.
  void Write(std::ostream& out) const;

 private:
  std::size_t n_docs_ = 0;
  std::size_t n_words_ = 0;
  MatrixKind kind_ = MatrixKind::kCount;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<Entry> entries_;
};

SparseDocTermMatrix CountMatrix(const DocumentCorpus& corpus);

// weight = tf * ln(N / df); entries with df == N vanish.
SparseDocTermMatrix TfidfTransform(const SparseDocTermMatrix& counts);

// weight = max(ln(x T / (row_sum col_sum)) - ln(shift_k), 0); zeros dropped.
SparseDocTermMatrix PpmiTransform(const SparseDocTermMatrix& counts,
                                  double shift_k = 1.0);

}  // namespace docanalogy

#endif  // DOCANALOGY_WEIGHTING_H_
