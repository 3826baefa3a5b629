#include "docanalogy/weighting.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <utility>

#include "docanalogy/error.h"

namespace docanalogy {
namespace {

void RequireCounts(const SparseDocTermMatrix& x) {
  Require(x.kind() == MatrixKind::kCount, "transform expects a COUNT matrix");
}

}  // namespace

std::string_view KindName(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::kCount: return "COUNT";
    case MatrixKind::kTfidf: return "TFIDF";
    case MatrixKind::kPpmi: return "PPMI";
  }
  return "UNKNOWN";
}

SparseDocTermMatrix::SparseDocTermMatrix(std::size_t n_docs, std::size_t n_words,
                                         MatrixKind kind,
                                         std::vector<std::size_t> row_offsets,
                                         std::vector<Entry> entries)
    : n_docs_(n_docs),
      n_words_(n_words),
      kind_(kind),
      row_offsets_(std::move(row_offsets)),
      entries_(std::move(entries)) {
  Require(row_offsets_.size() == n_docs_ + 1 && row_offsets_.front() == 0 &&
              row_offsets_.back() == entries_.size(),
          "malformed CSR row offsets");
  for (std::size_t i = 0; i < n_docs_; ++i) {
    Require(row_offsets_[i] <= row_offsets_[i + 1], "malformed CSR row offsets");
    for (std::size_t e = row_offsets_[i]; e < row_offsets_[i + 1]; ++e) {
      Require(entries_[e].word < n_words_, "word id out of range");
      Require(entries_[e].weight != 0.0, "explicit zero entry in sparse matrix");
      Require(e == row_offsets_[i] || entries_[e - 1].word < entries_[e].word,
              "word ids must be strictly increasing within a row");
    }
  }
}

SparseDocTermMatrix SparseDocTermMatrix::FromDense(std::size_t n_docs,
                                                   std::size_t n_words,
                                                   MatrixKind kind,
                                                   std::span<const double> values) {
  Require(values.size() == n_docs * n_words, "dense table has wrong size");
  std::vector<std::size_t> offsets{0};
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < n_docs; ++i) {
    for (std::size_t j = 0; j < n_words; ++j) {
      const double v = values[i * n_words + j];
      if (v != 0.0) entries.push_back({static_cast<WordId>(j), v});
    }
    offsets.push_back(entries.size());
  }
  return SparseDocTermMatrix(n_docs, n_words, kind, std::move(offsets),
                             std::move(entries));
}

double SparseDocTermMatrix::Sum() const {
  double sum = 0.0;
  for (const Entry& e : entries_) sum += e.weight;
  return sum;
}

std::vector<double> SparseDocTermMatrix::ToDense() const {
  std::vector<double> dense(n_docs_ * n_words_, 0.0);
  for (std::size_t i = 0; i < n_docs_; ++i) {
    for (const Entry& e : row(i)) dense[i * n_words_ + e.word] = e.weight;
  }
  return dense;
}

void SparseDocTermMatrix::Write(std::ostream& out) const {
  out << n_docs_ << ' ' << n_words_ << ' ' << nnz() << ' ' << KindName(kind_)
      << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < n_docs_; ++i) {
    for (const Entry& e : row(i)) {
      out << i << ' ' << e.word << ' ' << e.weight << '\n';
    }
  }
}

SparseDocTermMatrix CountMatrix(const DocumentCorpus& corpus) {
  std::vector<std::size_t> offsets{0};
  std::vector<SparseDocTermMatrix::Entry> entries;
  std::vector<WordId> sorted;
  for (const EncodedDocument& doc : corpus.docs()) {
    sorted = doc.tokens;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t p = 0; p < sorted.size();) {
      std::size_t q = p;
      while (q < sorted.size() && sorted[q] == sorted[p]) ++q;
      entries.push_back({sorted[p], static_cast<double>(q - p)});
      p = q;
    }
    offsets.push_back(entries.size());
  }
  return SparseDocTermMatrix(corpus.size(), corpus.vocab_size(),
                             MatrixKind::kCount, std::move(offsets),
                             std::move(entries));
}

SparseDocTermMatrix TfidfTransform(const SparseDocTermMatrix& counts) {
  RequireCounts(counts);
  const std::size_t n = counts.n_docs();
  std::vector<std::size_t> df(counts.n_words(), 0);
  for (const auto& e : counts.entries()) ++df[e.word];

  std::vector<double> idf(counts.n_words(), 0.0);
  for (std::size_t j = 0; j < idf.size(); ++j) {
    if (df[j] > 0) {
      idf[j] = std::log(static_cast<double>(n) / static_cast<double>(df[j]));
    }
  }

  std::vector<std::size_t> offsets{0};
  std::vector<SparseDocTermMatrix::Entry> entries;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& e : counts.row(i)) {
      const double w = e.weight * idf[e.word];
      if (w > 0.0) entries.push_back({e.word, w});
    }
    offsets.push_back(entries.size());
  }
  return SparseDocTermMatrix(n, counts.n_words(), MatrixKind::kTfidf,
                             std::move(offsets), std::move(entries));
}

SparseDocTermMatrix PpmiTransform(const SparseDocTermMatrix& counts,
                                  double shift_k) {
  RequireCounts(counts);
  Require(shift_k >= 1.0 && !std::isnan(shift_k), "shift_k must be >= 1");
  const double total = counts.Sum();
  if (total <= 0.0) {
    Fail(ErrorCategory::kData, "PPMI of an all-zero count matrix is undefined");
  }

  std::vector<double> row_sums(counts.n_docs(), 0.0);
  std::vector<double> col_sums(counts.n_words(), 0.0);
  for (std::size_t i = 0; i < counts.n_docs(); ++i) {
    for (const auto& e : counts.row(i)) {
      row_sums[i] += e.weight;
      col_sums[e.word] += e.weight;
    }
  }

  const double log_shift = std::log(shift_k);
  std::vector<std::size_t> offsets{0};
  std::vector<SparseDocTermMatrix::Entry> entries;
  for (std::size_t i = 0; i < counts.n_docs(); ++i) {
    for (const auto& e : counts.row(i)) {
      const double pmi =
          std::log(e.weight * total / (row_sums[i] * col_sums[e.word]));
      const double w = pmi - log_shift;
      if (w > 0.0) entries.push_back({e.word, w});
    }
    offsets.push_back(entries.size());
  }
  return SparseDocTermMatrix(counts.n_docs(), counts.n_words(), MatrixKind::kPpmi,
                             std::move(offsets), std::move(entries));
}

}  // namespace docanalogy
