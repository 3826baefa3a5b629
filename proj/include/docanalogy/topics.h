#ifndef DOCANALOGY_TOPICS_H_
#define DOCANALOGY_TOPICS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "docanalogy/dense_vectors.h"
#include "docanalogy/weighting.h"

namespace docanalogy {

struct LdaOptions {
  std::size_t topics = 100;
  std::optional<double> alpha;  // defaults to 50 / topics
  double beta = 0.01;
  std::size_t iterations = 200;
  std::uint64_t seed = 1;
};

// Collapsed Gibbs sampler over the token-topic assignments of a COUNT matrix.
// Tokens of a document are laid out word by word in column order.
class LdaSampler {
 public:
  LdaSampler(const SparseDocTermMatrix& counts, std::size_t topics, double alpha,
             double beta, std::uint64_t seed);

  // One pass over every token.
  void Sweep();

  // (n_dt + alpha) / (len_d + k alpha), one row per document.
  DenseVectorSet Theta() const;

  // Recomputes both count tables from the assignments and compares.
  bool CountsConsistent() const;

  std::size_t topics() const { return topics_; }
  std::size_t tokens() const { return words_.size(); }
  std::uint64_t doc_topic_total() const;
  std::uint64_t topic_word_total() const;

 private:
  std::size_t topics_;
  std::size_t n_docs_;
  std::size_t n_words_;
  double alpha_;
  double beta_;
  std::mt19937_64 rng_;

  std::vector<std::size_t> doc_offsets_;  // token range per document
  std::vector<WordId> words_;
  std::vector<std::uint32_t> assignments_;
  std::vector<std::uint32_t> doc_topic_;   // N x k
  std::vector<std::uint32_t> topic_word_;  // k x |V|
  std::vector<std::uint32_t> topic_totals_;
  std::vector<double> weights_;
};

DenseVectorSet LdaFit(const SparseDocTermMatrix& counts,
                      const LdaOptions& options = {});

}  // namespace docanalogy

#endif  // DOCANALOGY_TOPICS_H_
