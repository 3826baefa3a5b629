#include "docanalogy/topics.h"

#include <numeric>

#include "docanalogy/error.h"

namespace docanalogy {

LdaSampler::LdaSampler(const SparseDocTermMatrix& counts, std::size_t topics,
                       double alpha, double beta, std::uint64_t seed)
    : topics_(topics),
      n_docs_(counts.n_docs()),
      n_words_(counts.n_words()),
      alpha_(alpha),
      beta_(beta),
      rng_(seed) {
  Require(counts.kind() == MatrixKind::kCount, "LDA expects a COUNT matrix");
  Require(topics >= 1, "LDA needs at least one topic");
  Require(alpha > 0.0 && beta > 0.0, "LDA alpha and beta must be positive");

  doc_offsets_.push_back(0);
  for (std::size_t i = 0; i < n_docs_; ++i) {
    for (const auto& e : counts.row(i)) {
      words_.insert(words_.end(), static_cast<std::size_t>(e.weight), e.word);
    }
    doc_offsets_.push_back(words_.size());
  }

  doc_topic_.assign(n_docs_ * topics_, 0);
  topic_word_.assign(topics_ * n_words_, 0);
  topic_totals_.assign(topics_, 0);
  weights_.resize(topics_);
  assignments_.resize(words_.size());

  std::uniform_int_distribution<std::uint32_t> pick(
      0, static_cast<std::uint32_t>(topics_ - 1));
  for (std::size_t d = 0; d < n_docs_; ++d) {
    for (std::size_t p = doc_offsets_[d]; p < doc_offsets_[d + 1]; ++p) {
      const std::uint32_t t = pick(rng_);
      assignments_[p] = t;
      ++doc_topic_[d * topics_ + t];
      ++topic_word_[t * n_words_ + words_[p]];
      ++topic_totals_[t];
    }
  }
}

void LdaSampler::Sweep() {
  const double vocab_beta = static_cast<double>(n_words_) * beta_;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (std::size_t d = 0; d < n_docs_; ++d) {
    std::uint32_t* dt = &doc_topic_[d * topics_];
    for (std::size_t p = doc_offsets_[d]; p < doc_offsets_[d + 1]; ++p) {
      const WordId w = words_[p];
      std::uint32_t t = assignments_[p];
      --dt[t];
      --topic_word_[t * n_words_ + w];
      --topic_totals_[t];

      double total = 0.0;
      for (std::size_t s = 0; s < topics_; ++s) {
        total += (dt[s] + alpha_) * (topic_word_[s * n_words_ + w] + beta_) /
                 (topic_totals_[s] + vocab_beta);
        weights_[s] = total;
      }
      const double u = uniform(rng_) * total;
      t = 0;
      while (t + 1 < topics_ && weights_[t] <= u) ++t;

      assignments_[p] = t;
      ++dt[t];
      ++topic_word_[t * n_words_ + w];
      ++topic_totals_[t];
    }
  }
}

DenseVectorSet LdaSampler::Theta() const {
  DenseVectorSet theta(IndexLabels(n_docs_), topics_);
  const double k_alpha = static_cast<double>(topics_) * alpha_;
  for (std::size_t d = 0; d < n_docs_; ++d) {
    const double len = static_cast<double>(doc_offsets_[d + 1] - doc_offsets_[d]);
    for (std::size_t t = 0; t < topics_; ++t) {
      theta.at(d, t) = (doc_topic_[d * topics_ + t] + alpha_) / (len + k_alpha);
    }
  }
  return theta;
}

bool LdaSampler::CountsConsistent() const {
  std::vector<std::uint32_t> dt(doc_topic_.size(), 0);
  std::vector<std::uint32_t> tw(topic_word_.size(), 0);
  std::vector<std::uint32_t> totals(topics_, 0);
  for (std::size_t d = 0; d < n_docs_; ++d) {
    for (std::size_t p = doc_offsets_[d]; p < doc_offsets_[d + 1]; ++p) {
      const std::uint32_t t = assignments_[p];
      if (t >= topics_) return false;
      ++dt[d * topics_ + t];
      ++tw[t * n_words_ + words_[p]];
      ++totals[t];
    }
  }
  return dt == doc_topic_ && tw == topic_word_ && totals == topic_totals_;
}

std::uint64_t LdaSampler::doc_topic_total() const {
  return std::accumulate(doc_topic_.begin(), doc_topic_.end(), std::uint64_t{0});
}

std::uint64_t LdaSampler::topic_word_total() const {
  return std::accumulate(topic_word_.begin(), topic_word_.end(), std::uint64_t{0});
}

DenseVectorSet LdaFit(const SparseDocTermMatrix& counts,
                      const LdaOptions& options) {
  Require(options.topics >= 1, "LDA needs at least one topic");
  Require(options.iterations >= 1, "LDA needs at least one iteration");
  const double alpha =
      options.alpha.value_or(50.0 / static_cast<double>(options.topics));
  LdaSampler sampler(counts, options.topics, alpha, options.beta, options.seed);
  for (std::size_t it = 0; it < options.iterations; ++it) sampler.Sweep();
  return sampler.Theta();
}

}  // namespace docanalogy
