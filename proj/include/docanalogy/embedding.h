#ifndef DOCANALOGY_EMBEDDING_H_
#define DOCANALOGY_EMBEDDING_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "docanalogy/corpus.h"
#include "docanalogy/dense_vectors.h"

namespace docanalogy {

struct EmbeddingParams {
  std::size_t dim = 100;
  std::size_t window = 10;
  std::size_t negatives = 10;
  double initial_lr = 0.05;
  std::size_t epochs = 5;
  double unigram_power = 0.75;
  // Frequent-word subsampling threshold; 0 disables it.
  double subsample = 0.0;
  std::uint64_t seed = 1;
  // 1 worker is bit-reproducible. More workers update the shared matrices
  // without locks.
  std::size_t workers = 1;
  bool verbose = false;

  static EmbeddingParams Cbow() { return {}; }
  static EmbeddingParams PvDm() { return {}; }
  static EmbeddingParams PvDbow() {
    EmbeddingParams p;
    p.initial_lr = 0.025;
    return p;
  }

  void Validate() const;
};

// initial_lr * max(1 - processed / total, 1e-4)
double LearningRateAt(std::uint64_t words_processed, std::uint64_t total_words,
                      double initial_lr);

// Draws word ids with probability proportional to freq^power.
class NegativeSampler {
 public:
  NegativeSampler(std::span<const std::uint64_t> freqs, double power);

  WordId Sample(std::mt19937_64& rng) const;
  // Resamples until the draw differs from `target`. Fails when no other word
  // has positive probability.
  WordId SampleExcluding(WordId target, std::mt19937_64& rng) const;
  double Probability(WordId word) const;
  std::size_t size() const { return cumulative_.size(); }

 private:
  std::vector<double> cumulative_;
};

struct SampleTarget {
  WordId word;
  double label;  // 1 for the observed word, 0 for noise
};

// Gradient of  sum_s [label_s log sig(u_s.h) + (1 - label_s) log sig(-u_s.h)]
// with respect to h and to each target's output row.
struct NegativeSamplingGradient {
  std::vector<double> wrt_hidden;
  std::vector<std::vector<double>> wrt_outputs;  // one per target, same order
};

double NegativeSamplingObjective(std::span<const double> hidden,
                                 std::span<const SampleTarget> targets,
                                 const DenseVectorSet& output);

NegativeSamplingGradient NegativeSamplingGradientAt(
    std::span<const double> hidden, std::span<const SampleTarget> targets,
    const DenseVectorSet& output);

// One SGD ascent step. h is the mean of `input_rows`; each output row moves by
// lr * g * h and every input row receives lr * sum_s g_s u_s, with u_s taken
// before its own update. Throws kNumeric on a non-finite activation.
// `scratch` must hold 2 * dim doubles.
void NegativeSamplingStep(std::span<double* const> input_rows,
                          std::span<const SampleTarget> targets,
                          DenseVectorSet& output, double lr,
                          std::span<double> scratch);

enum class Architecture { kCbow, kPvDm, kPvDbow };

// Parameter matrices for one of the three architectures. Input word vectors
// are absent for PV-DBOW; document vectors are absent for CBOW.
class EmbeddingModel {
 public:
  EmbeddingModel(Architecture arch, const DocumentCorpus& corpus,
                 const Vocabulary& vocab, std::size_t dim, std::uint64_t seed);

  Architecture architecture() const { return arch_; }
  DenseVectorSet& word_vectors() { return words_; }
  DenseVectorSet& doc_vectors() { return docs_; }
  DenseVectorSet& output_vectors() { return output_; }
  const DenseVectorSet& word_vectors() const { return words_; }
  const DenseVectorSet& doc_vectors() const { return docs_; }
  const DenseVectorSet& output_vectors() const { return output_; }

  // Rows averaged into h when predicting position `pos` of `doc` with an
  // effective half-window `span`. Empty when there is nothing to predict from.
  void InputRows(const EncodedDocument& doc, std::size_t pos, std::size_t span,
                 std::vector<double*>* rows);

 private:
  Architecture arch_;
  DenseVectorSet words_;
  DenseVectorSet docs_;
  DenseVectorSet output_;
};

// Runs SGD over the corpus in place on `model`.
void TrainModel(EmbeddingModel& model, const DocumentCorpus& corpus,
                const Vocabulary& vocab, const EmbeddingParams& params);

DenseVectorSet TrainCbow(const DocumentCorpus& corpus, const Vocabulary& vocab,
                         const EmbeddingParams& params);

struct PvDmVectors {
  DenseVectorSet doc_vectors;
  DenseVectorSet word_vectors;
};
PvDmVectors TrainPvDm(const DocumentCorpus& corpus, const Vocabulary& vocab,
                      const EmbeddingParams& params);

DenseVectorSet TrainPvDbow(const DocumentCorpus& corpus, const Vocabulary& vocab,
                           const EmbeddingParams& params);

}  // namespace docanalogy

#endif  // DOCANALOGY_EMBEDDING_H_
