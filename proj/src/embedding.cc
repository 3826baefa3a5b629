#include "docanalogy/embedding.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "docanalogy/error.h"

namespace docanalogy {
namespace {

// Parameter matrices are shared between workers without locks. Relaxed atomic
// access keeps concurrent element reads and writes well defined; it compiles
// to plain loads and stores.
inline double Load(double* p) {
  return std::atomic_ref<double>(*p).load(std::memory_order_relaxed);
}
inline void Store(double* p, double v) {
  std::atomic_ref<double>(*p).store(v, std::memory_order_relaxed);
}

double Sigmoid(double f) {
  if (f >= 0.0) return 1.0 / (1.0 + std::exp(-f));
  const double e = std::exp(f);
  return e / (1.0 + e);
}

// log(1 + exp(x)) without overflow.
double Softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

constexpr std::uint64_t kSyncInterval = 1024;

}  // namespace

void EmbeddingParams::Validate() const {
  Require(dim >= 1, "embedding dim must be at least 1");
  Require(window >= 1, "window must be at least 1");
  Require(initial_lr > 0.0 && initial_lr <= 1.0,
          "initial learning rate must lie in (0, 1]");
  Require(epochs >= 1, "epochs must be at least 1");
  Require(unigram_power >= 0.0, "unigram power must be non-negative");
  Require(subsample >= 0.0, "subsample threshold must be non-negative");
  Require(workers >= 1, "workers must be at least 1");
}

double LearningRateAt(std::uint64_t words_processed, std::uint64_t total_words,
                      double initial_lr) {
  if (total_words == 0) return initial_lr;
  const double progress =
      static_cast<double>(words_processed) / static_cast<double>(total_words);
  return initial_lr * std::max(1.0 - progress, 1e-4);
}

NegativeSampler::NegativeSampler(std::span<const std::uint64_t> freqs,
                                 double power) {
  Require(!freqs.empty(), "negative sampler needs a non-empty vocabulary");
  Require(power >= 0.0, "unigram power must be non-negative");
  cumulative_.reserve(freqs.size());
  double total = 0.0;
  for (std::uint64_t f : freqs) {
    total += std::pow(static_cast<double>(f), power);
    cumulative_.push_back(total);
  }
  Require(total > 0.0, "negative sampler needs positive frequencies");
}

WordId NegativeSampler::Sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> uniform(0.0, cumulative_.back());
  const double u = uniform(rng);
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return static_cast<WordId>(it - cumulative_.begin());
}

WordId NegativeSampler::SampleExcluding(WordId target, std::mt19937_64& rng) const {
  if (Probability(target) >= 1.0) {
    Fail(ErrorCategory::kParameter,
         "no valid negative sample: every other word has zero probability");
  }
  WordId w = Sample(rng);
  while (w == target) w = Sample(rng);
  return w;
}

double NegativeSampler::Probability(WordId word) const {
  const double lower = word == 0 ? 0.0 : cumulative_[word - 1];
  return (cumulative_[word] - lower) / cumulative_.back();
}

double NegativeSamplingObjective(std::span<const double> hidden,
                                 std::span<const SampleTarget> targets,
                                 const DenseVectorSet& output) {
  double objective = 0.0;
  for (const SampleTarget& s : targets) {
    const double f = Dot(output.row(s.word), hidden);
    objective -= s.label * Softplus(-f) + (1.0 - s.label) * Softplus(f);
  }
  return objective;
}

NegativeSamplingGradient NegativeSamplingGradientAt(
    std::span<const double> hidden, std::span<const SampleTarget> targets,
    const DenseVectorSet& output) {
  NegativeSamplingGradient grad;
  grad.wrt_hidden.assign(hidden.size(), 0.0);
  for (const SampleTarget& s : targets) {
    const auto u = output.row(s.word);
    const double g = s.label - Sigmoid(Dot(u, hidden));
    std::vector<double> wrt_u(hidden.size());
    for (std::size_t d = 0; d < hidden.size(); ++d) {
      grad.wrt_hidden[d] += g * u[d];
      wrt_u[d] = g * hidden[d];
    }
    grad.wrt_outputs.push_back(std::move(wrt_u));
  }
  return grad;
}

void NegativeSamplingStep(std::span<double* const> input_rows,
                          std::span<const SampleTarget> targets,
                          DenseVectorSet& output, double lr,
                          std::span<double> scratch) {
  const std::size_t dim = output.dim();
  if (input_rows.empty()) return;
  std::span<double> hidden = scratch.subspan(0, dim);
  std::span<double> accum = scratch.subspan(dim, dim);

  std::fill(hidden.begin(), hidden.end(), 0.0);
  std::fill(accum.begin(), accum.end(), 0.0);
  for (double* row : input_rows) {
    for (std::size_t d = 0; d < dim; ++d) hidden[d] += Load(row + d);
  }
  const double inv = 1.0 / static_cast<double>(input_rows.size());
  for (double& v : hidden) v *= inv;

  for (const SampleTarget& s : targets) {
    double* u = output.row(s.word).data();
    double f = 0.0;
    for (std::size_t d = 0; d < dim; ++d) f += Load(u + d) * hidden[d];
    if (!std::isfinite(f)) {
      Fail(ErrorCategory::kNumeric,
           "non-finite activation during training; learning rate too high");
    }
    const double step = lr * (s.label - Sigmoid(f));
    for (std::size_t d = 0; d < dim; ++d) {
      const double ud = Load(u + d);
      accum[d] += step * ud;
      Store(u + d, ud + step * hidden[d]);
    }
  }

  for (double* row : input_rows) {
    for (std::size_t d = 0; d < dim; ++d) Store(row + d, Load(row + d) + accum[d]);
  }
}

EmbeddingModel::EmbeddingModel(Architecture arch, const DocumentCorpus& corpus,
                               const Vocabulary& vocab, std::size_t dim,
                               std::uint64_t seed)
    : arch_(arch) {
  Require(dim >= 1, "embedding dim must be at least 1");
  Require(corpus.vocab_size() == vocab.size(),
          "corpus was encoded with a different vocabulary");
  std::mt19937_64 rng(seed);
  const double half = 0.5 / static_cast<double>(dim);
  std::uniform_real_distribution<double> uniform(-half, half);
  if (arch != Architecture::kPvDbow) {
    words_ = DenseVectorSet(vocab.tokens(), dim);
    for (double& v : words_.data()) v = uniform(rng);
  }
  if (arch != Architecture::kCbow) {
    docs_ = DenseVectorSet(corpus.titles(), dim);
    for (double& v : docs_.data()) v = uniform(rng);
  }
  output_ = DenseVectorSet(vocab.tokens(), dim);
}

void EmbeddingModel::InputRows(const EncodedDocument& doc, std::size_t pos,
                               std::size_t span, std::vector<double*>* rows) {
  rows->clear();
  if (arch_ == Architecture::kPvDbow) {
    rows->push_back(docs_.row(doc.id).data());
    return;
  }
  const std::size_t begin = pos >= span ? pos - span : 0;
  const std::size_t end = std::min(doc.tokens.size(), pos + span + 1);
  for (std::size_t q = begin; q < end; ++q) {
    if (q != pos) rows->push_back(words_.row(doc.tokens[q]).data());
  }
  if (arch_ == Architecture::kPvDm) rows->push_back(docs_.row(doc.id).data());
}

namespace {

struct SharedProgress {
  std::atomic<std::uint64_t> processed{0};
  std::uint64_t total = 0;
  std::chrono::steady_clock::time_point start;
  std::mutex error_mutex;
  std::exception_ptr error;
  std::atomic<bool> stop{false};
};

void RunWorker(std::size_t worker, std::size_t doc_begin, std::size_t doc_end,
               EmbeddingModel& model, const DocumentCorpus& corpus,
               const Vocabulary& vocab, const NegativeSampler& sampler,
               const EmbeddingParams& params, SharedProgress& progress) {
  std::seed_seq seq{params.seed, static_cast<std::uint64_t>(worker),
                    std::uint64_t{0x5eed}};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> span_pick(1, params.window);

  const double sample_scale =
      params.subsample * static_cast<double>(corpus.total_tokens());
  std::vector<double> scratch(2 * params.dim);
  std::vector<double*> rows;
  std::vector<SampleTarget> targets;
  EncodedDocument kept;

  std::uint64_t snapshot = progress.processed.load(std::memory_order_relaxed);
  std::uint64_t pending = 0;
  auto sync = [&] {
    snapshot = progress.processed.fetch_add(pending, std::memory_order_relaxed) +
               pending;
    pending = 0;
    if (params.verbose && worker == 0) {
      const double secs = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - progress.start)
                              .count();
      std::fprintf(stderr, "\rlr %.6f  progress %5.1f%%  words/sec %.0f",
                   LearningRateAt(snapshot, progress.total, params.initial_lr),
                   100.0 * static_cast<double>(snapshot) /
                       static_cast<double>(progress.total),
                   secs > 0.0 ? static_cast<double>(snapshot) / secs : 0.0);
    }
  };

  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    for (std::size_t d = doc_begin; d < doc_end; ++d) {
      if (progress.stop.load(std::memory_order_relaxed)) return;
      const EncodedDocument& doc = corpus.doc(static_cast<DocId>(d));
      const EncodedDocument* view = &doc;
      if (params.subsample > 0.0) {
        kept.id = doc.id;
        kept.tokens.clear();
        for (WordId w : doc.tokens) {
          const double f = static_cast<double>(vocab.freq(w));
          const double keep = (std::sqrt(f / sample_scale) + 1.0) * sample_scale / f;
          if (keep >= coin(rng)) kept.tokens.push_back(w);
        }
        view = &kept;
      }

      for (std::size_t pos = 0; pos < view->tokens.size(); ++pos) {
        const double lr = LearningRateAt(snapshot + pending, progress.total,
                                         params.initial_lr);
        const std::size_t span = span_pick(rng);
        model.InputRows(*view, pos, span, &rows);
        if (rows.empty()) continue;
        const WordId center = view->tokens[pos];
        targets.clear();
        targets.push_back({center, 1.0});
        for (std::size_t n = 0; n < params.negatives; ++n) {
          targets.push_back({sampler.SampleExcluding(center, rng), 0.0});
        }
        NegativeSamplingStep(rows, targets, model.output_vectors(), lr, scratch);
      }
      // Discarded tokens still advance the schedule.
      pending += doc.tokens.size();
      if (pending >= kSyncInterval) sync();
    }
  }
  sync();
}

}  // namespace

void TrainModel(EmbeddingModel& model, const DocumentCorpus& corpus,
                const Vocabulary& vocab, const EmbeddingParams& params) {
  params.Validate();
  Require(model.output_vectors().dim() == params.dim,
          "model dimension does not match parameters");
  if (corpus.total_tokens() == 0) {
    Fail(ErrorCategory::kData, "cannot train embeddings on an empty corpus");
  }
  const NegativeSampler sampler(vocab.freqs(), params.unigram_power);

  SharedProgress progress;
  progress.total = params.epochs * corpus.total_tokens();
  progress.start = std::chrono::steady_clock::now();

  const std::size_t workers = std::min(params.workers, std::max<std::size_t>(corpus.size(), 1));
  if (workers == 1) {
    RunWorker(0, 0, corpus.size(), model, corpus, vocab, sampler, params, progress);
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = corpus.size() * w / workers;
      const std::size_t end = corpus.size() * (w + 1) / workers;
      threads.emplace_back([&, w, begin, end] {
        try {
          RunWorker(w, begin, end, model, corpus, vocab, sampler, params, progress);
        } catch (...) {
          std::lock_guard lock(progress.error_mutex);
          if (!progress.error) progress.error = std::current_exception();
          progress.stop = true;
        }
      });
    }
    threads.clear();
    if (progress.error) std::rethrow_exception(progress.error);
  }
  if (params.verbose) std::fprintf(stderr, "\n");
}

DenseVectorSet TrainCbow(const DocumentCorpus& corpus, const Vocabulary& vocab,
                         const EmbeddingParams& params) {
  params.Validate();
  EmbeddingModel model(Architecture::kCbow, corpus, vocab, params.dim, params.seed);
  TrainModel(model, corpus, vocab, params);
  return std::move(model.word_vectors());
}

PvDmVectors TrainPvDm(const DocumentCorpus& corpus, const Vocabulary& vocab,
                      const EmbeddingParams& params) {
  params.Validate();
  EmbeddingModel model(Architecture::kPvDm, corpus, vocab, params.dim, params.seed);
  TrainModel(model, corpus, vocab, params);
  return {std::move(model.doc_vectors()), std::move(model.word_vectors())};
}

DenseVectorSet TrainPvDbow(const DocumentCorpus& corpus, const Vocabulary& vocab,
                           const EmbeddingParams& params) {
  params.Validate();
  EmbeddingModel model(Architecture::kPvDbow, corpus, vocab, params.dim, params.seed);
  TrainModel(model, corpus, vocab, params);
  return std::move(model.doc_vectors());
}

}  // namespace docanalogy
