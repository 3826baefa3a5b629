#ifndef DOCANALOGY_PIPELINE_H_
#define DOCANALOGY_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "docanalogy/analogy.h"
#include "docanalogy/corpus.h"

namespace docanalogy {

// Files written by `preprocess` into its output directory.
inline constexpr std::string_view kVocabFile = "vocab.tsv";
inline constexpr std::string_view kEncodedCorpusFile = "corpus.tsv";
inline constexpr std::string_view kManifestFile = "manifest.json";

struct PreprocessOptions {
  std::string corpus_path;
  std::string output_dir;
  std::size_t min_count = Vocabulary::kDefaultMinCount;
};

struct PreprocessSummary {
  std::size_t n_docs = 0;
  std::size_t vocab_size = 0;
  std::uint64_t total_tokens = 0;
  std::string corpus_checksum;
};

PreprocessSummary RunPreprocess(const PreprocessOptions& options);

struct Artifacts {
  Vocabulary vocab;
  DocumentCorpus corpus;
  std::string corpus_checksum;
};

// Loads and cross-checks vocab, encoded corpus and manifest.
Artifacts LoadArtifacts(const std::string& dir);

enum class Method { kBow, kLsi, kLsiPmi, kNmf, kLda, kPvDm, kPvDbow, kBowe, kCbow };

std::optional<Method> ParseMethod(std::string_view name);
std::string_view MethodName(Method method);

struct RunConfig {
  Method method = Method::kBowe;
  std::size_t dim = 100;
  std::uint64_t seed = 1;
  std::size_t workers = 1;

  std::string artifacts_dir;
  std::string output_path;
  std::string word_output_path;   // pv-dm: optional word vector output
  std::string word_vectors_path;  // bowe: required word vector input

  // neural models
  std::size_t window = 10;
  std::size_t negatives = 10;
  std::optional<double> learning_rate;  // per-method default when unset
  std::size_t epochs = 5;
  double subsample = 0.0;
  bool verbose = false;

  // matrix factorization
  std::size_t svd_oversampling = 10;
  std::size_t svd_power_iterations = 2;
  double pmi_shift = 1.0;
  std::size_t nmf_iters = 200;
  double nmf_tol = 1e-4;

  // topic model
  std::optional<double> lda_alpha;
  double lda_beta = 0.01;
  std::size_t lda_iters = 200;

  bool bowe_tfidf = false;

  void Validate() const;
};

// Dispatches to the chosen method and writes the vector file plus a
// "<output>.meta.json" sidecar recording the corpus checksum.
void RunTrain(const RunConfig& config);

struct BuildTestSetOptions {
  std::string questions_path;
  std::string artifacts_dir;
  std::string output_path;
  std::string skip_report_path;  // optional
};

TestSetBuild RunBuildTestSet(const BuildTestSetOptions& options);

// Fails before evaluating when the two sidecars name different corpora.
EvalReport RunEval(const std::string& vectors_path, const std::string& testset_path,
                   std::size_t workers = 1);

struct ExportOptions {
  std::string vectors_path;   // convert a vector file to dense text
  std::string artifacts_dir;  // or export a doc-term matrix
  std::string matrix_kind;    // count | tfidf | ppmi
  double pmi_shift = 1.0;
  bool normalize = false;
  std::string output_path;
};

void RunExport(const ExportOptions& options);

std::string MetaPath(const std::string& path);

}  // namespace docanalogy

#endif  // DOCANALOGY_PIPELINE_H_
