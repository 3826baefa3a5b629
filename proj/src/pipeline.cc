#include "docanalogy/pipeline.h"

#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "docanalogy/compose.h"
#include "docanalogy/embedding.h"
#include "docanalogy/error.h"
#include "docanalogy/factorization.h"
#include "docanalogy/io.h"
#include "docanalogy/topics.h"
#include "docanalogy/weighting.h"
#include "json.hpp"

namespace docanalogy {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::array<std::pair<Method, std::string_view>, 9> kMethods{{
    {Method::kBow, "bow"},
    {Method::kLsi, "lsi"},
    {Method::kLsiPmi, "lsi-pmi"},
    {Method::kNmf, "nmf"},
    {Method::kLda, "lda"},
    {Method::kPvDm, "pv-dm"},
    {Method::kPvDbow, "pv-dbow"},
    {Method::kBowe, "bowe"},
    {Method::kCbow, "cbow"},
}};

std::string PathIn(const std::string& dir, std::string_view name) {
  return (fs::path(dir) / name).string();
}

json ReadJson(const std::string& path) {
  try {
    return json::parse(ReadFileBytes(path));
  } catch (const json::exception& e) {
    Fail(ErrorCategory::kFormat, "malformed JSON in " + path + ": " + e.what());
  }
}

void WriteJson(const std::string& path, const json& value) {
  WriteFileBytes(path, value.dump(2) + "\n");
}

std::string SerializeDense(const DenseVectorSet& vectors) {
  std::ostringstream out;
  WriteVectors(vectors, out);
  return out.str();
}

// Word vectors aligned to vocabulary ids; tokens absent from the file get
// zero rows.
DenseVectorSet AlignWordVectors(const DenseVectorSet& loaded, const Vocabulary& vocab,
                                const std::string& path) {
  DenseVectorSet aligned(vocab.tokens(), loaded.dim());
  std::vector<bool> seen(vocab.size(), false);
  for (std::size_t i = 0; i < loaded.rows(); ++i) {
    if (auto id = vocab.Find(loaded.label(i))) {
      const auto src = loaded.row(i);
      std::copy(src.begin(), src.end(), aligned.row(*id).begin());
      seen[*id] = true;
    }
  }
  const auto missing = static_cast<std::size_t>(std::count(seen.begin(), seen.end(), false));
  if (missing == vocab.size()) {
    Fail(ErrorCategory::kData, "word vector file " + path +
                                   " shares no token with the vocabulary");
  }
  if (missing > 0) {
    std::cerr << "bowe: " << missing << " of " << vocab.size()
              << " vocabulary words have no vector in " << path
              << "; using zero vectors\n";
  }
  return aligned;
}

EmbeddingParams NeuralParams(const RunConfig& config, EmbeddingParams params) {
  params.dim = config.dim;
  params.window = config.window;
  params.negatives = config.negatives;
  params.epochs = config.epochs;
  params.subsample = config.subsample;
  params.seed = config.seed;
  params.workers = config.workers;
  params.verbose = config.verbose;
  if (config.learning_rate) params.initial_lr = *config.learning_rate;
  return params;
}

}  // namespace

PreprocessSummary RunPreprocess(const PreprocessOptions& options) {
  Require(!options.corpus_path.empty(), "preprocess needs a corpus path");
  Require(!options.output_dir.empty(), "preprocess needs an output directory");
  const std::string bytes = ReadFileBytes(options.corpus_path);
  std::istringstream in(bytes);
  const std::vector<RawDocument> raw = ReadCorpus(in);
  const Vocabulary vocab = Vocabulary::Build(raw, options.min_count);
  const DocumentCorpus corpus = EncodeCorpus(raw, vocab);

  std::error_code ec;
  fs::create_directories(options.output_dir, ec);
  if (ec) {
    Fail(ErrorCategory::kIo, "cannot create directory " + options.output_dir);
  }

  std::ostringstream vocab_text;
  vocab.Write(vocab_text);
  std::ostringstream corpus_text;
  WriteEncodedCorpus(corpus, corpus_text);
  WriteFileBytes(PathIn(options.output_dir, kVocabFile), vocab_text.str());
  WriteFileBytes(PathIn(options.output_dir, kEncodedCorpusFile), corpus_text.str());

  PreprocessSummary summary{corpus.size(), vocab.size(), corpus.total_tokens(),
                            Fnv1aHex(bytes)};
  json manifest = {
      {"corpus_path", options.corpus_path},
      {"corpus_checksum", summary.corpus_checksum},
      {"min_count", options.min_count},
      {"n_docs", summary.n_docs},
      {"vocab_size", summary.vocab_size},
      {"total_tokens", summary.total_tokens},
      {"vocab_checksum", Fnv1aHex(vocab_text.str())},
      {"encoded_checksum", Fnv1aHex(corpus_text.str())},
  };
  WriteJson(PathIn(options.output_dir, kManifestFile), manifest);
  return summary;
}

Artifacts LoadArtifacts(const std::string& dir) {
  const std::string manifest_path = PathIn(dir, kManifestFile);
  if (!fs::exists(manifest_path)) {
    Fail(ErrorCategory::kIo, "missing preprocess artifacts in " + dir +
                                 " (run 'preprocess' first)");
  }
  const json manifest = ReadJson(manifest_path);
  const std::string vocab_bytes = ReadFileBytes(PathIn(dir, kVocabFile));
  const std::string corpus_bytes = ReadFileBytes(PathIn(dir, kEncodedCorpusFile));
  try {
    if (manifest.at("vocab_checksum").get<std::string>() != Fnv1aHex(vocab_bytes) ||
        manifest.at("encoded_checksum").get<std::string>() != Fnv1aHex(corpus_bytes)) {
      Fail(ErrorCategory::kData, "artifacts in " + dir + " do not match their manifest");
    }
    std::istringstream vocab_in(vocab_bytes);
    Vocabulary vocab = Vocabulary::Read(vocab_in, manifest.at("min_count").get<std::size_t>());
    std::istringstream corpus_in(corpus_bytes);
    DocumentCorpus corpus = ReadEncodedCorpus(corpus_in, vocab.size());
    return {std::move(vocab), std::move(corpus),
            manifest.at("corpus_checksum").get<std::string>()};
  } catch (const json::exception& e) {
    Fail(ErrorCategory::kFormat, "malformed manifest " + manifest_path + ": " + e.what());
  }
}

std::optional<Method> ParseMethod(std::string_view name) {
  for (const auto& [method, text] : kMethods) {
    if (text == name) return method;
  }
  return std::nullopt;
}

std::string_view MethodName(Method method) {
  for (const auto& [m, text] : kMethods) {
    if (m == method) return text;
  }
  return "unknown";
}

void RunConfig::Validate() const {
  Require(dim >= 1, "dim must be at least 1");
  Require(workers >= 1, "workers must be at least 1");
  Require(!artifacts_dir.empty(), "train needs --artifacts");
  Require(!output_path.empty(), "train needs --output");
  if (method == Method::kBowe) {
    Require(!word_vectors_path.empty(), "method bowe requires --word-vectors");
  }
  Require(pmi_shift >= 1.0, "pmi shift must be >= 1");
}

std::string MetaPath(const std::string& path) { return path + ".meta.json"; }

void RunTrain(const RunConfig& config) {
  config.Validate();
  const Artifacts artifacts = LoadArtifacts(config.artifacts_dir);
  const DocumentCorpus& corpus = artifacts.corpus;
  const Vocabulary& vocab = artifacts.vocab;
  const std::vector<std::string> titles = corpus.titles();
  const SparseDocTermMatrix counts = CountMatrix(corpus);

  std::string output;
  auto relabel = [&](DenseVectorSet vectors) {
    vectors.set_labels(titles);
    output = SerializeDense(vectors);
  };

  switch (config.method) {
    case Method::kBow: {
      std::ostringstream out;
      WriteSparseVectors(TfidfTransform(counts), titles, out);
      output = out.str();
      break;
    }
    case Method::kLsi:
    case Method::kLsiPmi: {
      LsiOptions options;
      options.oversampling = config.svd_oversampling;
      options.power_iterations = config.svd_power_iterations;
      options.seed = config.seed;
      const SparseDocTermMatrix x = config.method == Method::kLsi
                                        ? TfidfTransform(counts)
                                        : PpmiTransform(counts, config.pmi_shift);
      relabel(LsiFit(x, config.dim, options).doc_vectors);
      break;
    }
    case Method::kNmf: {
      NmfOptions options;
      options.max_iters = config.nmf_iters;
      options.tol = config.nmf_tol;
      options.seed = config.seed;
      relabel(NmfFit(TfidfTransform(counts), config.dim, options).doc_factors);
      break;
    }
    case Method::kLda: {
      LdaOptions options;
      options.topics = config.dim;
      options.alpha = config.lda_alpha;
      options.beta = config.lda_beta;
      options.iterations = config.lda_iters;
      options.seed = config.seed;
      relabel(LdaFit(counts, options));
      break;
    }
    case Method::kPvDm: {
      PvDmVectors vectors =
          TrainPvDm(corpus, vocab, NeuralParams(config, EmbeddingParams::PvDm()));
      if (!config.word_output_path.empty()) {
        WriteFileBytes(config.word_output_path, SerializeDense(vectors.word_vectors));
      }
      output = SerializeDense(vectors.doc_vectors);
      break;
    }
    case Method::kPvDbow:
      output = SerializeDense(
          TrainPvDbow(corpus, vocab, NeuralParams(config, EmbeddingParams::PvDbow())));
      break;
    case Method::kCbow:
      output = SerializeDense(
          TrainCbow(corpus, vocab, NeuralParams(config, EmbeddingParams::Cbow())));
      break;
    case Method::kBowe: {
      const DenseVectorSet words = AlignWordVectors(
          ReadDenseVectorsFile(config.word_vectors_path), vocab, config.word_vectors_path);
      const SparseDocTermMatrix x = config.bowe_tfidf ? TfidfTransform(counts) : counts;
      output = SerializeDense(BoweCompose(x, words, titles));
      break;
    }
  }

  WriteFileBytes(config.output_path, output);
  json meta = {
      {"method", MethodName(config.method)},
      {"corpus_checksum", artifacts.corpus_checksum},
      {"dim", config.dim},
      {"seed", config.seed},
      {"workers", config.workers},
      {"rows", config.method == Method::kCbow ? vocab.size() : corpus.size()},
      {"labels", config.method == Method::kCbow ? "tokens" : "titles"},
  };
  WriteJson(MetaPath(config.output_path), meta);
}

TestSetBuild RunBuildTestSet(const BuildTestSetOptions& options) {
  Require(!options.questions_path.empty(), "build-testset needs --questions");
  Require(!options.output_path.empty(), "build-testset needs --output");
  const Artifacts artifacts = LoadArtifacts(options.artifacts_dir);
  const auto groups = ReadQuestionsFile(options.questions_path);
  TestSetBuild build = BuildTestSet(groups, artifacts.corpus);

  std::ostringstream out;
  const auto titles = artifacts.corpus.titles();
  WriteQuestions(TestSetToQuestions(build.testset, titles), out);
  WriteFileBytes(options.output_path, out.str());
  WriteJson(MetaPath(options.output_path),
            {{"corpus_checksum", artifacts.corpus_checksum},
             {"questions", build.testset.size()},
             {"skipped", build.skipped.size()}});
  if (!options.skip_report_path.empty()) {
    std::ostringstream skips;
    WriteSkipReport(build.skipped, skips);
    WriteFileBytes(options.skip_report_path, skips.str());
  }
  return build;
}

EvalReport RunEval(const std::string& vectors_path, const std::string& testset_path,
                   std::size_t workers) {
  const std::string vectors_meta = MetaPath(vectors_path);
  const std::string testset_meta = MetaPath(testset_path);
  if (fs::exists(vectors_meta) && fs::exists(testset_meta)) {
    const json a = ReadJson(vectors_meta);
    const json b = ReadJson(testset_meta);
    if (a.contains("corpus_checksum") && b.contains("corpus_checksum") &&
        a["corpus_checksum"] != b["corpus_checksum"]) {
      Fail(ErrorCategory::kData,
           "corpus checksum mismatch: vectors from " +
               a["corpus_checksum"].get<std::string>() + ", test set from " +
               b["corpus_checksum"].get<std::string>());
    }
  }

  const LoadedVectors loaded = ReadVectorsFile(vectors_path);
  const auto groups = ReadQuestionsFile(testset_path);
  const AnalogyTestSet testset = ResolveTestSet(groups, loaded.labels);
  if (loaded.sparse()) {
    return Evaluate(testset, SparseAnalogyIndex(std::get<SparseDocTermMatrix>(loaded.data)),
                    workers);
  }
  return Evaluate(testset, DenseAnalogyIndex(std::get<DenseVectorSet>(loaded.data)),
                  workers);
}

void RunExport(const ExportOptions& options) {
  Require(!options.output_path.empty(), "export-vectors needs --output");
  std::ostringstream out;
  if (!options.matrix_kind.empty()) {
    Require(!options.artifacts_dir.empty(), "matrix export needs --artifacts");
    const Artifacts artifacts = LoadArtifacts(options.artifacts_dir);
    const SparseDocTermMatrix counts = CountMatrix(artifacts.corpus);
    if (options.matrix_kind == "count") {
      counts.Write(out);
    } else if (options.matrix_kind == "tfidf") {
      TfidfTransform(counts).Write(out);
    } else if (options.matrix_kind == "ppmi") {
      PpmiTransform(counts, options.pmi_shift).Write(out);
    } else {
      Fail(ErrorCategory::kParameter, "unknown matrix kind '" + options.matrix_kind +
                                          "' (expected count, tfidf or ppmi)");
    }
  } else {
    Require(!options.vectors_path.empty(), "export-vectors needs --vectors or --matrix");
    LoadedVectors loaded = ReadVectorsFile(options.vectors_path);
    DenseVectorSet dense;
    if (loaded.sparse()) {
      const auto& rows = std::get<SparseDocTermMatrix>(loaded.data);
      dense = DenseVectorSet(loaded.labels, rows.n_words(), rows.ToDense());
    } else {
      dense = std::get<DenseVectorSet>(std::move(loaded.data));
    }
    WriteVectors(options.normalize ? NormalizeRows(dense) : dense, out);
  }
  WriteFileBytes(options.output_path, out.str());
}

}  // namespace docanalogy
