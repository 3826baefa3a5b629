// Command-line driver: preprocess a corpus, train document vectors, build the
// document analogy test set and evaluate vectors on it.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "docanalogy/error.h"
#include "docanalogy/io.h"
#include "docanalogy/pipeline.h"

namespace {

using namespace docanalogy;

int ExitCode(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kParameter: return 3;
    case ErrorCategory::kFormat: return 4;
    case ErrorCategory::kIo: return 5;
    case ErrorCategory::kData: return 6;
    case ErrorCategory::kNumeric: return 7;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Document representations and the document analogy task"};
  app.set_config("--config", "", "key=value file ([train] sections or train.dim keys); flags win");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  PreprocessOptions pre;
  auto* preprocess = app.add_subcommand("preprocess", "Tokenize a corpus and build the vocabulary");
  preprocess->add_option("--corpus", pre.corpus_path, "title<TAB>text file")->required();
  preprocess->add_option("--output", pre.output_dir, "artifact directory")->required();
  preprocess->add_option("--min-count", pre.min_count, "drop words rarer than this")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  RunConfig cfg;
  std::string method_name;
  double lr = 0.0;
  double lda_alpha = 0.0;
  auto* train = app.add_subcommand("train", "Train document (or word) vectors");
  train->add_option("--method", method_name,
                    "bow, lsi, lsi-pmi, nmf, lda, pv-dm, pv-dbow, bowe or cbow")
      ->required();
  train->add_option("--artifacts", cfg.artifacts_dir, "preprocess output directory")->required();
  train->add_option("--output", cfg.output_path, "vector file to write")->required();
  train->add_option("--dim", cfg.dim)->capture_default_str()->check(CLI::PositiveNumber);
  train->add_option("--seed", cfg.seed)->capture_default_str();
  train->add_option("--workers", cfg.workers)->capture_default_str()->check(CLI::PositiveNumber);
  train->add_option("--word-output", cfg.word_output_path, "pv-dm: also write word vectors");
  train->add_option("--word-vectors", cfg.word_vectors_path, "bowe: input word vector file");
  train->add_option("--window", cfg.window)->capture_default_str();
  train->add_option("--negatives", cfg.negatives)->capture_default_str();
  auto* lr_opt = train->add_option("--lr", lr, "initial learning rate (0.05 cbow/pv-dm, 0.025 pv-dbow)");
  train->add_option("--epochs", cfg.epochs)->capture_default_str();
  train->add_option("--subsample", cfg.subsample, "frequent-word subsampling threshold")
      ->capture_default_str();
  train->add_flag("--verbose", cfg.verbose, "report training progress on stderr");
  train->add_option("--svd-oversampling", cfg.svd_oversampling)->capture_default_str();
  train->add_option("--svd-power-iterations", cfg.svd_power_iterations)->capture_default_str();
  train->add_option("--pmi-shift", cfg.pmi_shift, "lsi-pmi: shift k")->capture_default_str();
  train->add_option("--nmf-iters", cfg.nmf_iters)->capture_default_str();
  train->add_option("--nmf-tol", cfg.nmf_tol)->capture_default_str();
  auto* alpha_opt = train->add_option("--lda-alpha", lda_alpha, "default 50/dim");
  train->add_option("--lda-beta", cfg.lda_beta)->capture_default_str();
  train->add_option("--lda-iters", cfg.lda_iters)->capture_default_str();
  train->add_flag("--bowe-tfidf", cfg.bowe_tfidf, "bowe: weight words by TF-IDF instead of counts");

  BuildTestSetOptions build;
  auto* build_cmd = app.add_subcommand("build-testset", "Map word analogy questions onto document titles");
  build_cmd->add_option("--questions", build.questions_path)->required();
  build_cmd->add_option("--artifacts", build.artifacts_dir)->required();
  build_cmd->add_option("--output", build.output_path)->required();
  build_cmd->add_option("--skip-report", build.skip_report_path, "TSV of skipped questions");

  std::string vectors_path;
  std::string testset_path;
  std::string tsv_path;
  std::size_t eval_workers = 1;
  auto* eval = app.add_subcommand("eval", "Evaluate vectors on a document analogy test set");
  eval->add_option("--vectors", vectors_path)->required();
  eval->add_option("--testset", testset_path)->required();
  eval->add_option("--tsv", tsv_path, "also write the report as TSV");
  eval->add_option("--workers", eval_workers)->capture_default_str()->check(CLI::PositiveNumber);

  ExportOptions exp;
  auto* export_cmd = app.add_subcommand("export-vectors",
                                        "Write dense (optionally normalized) vectors or a doc-term matrix");
  export_cmd->add_option("--vectors", exp.vectors_path);
  export_cmd->add_option("--artifacts", exp.artifacts_dir);
  export_cmd->add_option("--matrix", exp.matrix_kind, "count, tfidf or ppmi");
  export_cmd->add_option("--pmi-shift", exp.pmi_shift)->capture_default_str();
  export_cmd->add_flag("--normalize", exp.normalize);
  export_cmd->add_option("--output", exp.output_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*preprocess) {
      const PreprocessSummary s = RunPreprocess(pre);
      std::cerr << "preprocess: " << s.n_docs << " documents, " << s.vocab_size
                << " words, " << s.total_tokens << " tokens\n";
    } else if (*train) {
      const auto method = ParseMethod(method_name);
      if (!method) Fail(ErrorCategory::kParameter, "unknown method '" + method_name + "'");
      cfg.method = *method;
      if (*lr_opt) cfg.learning_rate = lr;
      if (*alpha_opt) cfg.lda_alpha = lda_alpha;
      RunTrain(cfg);
    } else if (*build_cmd) {
      const TestSetBuild result = RunBuildTestSet(build);
      std::cerr << "build-testset: kept " << result.testset.size() << " questions, skipped "
                << result.skipped.size() << "\n";
    } else if (*eval) {
      const EvalReport report = RunEval(vectors_path, testset_path, eval_workers);
      report.WriteTable(std::cout);
      if (!tsv_path.empty()) {
        std::ostringstream out;
        report.WriteTsv(out);
        WriteFileBytes(tsv_path, out.str());
      }
    } else if (*export_cmd) {
      RunExport(exp);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << CategoryName(e.category()) << ": " << e.what() << "\n";
    return ExitCode(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
