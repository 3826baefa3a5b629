#include "docanalogy/pipeline.h"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <sys/wait.h>

#include "docanalogy/error.h"
#include "docanalogy/io.h"
#include "json.hpp"
#include "support/fixtures.h"

namespace docanalogy {
namespace {

namespace fs = std::filesystem;

ErrorCategory CategoryOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.category();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCategory::kParameter;
}

TEST(VectorFileTest, DenseRoundTrip) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, 10.0);
  std::vector<double> data(5 * 7);
  for (double& x : data) x = normal(rng);
  data[3] = 0.0;
  data[4] = -1e-300;
  const DenseVectorSet v({"air canada", "b", "c d e", "f", "g"}, 7, data);
  std::ostringstream first;
  WriteVectors(v, first);
  EXPECT_EQ(first.str().substr(0, 4), "5 7\n");
  EXPECT_EQ(first.str().substr(4, 11), "air canada\t");

  std::istringstream in(first.str());
  const LoadedVectors loaded = ReadVectors(in);
  ASSERT_FALSE(loaded.sparse());
  const auto& back = std::get<DenseVectorSet>(loaded.data);
  EXPECT_EQ(back.labels(), v.labels());
  for (std::size_t i = 0; i < data.size(); ++i) {
    EXPECT_NEAR(back.data()[i], data[i], 1e-8 * std::abs(data[i]));
  }
  std::ostringstream second;
  WriteVectors(back, second);
  EXPECT_EQ(second.str(), first.str());
}

TEST(VectorFileTest, SparseRoundTrip) {
  const auto m = SparseDocTermMatrix::FromDense(3, 4, MatrixKind::kTfidf,
                                                std::vector<double>{0, 1.5, 0, 2, 0, 0, 0, 0, 3, 0, 0, 0.25});
  std::ostringstream first;
  WriteSparseVectors(m, {"x", "y", "z"}, first);
  EXPECT_EQ(first.str().substr(0, 11), "3 4 sparse\n");
  std::istringstream in(first.str());
  const LoadedVectors loaded = ReadVectors(in);
  ASSERT_TRUE(loaded.sparse());
  const auto& back = std::get<SparseDocTermMatrix>(loaded.data);
  EXPECT_EQ(back.ToDense(), m.ToDense());
  EXPECT_EQ(loaded.labels, (std::vector<std::string>{"x", "y", "z"}));
  std::ostringstream second;
  WriteSparseVectors(back, loaded.labels, second);
  EXPECT_EQ(second.str(), first.str());
}

TEST(VectorFileTest, MalformedFilesFail) {
  for (const char* text : {"", "2\n", "1 2\na\t1\n", "1 2\na 1 2\n", "2 1\na\t1\n",
                           "1 2\na\t1 x\n", "1 3 sparse\na\t5:1\n"}) {
    std::istringstream in(text);
    EXPECT_EQ(CategoryOf([&] { ReadVectors(in); }), ErrorCategory::kFormat) << text;
  }
}

TEST(ChecksumTest, Fnv1aVectors) {
  EXPECT_EQ(Fnv1aHex(""), "cbf29ce484222325");
  EXPECT_EQ(Fnv1aHex("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(Fnv1aHex("foobar"), "85944171f73967e8");
}

std::vector<RawDocument> ThreeDocs() {
  return {{"first", "the cat sat"}, {"second", "the dog 42 ran"}, {"third", "cat and dog"}};
}

TEST(PreprocessTest, ManifestAndDeterminism) {
  const std::string corpus = testing::TempPath("pre/corpus.tsv");
  testing::WriteCorpusFile(corpus, ThreeDocs());
  const std::string out1 = testing::TempPath("pre/a"), out2 = testing::TempPath("pre/b");
  const PreprocessSummary s = RunPreprocess({corpus, out1, 1});
  EXPECT_EQ(s.n_docs, 3u);
  EXPECT_EQ(s.vocab_size, 6u);  // "42" is dropped
  EXPECT_EQ(s.total_tokens, 9u);
  RunPreprocess({corpus, out2, 1});

  std::ifstream manifest(out1 + "/manifest.json");
  const auto j = nlohmann::json::parse(manifest);
  EXPECT_EQ(j["n_docs"], 3);
  EXPECT_EQ(j["min_count"], 1);
  EXPECT_EQ(j["corpus_checksum"], FileChecksum(corpus));

  for (std::string_view name : {kVocabFile, kEncodedCorpusFile}) {
    EXPECT_EQ(ReadFileBytes(out1 + "/" + std::string(name)),
              ReadFileBytes(out2 + "/" + std::string(name)));
  }
  const Artifacts artifacts = LoadArtifacts(out1);
  EXPECT_EQ(artifacts.corpus.size(), 3u);
  EXPECT_EQ(artifacts.corpus.doc(2).title, "third");
}

TEST(PreprocessTest, DetectsTamperingAndMissingArtifacts) {
  const std::string corpus = testing::TempPath("tamper/corpus.tsv");
  testing::WriteCorpusFile(corpus, ThreeDocs());
  const std::string out = testing::TempPath("tamper/a");
  RunPreprocess({corpus, out, 1});
  WriteFileBytes(out + "/vocab.tsv", ReadFileBytes(out + "/vocab.tsv") + "extra\t1\n");
  EXPECT_EQ(CategoryOf([&] { LoadArtifacts(out); }), ErrorCategory::kData);
  EXPECT_EQ(CategoryOf([&] { LoadArtifacts(testing::TempPath("tamper/none")); }),
            ErrorCategory::kIo);
  EXPECT_EQ(CategoryOf([&] { RunPreprocess({testing::TempPath("nope.tsv"), out, 1}); }),
            ErrorCategory::kIo);
}

TEST(MethodTest, ParsesNames) {
  for (const char* name : {"bow", "lsi", "lsi-pmi", "nmf", "lda", "pv-dm", "pv-dbow", "bowe", "cbow"}) {
    const auto m = ParseMethod(name);
    ASSERT_TRUE(m.has_value()) << name;
    EXPECT_EQ(MethodName(*m), name);
  }
  EXPECT_FALSE(ParseMethod("word2vec").has_value());
}

class TrainTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const std::string corpus = testing::TempPath("train/corpus.tsv");
    testing::WriteCorpusFile(corpus, testing::MakeTwoClassCorpus(60, 20, 15, 5));
    RunPreprocess({corpus, testing::TempPath("train/artifacts"), 1});
  }
  RunConfig Config(Method method, const std::string& out) {
    RunConfig c;
    c.method = method;
    c.dim = 6;
    c.artifacts_dir = testing::TempPath("train/artifacts");
    c.output_path = testing::TempPath("train/" + out);
    c.epochs = 2;
    c.nmf_iters = 30;
    c.lda_iters = 20;
    return c;
  }
};

TEST_F(TrainTest, EveryMethodIsByteReproducible) {
  RunConfig cbow = Config(Method::kCbow, "cbow.vec");
  RunTrain(cbow);
  for (Method m : {Method::kBow, Method::kLsi, Method::kLsiPmi, Method::kNmf, Method::kLda,
                   Method::kPvDm, Method::kPvDbow, Method::kBowe, Method::kCbow}) {
    const std::string name(MethodName(m));
    RunConfig c1 = Config(m, name + ".1");
    RunConfig c2 = Config(m, name + ".2");
    c1.word_vectors_path = c2.word_vectors_path = cbow.output_path;
    if (m == Method::kPvDm) {
      c1.word_output_path = c1.output_path + ".words";
      c2.word_output_path = c2.output_path + ".words";
    }
    RunTrain(c1);
    RunTrain(c2);
    const std::string bytes = ReadFileBytes(c1.output_path);
    EXPECT_EQ(bytes, ReadFileBytes(c2.output_path)) << name;
    EXPECT_EQ(ReadFileBytes(MetaPath(c1.output_path)), ReadFileBytes(MetaPath(c2.output_path)));
    const LoadedVectors loaded = ReadVectorsFile(c1.output_path);
    const std::size_t rows = m == Method::kCbow ? 30u : 60u;
    EXPECT_EQ(loaded.labels.size(), rows) << name;
    EXPECT_EQ(loaded.sparse(), m == Method::kBow) << name;
    if (m == Method::kPvDm) {
      EXPECT_EQ(ReadFileBytes(c1.word_output_path), ReadFileBytes(c2.word_output_path));
    }
  }
}

TEST_F(TrainTest, BoweNeedsWordVectors) {
  RunConfig c = Config(Method::kBowe, "bowe.none");
  EXPECT_EQ(CategoryOf([&] { RunTrain(c); }), ErrorCategory::kParameter);
  c.word_vectors_path = testing::TempPath("train/missing.vec");
  EXPECT_EQ(CategoryOf([&] { RunTrain(c); }), ErrorCategory::kIo);
}

TEST_F(TrainTest, MissingArtifactsFail) {
  RunConfig c = Config(Method::kLsi, "lsi.none");
  c.artifacts_dir = testing::TempPath("train/no-artifacts");
  EXPECT_EQ(CategoryOf([&] { RunTrain(c); }), ErrorCategory::kIo);
}

TEST_F(TrainTest, ExportsNormalizedAndMatrices) {
  RunConfig c = Config(Method::kLsi, "lsi.export");
  RunTrain(c);
  const std::string out = testing::TempPath("train/lsi.normalized");
  RunExport({c.output_path, "", "", 1.0, true, out});
  const DenseVectorSet n = ReadDenseVectorsFile(out);
  for (std::size_t i = 0; i < n.rows(); ++i) EXPECT_NEAR(Norm(n.row(i)), 1.0, 1e-8);

  const std::string counts = testing::TempPath("train/counts.txt");
  RunExport({"", c.artifacts_dir, "count", 1.0, false, counts});
  EXPECT_EQ(ReadFileBytes(counts).substr(0, 6), "60 30 ");
  EXPECT_EQ(CategoryOf([&] { RunExport({"", c.artifacts_dir, "bm25", 1.0, false, counts}); }),
            ErrorCategory::kParameter);
}

class PlantedPipelineTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const testing::PlantedFixture fixture = testing::MakePlantedFixture();
    testing::WriteCorpusFile(Path("corpus.tsv"), fixture.docs);
    RunPreprocess({Path("corpus.tsv"), Path("artifacts"), 1});
    WriteVectorsFile(fixture.word_vectors, Path("words.vec"));
    std::ostringstream questions;
    WriteQuestions(fixture.questions, questions);
    WriteFileBytes(Path("questions.txt"), questions.str());
    RunBuildTestSet({Path("questions.txt"), Path("artifacts"), Path("testset.txt"),
                     Path("skipped.tsv")});
    WriteFileBytes(Path("bad-testset.txt"),
                   ": r\nplace 0-0\tnation 0-0\tnowhere\tnobody\n");
  }
  static std::string Path(const std::string& name) { return testing::TempPath("planted/" + name); }
  static RunConfig Config(Method method, const std::string& out) {
    RunConfig c;
    c.method = method;
    c.dim = 8;
    c.artifacts_dir = Path("artifacts");
    c.output_path = Path(out);
    c.word_vectors_path = Path("words.vec");
    return c;
  }
};

TEST_F(PlantedPipelineTest, BoweReachesFullAccuracy) {
  RunTrain(Config(Method::kBowe, "bowe.vec"));
  const EvalReport report = RunEval(Path("bowe.vec"), Path("testset.txt"), 2);
  EXPECT_DOUBLE_EQ(report.total_accuracy(), 100.0);
  ASSERT_EQ(report.rows().size(), 2u);
  EXPECT_EQ(report.rows()[0].relation, "capital-common-countries");
  EXPECT_EQ(report.rows()[1].relation, "currency");
  std::ostringstream tsv;
  report.WriteTsv(tsv);
  EXPECT_NE(tsv.str().find("total\t50\t50\t100.00\n"), std::string::npos);
  EXPECT_EQ(ReadFileBytes(Path("skipped.tsv")), "");
}

TEST_F(PlantedPipelineTest, BowStaysLow) {
  RunTrain(Config(Method::kBow, "bow.vec"));
  EXPECT_LT(RunEval(Path("bow.vec"), Path("testset.txt")).total_accuracy(), 10.0);
}

TEST_F(PlantedPipelineTest, MissingLabelsAreListed) {
  try {
    RunTrain(Config(Method::kBowe, "bowe2.vec"));
    RunEval(Path("bowe2.vec"), Path("bad-testset.txt"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::kData);
    EXPECT_NE(std::string(e.what()).find("nowhere"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("nobody"), std::string::npos);
  }
}

TEST_F(PlantedPipelineTest, CorpusMismatchIsRejected) {
  const std::string other = testing::TempPath("planted-other/corpus.tsv");
  testing::WriteCorpusFile(other, testing::MakePlantedFixture(8).docs);
  RunPreprocess({other, testing::TempPath("planted-other/artifacts"), 1});
  RunConfig c = Config(Method::kBowe, "other.vec");
  c.artifacts_dir = testing::TempPath("planted-other/artifacts");
  RunTrain(c);
  EXPECT_EQ(CategoryOf([&] { RunEval(Path("other.vec"), Path("testset.txt")); }),
            ErrorCategory::kData);
}

int RunCli(const std::string& args) {
  const std::string cmd = std::string(DOCANALOGY_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST_F(PlantedPipelineTest, CliExitCodes) {
  const std::string art = " --artifacts " + Path("artifacts");
  EXPECT_EQ(RunCli("train --method bowe --word-vectors " + Path("words.vec") + art +
                   " --output " + Path("cli.vec")),
            0);
  EXPECT_EQ(RunCli("eval --vectors " + Path("cli.vec") + " --testset " + Path("testset.txt") +
                   " --tsv " + Path("cli.tsv")),
            0);
  EXPECT_NE(ReadFileBytes(Path("cli.tsv")).find("100.00"), std::string::npos);
  EXPECT_EQ(RunCli("train --method glove" + art + " --output " + Path("x.vec")), 3);
  EXPECT_EQ(RunCli("train --method bowe" + art + " --output " + Path("x.vec")), 3);
  EXPECT_EQ(RunCli("train --method lsi --artifacts " + Path("none") + " --output x"), 5);
  EXPECT_EQ(RunCli("eval --vectors " + Path("cli.vec") + " --testset " + Path("bad-testset.txt")),
            6);
}

TEST_F(PlantedPipelineTest, CliConfigFileYieldsToFlags) {
  const std::string art = " --artifacts " + Path("artifacts");
  WriteFileBytes(Path("run.ini"), "[train]\nmethod=lsi\ndim=4\n");
  ASSERT_EQ(RunCli("--config " + Path("run.ini") + " train" + art + " --output " + Path("c1.vec")), 0);
  EXPECT_EQ(ReadFileBytes(Path("c1.vec")).substr(0, 6), "300 4\n");
  ASSERT_EQ(RunCli("--config " + Path("run.ini") + " train --dim 3" + art + " --output " +
                   Path("c2.vec")),
            0);
  EXPECT_EQ(ReadFileBytes(Path("c2.vec")).substr(0, 6), "300 3\n");
  WriteFileBytes(Path("bad.ini"), "dimension=4\n");
  EXPECT_NE(RunCli("--config " + Path("bad.ini") + " train --method lsi" + art + " --output " +
                   Path("c3.vec")),
            0);
}

}  // namespace
}  // namespace docanalogy
