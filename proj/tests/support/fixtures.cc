#include "fixtures.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <unistd.h>

namespace docanalogy::testing {

PlantedFixture MakePlantedFixture(std::uint64_t seed) {
  constexpr std::size_t kDim = 64;
  constexpr std::size_t kFillers = 30;
  constexpr std::size_t kFillerTokens = 10;
  constexpr std::size_t kDocs = 300;
  const std::vector<std::size_t> pairs_per_relation{6, 5};
  const std::vector<std::string> relation_names{"capital-common-countries", "currency"};

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> filler_pick(0, kFillers - 1);
  std::normal_distribution<double> normal(0.0, 1.0);

  struct Planted {
    std::string title;
    std::string token;
    std::vector<double> vec;
  };
  std::vector<Planted> planted;
  std::vector<std::vector<std::pair<std::string, std::string>>> relation_pairs;

  std::size_t basis = 0;
  const std::size_t relation_dim = 11;  // dims 11, 12 hold the relation offsets
  for (std::size_t r = 0; r < pairs_per_relation.size(); ++r) {
    relation_pairs.emplace_back();
    for (std::size_t i = 0; i < pairs_per_relation[r]; ++i, ++basis) {
      std::vector<double> x(kDim, 0.0);
      x[basis] = 1.0;
      std::vector<double> y = x;
      y[relation_dim + r] = 1.0;
      const std::string stem = "r" + std::to_string(r) + "e" + std::to_string(i);
      const std::string xt = "place " + std::to_string(r) + "-" + std::to_string(i);
      const std::string yt = "nation " + std::to_string(r) + "-" + std::to_string(i);
      planted.push_back({xt, stem + "x", x});
      planted.push_back({yt, stem + "y", y});
      relation_pairs.back().emplace_back(xt, yt);
    }
  }
  const std::size_t distractor_begin = relation_dim + pairs_per_relation.size();
  for (std::size_t k = 0; planted.size() < kDocs; ++k) {
    std::vector<double> v(kDim, 0.0);
    for (std::size_t d = distractor_begin; d < kDim; ++d) v[d] = normal(rng);
    planted.push_back({"distractor " + std::to_string(k), "dis" + std::to_string(k), v});
  }
  std::shuffle(planted.begin(), planted.end(), rng);

  PlantedFixture fixture;
  std::vector<std::string> labels;
  std::vector<double> data;
  for (const Planted& p : planted) {
    std::string text = p.token + " " + p.token;
    for (std::size_t f = 0; f < kFillerTokens; ++f) {
      text += " fill" + std::to_string(filler_pick(rng));
    }
    fixture.docs.push_back({p.title, text});
    labels.push_back(p.token);
    data.insert(data.end(), p.vec.begin(), p.vec.end());
  }
  fixture.word_vectors = DenseVectorSet(std::move(labels), kDim, std::move(data));

  for (std::size_t r = 0; r < relation_pairs.size(); ++r) {
    WordQuestionGroup group{relation_names[r], {}};
    const auto& pairs = relation_pairs[r];
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      for (std::size_t j = 0; j < pairs.size(); ++j) {
        if (i == j) continue;
        group.questions.push_back(
            {pairs[i].first, pairs[i].second, pairs[j].first, pairs[j].second});
      }
    }
    fixture.questions.push_back(std::move(group));
  }
  return fixture;
}

std::vector<RawDocument> MakeTwoClassCorpus(std::size_t n_docs, std::size_t doc_length,
                                            std::size_t words_per_class,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> word(0, words_per_class - 1);
  std::vector<RawDocument> docs;
  for (std::size_t i = 0; i < n_docs; ++i) {
    const char prefix = i % 2 == 0 ? 'a' : 'b';
    std::string text;
    for (std::size_t t = 0; t < doc_length; ++t) {
      if (t > 0) text += ' ';
      text += prefix;
      text += "w" + std::to_string(word(rng));
    }
    docs.push_back({"doc " + std::to_string(i), text});
  }
  return docs;
}

double NearestNeighborAccuracy(const DenseVectorSet& vectors) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < vectors.rows(); ++i) {
    double best = -2.0;
    std::size_t best_j = i;
    for (std::size_t j = 0; j < vectors.rows(); ++j) {
      if (j == i) continue;
      const double c = Cosine(vectors.row(i), vectors.row(j));
      if (c > best) {
        best = c;
        best_j = j;
      }
    }
    hits += (best_j % 2) == (i % 2);
  }
  return static_cast<double>(hits) / static_cast<double>(vectors.rows());
}

DenseVectorSet AlignToVocabulary(const DenseVectorSet& by_token, const Vocabulary& vocab) {
  DenseVectorSet aligned(vocab.tokens(), by_token.dim());
  for (std::size_t i = 0; i < by_token.rows(); ++i) {
    if (auto id = vocab.Find(by_token.label(i))) {
      std::copy(by_token.row(i).begin(), by_token.row(i).end(), aligned.row(*id).begin());
    }
  }
  return aligned;
}

SparseDocTermMatrix TwoBlockCounts(std::size_t n_docs, std::size_t vocab,
                                   std::size_t length, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, vocab / 2 - 1);
  std::vector<double> dense(n_docs * vocab, 0.0);
  for (std::size_t d = 0; d < n_docs; ++d) {
    const std::size_t offset = d < n_docs / 2 ? 0 : vocab / 2;
    for (std::size_t t = 0; t < length; ++t) dense[d * vocab + offset + pick(rng)] += 1.0;
  }
  return SparseDocTermMatrix::FromDense(n_docs, vocab, MatrixKind::kCount, dense);
}

double BlockPurity(const DenseVectorSet& theta) {
  const std::size_t n = theta.rows();
  std::size_t pure = 0;
  for (std::size_t block = 0; block < 2; ++block) {
    const std::size_t begin = block * (n / 2), end = block == 0 ? n / 2 : n;
    std::size_t votes[2] = {0, 0};
    for (std::size_t d = begin; d < end; ++d) ++votes[theta.at(d, 0) >= theta.at(d, 1) ? 0 : 1];
    const std::size_t majority = votes[0] >= votes[1] ? 0 : 1;
    for (std::size_t d = begin; d < end; ++d) pure += theta.at(d, majority) >= 0.9;
  }
  return static_cast<double>(pure) / static_cast<double>(n);
}

std::string TempPath(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("docanalogy_test_" + std::to_string(::getpid()));
  const auto path = dir / name;
  std::filesystem::create_directories(path.parent_path());
  return path.string();
}

void WriteCorpusFile(const std::string& path, const std::vector<RawDocument>& docs) {
  std::ofstream out(path);
  for (const auto& d : docs) out << d.title << '\t' << d.text << '\n';
}

}  // namespace docanalogy::testing
