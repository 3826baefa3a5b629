#ifndef DOCANALOGY_TESTS_SUPPORT_FIXTURES_H_
#define DOCANALOGY_TESTS_SUPPORT_FIXTURES_H_

#include <cstdint>
#include <string>
#include <vector>

#include "docanalogy/analogy.h"
#include "docanalogy/corpus.h"
#include "docanalogy/dense_vectors.h"
#include "docanalogy/weighting.h"

namespace docanalogy::testing {

// ~300 documents. Each document carries one distinctive title word (twice)
// plus filler words. Title words of two relations get planted vectors where
// y_i = x_i + r with orthonormal x_i and r, so b - a + c == d holds exactly;
// distractor words live in an orthogonal block and fillers are zero vectors.
struct PlantedFixture {
  std::vector<RawDocument> docs;
  std::vector<WordQuestionGroup> questions;  // 50 questions over titles
  DenseVectorSet word_vectors;               // labelled by token
};

PlantedFixture MakePlantedFixture(std::uint64_t seed = 7);

// Two classes of documents over disjoint vocabularies; class = doc index % 2.
std::vector<RawDocument> MakeTwoClassCorpus(std::size_t n_docs = 200,
                                            std::size_t doc_length = 40,
                                            std::size_t words_per_class = 50,
                                            std::uint64_t seed = 11);

// Fraction of rows whose most cosine-similar other row has the same class
// (class = row index % 2).
double NearestNeighborAccuracy(const DenseVectorSet& vectors);

// Word vectors aligned to vocabulary ids; tokens without a planted vector are
// zero.
DenseVectorSet AlignToVocabulary(const DenseVectorSet& by_token, const Vocabulary& vocab);

// Count matrix whose first half of documents draws `length` tokens from
// words [0, vocab/2) and the second half from [vocab/2, vocab).
SparseDocTermMatrix TwoBlockCounts(std::size_t n_docs, std::size_t vocab,
                                   std::size_t length, std::uint64_t seed);

// Two-topic theta over a TwoBlockCounts corpus: each block's majority topic
// is found by argmax votes; returns the share of documents putting >= 0.9
// mass on their block's topic.
double BlockPurity(const DenseVectorSet& theta);

// Path under a per-process temp directory; parent directories are created.
std::string TempPath(const std::string& name);
void WriteCorpusFile(const std::string& path, const std::vector<RawDocument>& docs);

}  // namespace docanalogy::testing

#endif  // DOCANALOGY_TESTS_SUPPORT_FIXTURES_H_
