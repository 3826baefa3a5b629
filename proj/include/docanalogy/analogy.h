#ifndef DOCANALOGY_ANALOGY_H_
#define DOCANALOGY_ANALOGY_H_

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "docanalogy/corpus.h"
#include "docanalogy/dense_vectors.h"
#include "docanalogy/weighting.h"

namespace docanalogy {

// "a is to b as c is to answer", items as words or phrases.
using WordQuadruple = std::array<std::string, 4>;

struct WordQuestionGroup {
  std::string relation;
  std::vector<WordQuadruple> questions;
};

// Reads ": relation" headers followed by question lines. Items are separated
// by TABs; a line without TABs is split on whitespace and must then have
// exactly four fields.
std::vector<WordQuestionGroup> ReadQuestions(std::istream& in);
std::vector<WordQuestionGroup> ReadQuestionsFile(const std::string& path);
void WriteQuestions(std::span<const WordQuestionGroup> groups, std::ostream& out);

struct AnalogyQuestion {
  DocId a = 0;
  DocId b = 0;
  DocId c = 0;
  DocId answer = 0;
};

struct AnalogyRelation {
  std::string name;
  std::vector<AnalogyQuestion> questions;
};

class AnalogyTestSet {
 public:
  AnalogyTestSet() = default;
  // Rejects empty or repeated relation names and questions whose four ids are
  // not distinct.
  explicit AnalogyTestSet(std::vector<AnalogyRelation> relations);

  const std::vector<AnalogyRelation>& relations() const { return relations_; }
  std::size_t size() const;

 private:
  std::vector<AnalogyRelation> relations_;
};

enum class SkipReason { kNoMatch, kDuplicateIds };
std::string_view SkipReasonName(SkipReason reason);

struct SkippedQuestion {
  std::string relation;
  WordQuadruple items;
  SkipReason reason;
};

struct TestSetBuild {
  AnalogyTestSet testset;
  std::vector<SkippedQuestion> skipped;
};

// Matches every lowercased item against document titles. A question survives
// only if all four items match and map to distinct documents.
TestSetBuild BuildTestSet(std::span<const WordQuestionGroup> groups,
                          const DocumentCorpus& corpus);

// Skip report: "question<TAB>reason" per skipped question, where question is
// "relation: a | b | c | d".
void WriteSkipReport(std::span<const SkippedQuestion> skipped, std::ostream& out);

// Maps label quadruples onto row indices of `labels`. Fails listing every
// label that has no row.
AnalogyTestSet ResolveTestSet(std::span<const WordQuestionGroup> groups,
                              std::span<const std::string> labels);

// Test-set file: the quadruples written back as titles.
std::vector<WordQuestionGroup> TestSetToQuestions(const AnalogyTestSet& testset,
                                                  std::span<const std::string> titles);

// Each row divided by its L2 norm; zero rows stay zero.
DenseVectorSet NormalizeRows(const DenseVectorSet& vectors);

// Scores every document against the offset query b + c - a over normalized
// vectors. Implementations exist for dense rows and for sparse BOW rows.
class AnalogyIndex {
 public:
  virtual ~AnalogyIndex() = default;
  virtual std::size_t size() const = 0;
  // scores[x] = (v_b + v_c - v_a) . v_x for every document x.
  virtual void OffsetScores(DocId a, DocId b, DocId c,
                            std::span<double> scores) const = 0;
};

class DenseAnalogyIndex : public AnalogyIndex {
 public:
  // Normalizes a copy of the rows.
  explicit DenseAnalogyIndex(const DenseVectorSet& vectors);
  std::size_t size() const override { return vectors_.rows(); }
  void OffsetScores(DocId a, DocId b, DocId c,
                    std::span<double> scores) const override;

 private:
  DenseVectorSet vectors_;
};

class SparseAnalogyIndex : public AnalogyIndex {
 public:
  explicit SparseAnalogyIndex(const SparseDocTermMatrix& rows);
  std::size_t size() const override { return rows_.n_docs(); }
  void OffsetScores(DocId a, DocId b, DocId c,
                    std::span<double> scores) const override;

 private:
  SparseDocTermMatrix rows_;
};

// argmax over x not in {a, b, c} of the offset score; ties go to the smallest
// doc id. `normalized` rows must already have unit (or zero) length.
DocId AnswerQuestion(DocId a, DocId b, DocId c, const DenseVectorSet& normalized);
DocId AnswerQuestion(DocId a, DocId b, DocId c, const AnalogyIndex& index,
                     std::span<double> scratch);

class EvalReport {
 public:
  struct Row {
    std::string relation;
    std::size_t asked = 0;
    std::size_t correct = 0;
    double accuracy() const;  // percent
  };

  void Add(Row row) { rows_.push_back(std::move(row)); }
  const std::vector<Row>& rows() const { return rows_; }
  std::size_t total_asked() const;
  std::size_t total_correct() const;
  double total_accuracy() const;

  // "relation<TAB>asked<TAB>correct<TAB>accuracy", then a "total" row.
  void WriteTsv(std::ostream& out) const;
  // Column-aligned table with two-decimal percentages.
  void WriteTable(std::ostream& out) const;

 private:
  std::vector<Row> rows_;
};

// Counts a question correct iff the returned document is exactly the answer.
EvalReport Evaluate(const AnalogyTestSet& testset, const AnalogyIndex& index,
                    std::size_t workers = 1);
EvalReport Evaluate(const AnalogyTestSet& testset, const DenseVectorSet& vectors,
                    std::size_t workers = 1);

}  // namespace docanalogy

#endif  // DOCANALOGY_ANALOGY_H_
