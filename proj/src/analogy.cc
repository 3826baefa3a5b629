#include "docanalogy/analogy.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "docanalogy/error.h"

namespace docanalogy {
namespace {

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::string FormatQuestion(const std::string& relation, const WordQuadruple& q) {
  return relation + ": " + q[0] + " | " + q[1] + " | " + q[2] + " | " + q[3];
}

std::string Percent(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", value);
  return buffer;
}

}  // namespace

std::vector<WordQuestionGroup> ReadQuestions(std::istream& in) {
  std::vector<WordQuestionGroup> groups;
  std::string line;
  std::size_t line_number = 0;
  auto fail = [&](const std::string& what) {
    Fail(ErrorCategory::kFormat,
         "question line " + std::to_string(line_number) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    if (line[0] == ':') {
      const std::string name = Trim(line.substr(1));
      if (name.empty()) fail("empty relation name");
      groups.push_back({name, {}});
      continue;
    }
    if (groups.empty()) fail("question before any ': relation' header");

    std::vector<std::string> fields;
    if (line.find('\t') != std::string::npos) {
      std::size_t start = 0;
      while (true) {
        const auto tab = line.find('\t', start);
        fields.push_back(Trim(line.substr(start, tab - start)));
        if (tab == std::string::npos) break;
        start = tab + 1;
      }
    } else {
      std::istringstream words(line);
      for (std::string w; words >> w;) fields.push_back(w);
    }
    if (fields.size() != 4) {
      fail("expected 4 items, found " + std::to_string(fields.size()));
    }
    groups.back().questions.push_back({fields[0], fields[1], fields[2], fields[3]});
  }
  return groups;
}

std::vector<WordQuestionGroup> ReadQuestionsFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCategory::kIo, "cannot open question file: " + path);
  return ReadQuestions(in);
}

void WriteQuestions(std::span<const WordQuestionGroup> groups, std::ostream& out) {
  for (const auto& group : groups) {
    out << ": " << group.relation << '\n';
    for (const auto& q : group.questions) {
      out << q[0] << '\t' << q[1] << '\t' << q[2] << '\t' << q[3] << '\n';
    }
  }
}

AnalogyTestSet::AnalogyTestSet(std::vector<AnalogyRelation> relations)
    : relations_(std::move(relations)) {
  std::unordered_set<std::string> names;
  for (const auto& relation : relations_) {
    Require(!relation.name.empty(), "relation names must be non-empty");
    Require(names.insert(relation.name).second,
            "duplicate relation name '" + relation.name + "'");
    for (const auto& q : relation.questions) {
      const std::array<DocId, 4> ids{q.a, q.b, q.c, q.answer};
      for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) {
          Require(ids[i] != ids[j], "analogy question in '" + relation.name +
                                        "' repeats a document");
        }
      }
    }
  }
}

std::size_t AnalogyTestSet::size() const {
  std::size_t n = 0;
  for (const auto& r : relations_) n += r.questions.size();
  return n;
}

std::string_view SkipReasonName(SkipReason reason) {
  switch (reason) {
    case SkipReason::kNoMatch: return "no-match";
    case SkipReason::kDuplicateIds: return "duplicate-ids";
  }
  return "unknown";
}

TestSetBuild BuildTestSet(std::span<const WordQuestionGroup> groups,
                          const DocumentCorpus& corpus) {
  TestSetBuild build;
  std::vector<AnalogyRelation> relations;
  for (const auto& group : groups) {
    AnalogyRelation relation{group.relation, {}};
    for (const auto& q : group.questions) {
      std::array<DocId, 4> ids{};
      bool matched = true;
      for (std::size_t i = 0; i < 4 && matched; ++i) {
        const auto id = corpus.FindTitle(LowercaseAscii(q[i]));
        matched = id.has_value();
        if (matched) ids[i] = *id;
      }
      if (!matched) {
        build.skipped.push_back({group.relation, q, SkipReason::kNoMatch});
        continue;
      }
      std::array<DocId, 4> sorted = ids;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        build.skipped.push_back({group.relation, q, SkipReason::kDuplicateIds});
        continue;
      }
      relation.questions.push_back({ids[0], ids[1], ids[2], ids[3]});
    }
    relations.push_back(std::move(relation));
  }
  build.testset = AnalogyTestSet(std::move(relations));
  return build;
}

void WriteSkipReport(std::span<const SkippedQuestion> skipped, std::ostream& out) {
  for (const auto& s : skipped) {
    out << FormatQuestion(s.relation, s.items) << '\t' << SkipReasonName(s.reason)
        << '\n';
  }
}

AnalogyTestSet ResolveTestSet(std::span<const WordQuestionGroup> groups,
                              std::span<const std::string> labels) {
  std::unordered_map<std::string, DocId> rows;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    rows.emplace(labels[i], static_cast<DocId>(i));
  }
  std::vector<std::string> missing;
  std::unordered_set<std::string> reported;
  std::vector<AnalogyRelation> relations;
  for (const auto& group : groups) {
    AnalogyRelation relation{group.relation, {}};
    for (const auto& q : group.questions) {
      std::array<DocId, 4> ids{};
      for (std::size_t i = 0; i < 4; ++i) {
        auto it = rows.find(q[i]);
        if (it == rows.end()) {
          if (reported.insert(q[i]).second) missing.push_back(q[i]);
        } else {
          ids[i] = it->second;
        }
      }
      relation.questions.push_back({ids[0], ids[1], ids[2], ids[3]});
    }
    relations.push_back(std::move(relation));
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    Fail(ErrorCategory::kData,
         std::to_string(missing.size()) +
             " test-set labels have no vector: " + list);
  }
  return AnalogyTestSet(std::move(relations));
}

std::vector<WordQuestionGroup> TestSetToQuestions(const AnalogyTestSet& testset,
                                                  std::span<const std::string> titles) {
  std::vector<WordQuestionGroup> groups;
  for (const auto& relation : testset.relations()) {
    WordQuestionGroup group{relation.name, {}};
    for (const auto& q : relation.questions) {
      group.questions.push_back(
          {titles[q.a], titles[q.b], titles[q.c], titles[q.answer]});
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

DenseVectorSet NormalizeRows(const DenseVectorSet& vectors) {
  DenseVectorSet out = vectors;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto row = out.row(i);
    const double norm = Norm(row);
    if (norm > 0.0) {
      for (double& v : row) v /= norm;
    }
  }
  return out;
}

DenseAnalogyIndex::DenseAnalogyIndex(const DenseVectorSet& vectors)
    : vectors_(NormalizeRows(vectors)) {}

void DenseAnalogyIndex::OffsetScores(DocId a, DocId b, DocId c,
                                     std::span<double> scores) const {
  const std::size_t dim = vectors_.dim();
  std::vector<double> query(dim);
  const auto va = vectors_.row(a);
  const auto vb = vectors_.row(b);
  const auto vc = vectors_.row(c);
  for (std::size_t d = 0; d < dim; ++d) query[d] = vb[d] + vc[d] - va[d];
  for (std::size_t x = 0; x < vectors_.rows(); ++x) {
    scores[x] = Dot(query, vectors_.row(x));
  }
}

SparseAnalogyIndex::SparseAnalogyIndex(const SparseDocTermMatrix& rows) {
  std::vector<SparseDocTermMatrix::Entry> entries = rows.entries();
  for (std::size_t i = 0; i < rows.n_docs(); ++i) {
    double norm2 = 0.0;
    for (const auto& e : rows.row(i)) norm2 += e.weight * e.weight;
    const double norm = std::sqrt(norm2);
    for (std::size_t k = rows.row_offsets()[i]; k < rows.row_offsets()[i + 1]; ++k) {
      entries[k].weight /= norm;
    }
  }
  rows_ = SparseDocTermMatrix(rows.n_docs(), rows.n_words(), rows.kind(),
                              rows.row_offsets(), std::move(entries));
}

void SparseAnalogyIndex::OffsetScores(DocId a, DocId b, DocId c,
                                      std::span<double> scores) const {
  thread_local std::vector<double> query;
  query.assign(rows_.n_words(), 0.0);
  for (const auto& e : rows_.row(b)) query[e.word] += e.weight;
  for (const auto& e : rows_.row(c)) query[e.word] += e.weight;
  for (const auto& e : rows_.row(a)) query[e.word] -= e.weight;
  for (std::size_t x = 0; x < rows_.n_docs(); ++x) {
    double s = 0.0;
    for (const auto& e : rows_.row(x)) s += query[e.word] * e.weight;
    scores[x] = s;
  }
}

DocId AnswerQuestion(DocId a, DocId b, DocId c, const DenseVectorSet& normalized) {
  const std::size_t dim = normalized.dim();
  std::vector<double> query(dim);
  const auto va = normalized.row(a);
  const auto vb = normalized.row(b);
  const auto vc = normalized.row(c);
  for (std::size_t d = 0; d < dim; ++d) query[d] = vb[d] + vc[d] - va[d];

  bool found = false;
  DocId best = 0;
  double best_score = 0.0;
  for (std::size_t x = 0; x < normalized.rows(); ++x) {
    if (x == a || x == b || x == c) continue;
    const double score = Dot(query, normalized.row(x));
    if (!found || score > best_score) {
      found = true;
      best = static_cast<DocId>(x);
      best_score = score;
    }
  }
  return best;
}

DocId AnswerQuestion(DocId a, DocId b, DocId c, const AnalogyIndex& index,
                     std::span<double> scratch) {
  index.OffsetScores(a, b, c, scratch);
  bool found = false;
  DocId best = 0;
  double best_score = 0.0;
  for (std::size_t x = 0; x < index.size(); ++x) {
    if (x == a || x == b || x == c) continue;
    if (!found || scratch[x] > best_score) {
      found = true;
      best = static_cast<DocId>(x);
      best_score = scratch[x];
    }
  }
  return best;
}

double EvalReport::Row::accuracy() const {
  return asked == 0 ? 0.0
                    : 100.0 * static_cast<double>(correct) / static_cast<double>(asked);
}

std::size_t EvalReport::total_asked() const {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.asked;
  return n;
}

std::size_t EvalReport::total_correct() const {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.correct;
  return n;
}

double EvalReport::total_accuracy() const {
  return Row{"total", total_asked(), total_correct()}.accuracy();
}

void EvalReport::WriteTsv(std::ostream& out) const {
  out << "relation\tasked\tcorrect\taccuracy\n";
  for (const auto& r : rows_) {
    out << r.relation << '\t' << r.asked << '\t' << r.correct << '\t'
        << Percent(r.accuracy()) << '\n';
  }
  out << "total\t" << total_asked() << '\t' << total_correct() << '\t'
      << Percent(total_accuracy()) << '\n';
}

void EvalReport::WriteTable(std::ostream& out) const {
  std::size_t width = std::string("relation").size();
  for (const auto& r : rows_) width = std::max(width, r.relation.size());
  auto line = [&](const std::string& name, const std::string& asked,
                  const std::string& correct, const std::string& acc) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "  %8s  %8s  %8s", asked.c_str(),
                  correct.c_str(), acc.c_str());
    out << name << std::string(width - name.size(), ' ') << buffer << '\n';
  };
  line("relation", "asked", "correct", "accuracy");
  out << std::string(width + 30, '-') << '\n';
  for (const auto& r : rows_) {
    line(r.relation, std::to_string(r.asked), std::to_string(r.correct),
         Percent(r.accuracy()));
  }
  out << std::string(width + 30, '-') << '\n';
  line("total", std::to_string(total_asked()), std::to_string(total_correct()),
       Percent(total_accuracy()));
}

EvalReport Evaluate(const AnalogyTestSet& testset, const AnalogyIndex& index,
                    std::size_t workers) {
  Require(workers >= 1, "evaluation needs at least one worker");
  struct Item {
    std::size_t relation;
    const AnalogyQuestion* question;
  };
  std::vector<Item> items;
  const auto& relations = testset.relations();
  for (std::size_t r = 0; r < relations.size(); ++r) {
    for (const auto& q : relations[r].questions) {
      for (DocId id : {q.a, q.b, q.c, q.answer}) {
        if (id >= index.size()) {
          Fail(ErrorCategory::kData,
               "question in '" + relations[r].name + "' (" + std::to_string(q.a) +
                   ", " + std::to_string(q.b) + ", " + std::to_string(q.c) + ", " +
                   std::to_string(q.answer) + ") references doc id " +
                   std::to_string(id) + " beyond " + std::to_string(index.size()) +
                   " vectors");
        }
      }
      items.push_back({r, &q});
    }
  }

  std::vector<char> correct(items.size(), 0);
  auto run = [&](std::size_t begin, std::size_t end) {
    std::vector<double> scratch(index.size());
    for (std::size_t i = begin; i < end; ++i) {
      const AnalogyQuestion& q = *items[i].question;
      correct[i] = AnswerQuestion(q.a, q.b, q.c, index, scratch) == q.answer;
    }
  };
  workers = std::min(workers, std::max<std::size_t>(items.size(), 1));
  if (workers == 1) {
    run(0, items.size());
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back(run, items.size() * w / workers,
                           items.size() * (w + 1) / workers);
    }
  }

  EvalReport report;
  std::vector<EvalReport::Row> rows(relations.size());
  for (std::size_t r = 0; r < relations.size(); ++r) {
    rows[r].relation = relations[r].name;
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    ++rows[items[i].relation].asked;
    rows[items[i].relation].correct += correct[i];
  }
  for (auto& row : rows) report.Add(std::move(row));
  return report;
}

EvalReport Evaluate(const AnalogyTestSet& testset, const DenseVectorSet& vectors,
                    std::size_t workers) {
  return Evaluate(testset, DenseAnalogyIndex(vectors), workers);
}

}  // namespace docanalogy
