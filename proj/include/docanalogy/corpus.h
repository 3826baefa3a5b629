#ifndef DOCANALOGY_CORPUS_H_
#define DOCANALOGY_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace docanalogy {

using WordId = std::uint32_t;
using DocId = std::uint32_t;

// One input document before preprocessing.
struct RawDocument {
  std::string title;
  std::string text;
};

// Lowercases, splits on Unicode whitespace and drops tokens that are all
// ASCII digits or that contain anything outside [a-z0-9'-].
std::vector<std::string> TokenizeDocument(std::string_view raw_text);

// ASCII lowercasing; bytes >= 0x80 are left as is.
std::string LowercaseAscii(std::string_view text);

class Vocabulary {
 public:
  static constexpr std::size_t kDefaultMinCount = 20;

  Vocabulary() = default;
  // Takes tokens already in id order. Used by Build and when reloading an
  // exported vocabulary.
  Vocabulary(std::vector<std::string> tokens, std::vector<std::uint64_t> freqs,
             std::size_t min_count);

  // Counts tokens over all documents and keeps those with freq >= min_count.
  // Ids follow descending frequency, ties by first occurrence.
  static Vocabulary Build(std::span<const RawDocument> docs,
                          std::size_t min_count = kDefaultMinCount);

  std::size_t size() const { return tokens_.size(); }
  const std::string& token(WordId id) const { return tokens_[id]; }
  std::uint64_t freq(WordId id) const { return freqs_[id]; }
  std::size_t min_count() const { return min_count_; }
  std::optional<WordId> Find(std::string_view token) const;

  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::vector<std::uint64_t>& freqs() const { return freqs_; }

  // One "token<TAB>freq" line per word in id order.
  void Write(std::ostream& out) const;
  static Vocabulary Read(std::istream& in, std::size_t min_count);

 private:
  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> freqs_;
  std::unordered_map<std::string, WordId> ids_;
  std::size_t min_count_ = kDefaultMinCount;
};

struct EncodedDocument {
  DocId id = 0;
  std::string title;  // lowercased
  std::vector<WordId> tokens;
};

class DocumentCorpus {
 public:
  DocumentCorpus() = default;
  // Validates title uniqueness and token ranges.
  DocumentCorpus(std::vector<EncodedDocument> docs, std::size_t vocab_size);

  std::size_t size() const { return docs_.size(); }
  std::size_t vocab_size() const { return vocab_size_; }
  std::uint64_t total_tokens() const { return total_tokens_; }
  const EncodedDocument& doc(DocId id) const { return docs_[id]; }
  const std::vector<EncodedDocument>& docs() const { return docs_; }
  std::vector<std::string> titles() const;
  std::optional<DocId> FindTitle(std::string_view lowercased_title) const;

 private:
  std::vector<EncodedDocument> docs_;
  std::unordered_map<std::string, DocId> by_title_;
  std::size_t vocab_size_ = 0;
  std::uint64_t total_tokens_ = 0;
};

// Tokenizes each document and maps tokens through the vocabulary, dropping
// out-of-vocabulary ones. Fails on duplicate lowercased titles.
DocumentCorpus EncodeCorpus(std::span<const RawDocument> docs,
                            const Vocabulary& vocab);

// Reads "title<TAB>text" lines. Empty lines are skipped; a line without a TAB
// is a format error carrying its line number.
std::vector<RawDocument> ReadCorpus(std::istream& in);
std::vector<RawDocument> ReadCorpusFile(const std::string& path);

// Encoded corpus persistence: "title<TAB>id id id" per document.
void WriteEncodedCorpus(const DocumentCorpus& corpus, std::ostream& out);
DocumentCorpus ReadEncodedCorpus(std::istream& in, std::size_t vocab_size);

}  // namespace docanalogy

#endif  // DOCANALOGY_CORPUS_H_
