#include "docanalogy/corpus.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <utility>

#include "docanalogy/error.h"

namespace docanalogy {
namespace {

bool IsUnicodeSpace(char32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

// Decodes one UTF-8 sequence starting at text[pos]. Malformed input yields
// U+FFFD and consumes a single byte.
char32_t DecodeUtf8(std::string_view text, std::size_t pos, std::size_t* length) {
  const auto byte = [&](std::size_t i) {
    return static_cast<unsigned char>(text[i]);
  };
  const unsigned char lead = byte(pos);
  std::size_t n = 0;
  char32_t cp = 0;
  if (lead < 0x80) {
    *length = 1;
    return lead;
  } else if ((lead & 0xE0) == 0xC0) {
    n = 2;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    n = 3;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    n = 4;
    cp = lead & 0x07;
  } else {
    *length = 1;
    return 0xFFFD;
  }
  if (pos + n > text.size()) {
    *length = 1;
    return 0xFFFD;
  }
  for (std::size_t i = 1; i < n; ++i) {
    if ((byte(pos + i) & 0xC0) != 0x80) {
      *length = 1;
      return 0xFFFD;
    }
    cp = (cp << 6) | (byte(pos + i) & 0x3F);
  }
  *length = n;
  return cp;
}

bool KeepToken(std::string_view token) {
  bool all_digits = true;
  for (char c : token) {
    const bool digit = c >= '0' && c <= '9';
    const bool letter = c >= 'a' && c <= 'z';
    if (!digit && !letter && c != '-' && c != '\'') return false;
    all_digits = all_digits && digit;
  }
  return !all_digits;
}

}  // namespace

std::string LowercaseAscii(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::vector<std::string> TokenizeDocument(std::string_view raw_text) {
  const std::string text = LowercaseAscii(raw_text);
  std::vector<std::string> tokens;
  std::size_t start = 0;
  std::size_t pos = 0;
  auto flush = [&](std::size_t end) {
    if (end > start) {
      std::string_view token(text.data() + start, end - start);
      if (KeepToken(token)) tokens.emplace_back(token);
    }
  };
  while (pos < text.size()) {
    std::size_t length = 1;
    const char32_t cp = DecodeUtf8(text, pos, &length);
    if (IsUnicodeSpace(cp)) {
      flush(pos);
      start = pos + length;
    }
    pos += length;
  }
  flush(text.size());
  return tokens;
}

Vocabulary::Vocabulary(std::vector<std::string> tokens,
                       std::vector<std::uint64_t> freqs, std::size_t min_count)
    : tokens_(std::move(tokens)), freqs_(std::move(freqs)), min_count_(min_count) {
  Require(tokens_.size() == freqs_.size(), "vocabulary token/freq size mismatch");
  ids_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!ids_.emplace(tokens_[i], static_cast<WordId>(i)).second) {
      Fail(ErrorCategory::kData, "duplicate vocabulary token '" + tokens_[i] + "'");
    }
  }
}

Vocabulary Vocabulary::Build(std::span<const RawDocument> docs,
                             std::size_t min_count) {
  Require(min_count >= 1, "min_count must be at least 1");
  struct Entry {
    std::uint64_t count = 0;
    std::size_t first_seen = 0;
  };
  std::unordered_map<std::string, Entry> counts;
  std::size_t position = 0;
  for (const RawDocument& doc : docs) {
    for (std::string& token : TokenizeDocument(doc.text)) {
      auto [it, inserted] = counts.try_emplace(std::move(token));
      if (inserted) it->second.first_seen = position;
      ++it->second.count;
      ++position;
    }
  }

  std::vector<std::pair<std::string, Entry>> kept;
  for (auto& [token, entry] : counts) {
    if (entry.count >= min_count) kept.emplace_back(token, entry);
  }
  if (kept.empty()) {
    Fail(ErrorCategory::kData,
         "empty vocabulary: no token occurs at least " +
             std::to_string(min_count) + " times");
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second.count != b.second.count) return a.second.count > b.second.count;
    return a.second.first_seen < b.second.first_seen;
  });

  std::vector<std::string> tokens;
  std::vector<std::uint64_t> freqs;
  tokens.reserve(kept.size());
  freqs.reserve(kept.size());
  for (auto& [token, entry] : kept) {
    tokens.push_back(std::move(token));
    freqs.push_back(entry.count);
  }
  return Vocabulary(std::move(tokens), std::move(freqs), min_count);
}

std::optional<WordId> Vocabulary::Find(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

void Vocabulary::Write(std::ostream& out) const {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    out << tokens_[i] << '\t' << freqs_[i] << '\n';
  }
}

Vocabulary Vocabulary::Read(std::istream& in, std::size_t min_count) {
  std::vector<std::string> tokens;
  std::vector<std::uint64_t> freqs;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    std::uint64_t freq = 0;
    const char* begin = line.data() + (tab == std::string::npos ? 0 : tab + 1);
    const char* end = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(begin, end, freq);
    if (tab == std::string::npos || ec != std::errc() || ptr != end) {
      Fail(ErrorCategory::kFormat,
           "vocabulary line " + std::to_string(line_number) +
               ": expected token<TAB>freq");
    }
    tokens.push_back(line.substr(0, tab));
    freqs.push_back(freq);
  }
  return Vocabulary(std::move(tokens), std::move(freqs), min_count);
}

DocumentCorpus::DocumentCorpus(std::vector<EncodedDocument> docs,
                               std::size_t vocab_size)
    : docs_(std::move(docs)), vocab_size_(vocab_size) {
  by_title_.reserve(docs_.size());
  for (std::size_t i = 0; i < docs_.size(); ++i) {
    EncodedDocument& doc = docs_[i];
    doc.id = static_cast<DocId>(i);
    auto [it, inserted] = by_title_.emplace(doc.title, doc.id);
    if (!inserted) {
      Fail(ErrorCategory::kData,
           "duplicate document title '" + doc.title + "' (documents " +
               std::to_string(it->second) + " and " + std::to_string(i) + ")");
    }
    for (WordId w : doc.tokens) {
      if (w >= vocab_size_) {
        Fail(ErrorCategory::kData, "token id " + std::to_string(w) +
                                       " out of range in document '" +
                                       doc.title + "'");
      }
    }
    total_tokens_ += doc.tokens.size();
  }
}

std::vector<std::string> DocumentCorpus::titles() const {
  std::vector<std::string> out;
  out.reserve(docs_.size());
  for (const auto& doc : docs_) out.push_back(doc.title);
  return out;
}

std::optional<DocId> DocumentCorpus::FindTitle(std::string_view title) const {
  auto it = by_title_.find(std::string(title));
  if (it == by_title_.end()) return std::nullopt;
  return it->second;
}

DocumentCorpus EncodeCorpus(std::span<const RawDocument> docs,
                            const Vocabulary& vocab) {
  std::vector<EncodedDocument> encoded;
  encoded.reserve(docs.size());
  for (const RawDocument& raw : docs) {
    EncodedDocument doc;
    doc.title = LowercaseAscii(raw.title);
    for (const std::string& token : TokenizeDocument(raw.text)) {
      if (auto id = vocab.Find(token)) doc.tokens.push_back(*id);
    }
    encoded.push_back(std::move(doc));
  }
  return DocumentCorpus(std::move(encoded), vocab.size());
}

std::vector<RawDocument> ReadCorpus(std::istream& in) {
  std::vector<RawDocument> docs;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      Fail(ErrorCategory::kFormat,
           "corpus line " + std::to_string(line_number) +
               ": missing TAB between title and text");
    }
    docs.push_back({line.substr(0, tab), line.substr(tab + 1)});
  }
  return docs;
}

std::vector<RawDocument> ReadCorpusFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCategory::kIo, "cannot open corpus file: " + path);
  return ReadCorpus(in);
}

void WriteEncodedCorpus(const DocumentCorpus& corpus, std::ostream& out) {
  for (const auto& doc : corpus.docs()) {
    out << doc.title << '\t';
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
      if (i > 0) out << ' ';
      out << doc.tokens[i];
    }
    out << '\n';
  }
}

DocumentCorpus ReadEncodedCorpus(std::istream& in, std::size_t vocab_size) {
  std::vector<EncodedDocument> docs;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      Fail(ErrorCategory::kFormat, "encoded corpus line " +
                                       std::to_string(line_number) +
                                       ": missing TAB");
    }
    EncodedDocument doc;
    doc.title = line.substr(0, tab);
    const char* p = line.data() + tab + 1;
    const char* end = line.data() + line.size();
    while (p < end) {
      if (*p == ' ') {
        ++p;
        continue;
      }
      WordId id = 0;
      auto [next, ec] = std::from_chars(p, end, id);
      if (ec != std::errc()) {
        Fail(ErrorCategory::kFormat, "encoded corpus line " +
                                         std::to_string(line_number) +
                                         ": bad token id");
      }
      doc.tokens.push_back(id);
      p = next;
    }
    docs.push_back(std::move(doc));
  }
  return DocumentCorpus(std::move(docs), vocab_size);
}

}  // namespace docanalogy
