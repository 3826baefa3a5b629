#include "docanalogy/io.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "docanalogy/error.h"

namespace docanalogy {
namespace {

void AppendNumber(std::string& out, double v) {
  char buffer[32];
  const int n = std::snprintf(buffer, sizeof(buffer), "%.9g", v);
  out.append(buffer, static_cast<std::size_t>(n));
}

double ParseDouble(std::string_view text, std::size_t line_number) {
  // strtod accepts everything %.9g produces, including inf/nan spellings.
  std::string copy(text);
  char* end = nullptr;
  const double v = std::strtod(copy.c_str(), &end);
  if (copy.empty() || end != copy.c_str() + copy.size()) {
    Fail(ErrorCategory::kFormat, "vector file line " + std::to_string(line_number) +
                                     ": bad number '" + copy + "'");
  }
  return v;
}

std::vector<std::string_view> SplitSpaces(std::string_view text) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    const std::size_t start = pos;
    while (pos < text.size() && text[pos] != ' ') ++pos;
    if (pos > start) fields.push_back(text.substr(start, pos - start));
  }
  return fields;
}

}  // namespace

void WriteVectors(const DenseVectorSet& vectors, std::ostream& out) {
  out << vectors.rows() << ' ' << vectors.dim() << '\n';
  std::string line;
  for (std::size_t i = 0; i < vectors.rows(); ++i) {
    line = vectors.label(i);
    line += '\t';
    const auto row = vectors.row(i);
    for (std::size_t d = 0; d < row.size(); ++d) {
      if (d > 0) line += ' ';
      AppendNumber(line, row[d]);
    }
    line += '\n';
    out << line;
  }
}

void WriteSparseVectors(const SparseDocTermMatrix& rows,
                        const std::vector<std::string>& labels, std::ostream& out) {
  Require(labels.size() == rows.n_docs(), "sparse vector labels mismatch rows");
  out << rows.n_docs() << ' ' << rows.n_words() << " sparse\n";
  std::string line;
  for (std::size_t i = 0; i < rows.n_docs(); ++i) {
    line = labels[i];
    line += '\t';
    bool first = true;
    for (const auto& e : rows.row(i)) {
      if (!first) line += ' ';
      first = false;
      line += std::to_string(e.word);
      line += ':';
      AppendNumber(line, e.weight);
    }
    line += '\n';
    out << line;
  }
}

LoadedVectors ReadVectors(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) Fail(ErrorCategory::kFormat, "empty vector file");
  const auto header = SplitSpaces(line);
  std::size_t rows = 0;
  std::size_t cols = 0;
  bool sparse = false;
  auto parse_size = [&](std::string_view text, std::size_t* value) {
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), *value);
    return ec == std::errc() && ptr == text.data() + text.size();
  };
  if (header.size() == 3 && header[2] == "sparse") {
    sparse = true;
  } else if (header.size() != 2) {
    Fail(ErrorCategory::kFormat, "vector file header must be 'M dim'");
  }
  if (!parse_size(header[0], &rows) || !parse_size(header[1], &cols) || cols == 0) {
    Fail(ErrorCategory::kFormat, "vector file header must be 'M dim'");
  }

  LoadedVectors loaded;
  loaded.labels.reserve(rows);
  std::vector<double> dense;
  std::vector<std::size_t> offsets{0};
  std::vector<SparseDocTermMatrix::Entry> entries;
  if (!sparse) dense.reserve(rows * cols);

  std::size_t line_number = 1;
  while (loaded.labels.size() < rows && std::getline(in, line)) {
    ++line_number;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      Fail(ErrorCategory::kFormat, "vector file line " + std::to_string(line_number) +
                                       ": missing TAB after label");
    }
    loaded.labels.push_back(line.substr(0, tab));
    const auto fields = SplitSpaces(std::string_view(line).substr(tab + 1));
    if (sparse) {
      for (std::string_view field : fields) {
        const auto colon = field.find(':');
        std::size_t word = 0;
        if (colon == std::string_view::npos ||
            !parse_size(field.substr(0, colon), &word) || word >= cols) {
          Fail(ErrorCategory::kFormat, "vector file line " +
                                           std::to_string(line_number) +
                                           ": bad sparse entry");
        }
        entries.push_back({static_cast<WordId>(word),
                           ParseDouble(field.substr(colon + 1), line_number)});
      }
      offsets.push_back(entries.size());
    } else {
      if (fields.size() != cols) {
        Fail(ErrorCategory::kFormat, "vector file line " + std::to_string(line_number) +
                                         ": expected " + std::to_string(cols) +
                                         " values, found " +
                                         std::to_string(fields.size()));
      }
      for (std::string_view field : fields) {
        dense.push_back(ParseDouble(field, line_number));
      }
    }
  }
  if (loaded.labels.size() != rows) {
    Fail(ErrorCategory::kFormat, "vector file declares " + std::to_string(rows) +
                                     " rows but holds " +
                                     std::to_string(loaded.labels.size()));
  }
  if (sparse) {
    loaded.data = SparseDocTermMatrix(rows, cols, MatrixKind::kTfidf,
                                      std::move(offsets), std::move(entries));
  } else {
    loaded.data = DenseVectorSet(loaded.labels, cols, std::move(dense));
  }
  return loaded;
}

LoadedVectors ReadVectorsFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCategory::kIo, "cannot open vector file: " + path);
  return ReadVectors(in);
}

DenseVectorSet ReadDenseVectorsFile(const std::string& path) {
  LoadedVectors loaded = ReadVectorsFile(path);
  if (loaded.sparse()) {
    Fail(ErrorCategory::kFormat, "expected a dense vector file: " + path);
  }
  return std::get<DenseVectorSet>(std::move(loaded.data));
}

void WriteVectorsFile(const DenseVectorSet& vectors, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCategory::kIo, "cannot write vector file: " + path);
  WriteVectors(vectors, out);
  if (!out) Fail(ErrorCategory::kIo, "write failed: " + path);
}

std::string Fnv1aHex(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(hash));
  return buffer;
}

std::string ReadFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCategory::kIo, "cannot open file: " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void WriteFileBytes(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCategory::kIo, "cannot write file: " + path);
  out << bytes;
  if (!out) Fail(ErrorCategory::kIo, "write failed: " + path);
}

std::string FileChecksum(const std::string& path) {
  return Fnv1aHex(ReadFileBytes(path));
}

}  // namespace docanalogy
