#ifndef DOCANALOGY_IO_H_
#define DOCANALOGY_IO_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "docanalogy/dense_vectors.h"
#include "docanalogy/weighting.h"

namespace docanalogy {

// Dense vector file: "M dim" header, then "label<TAB>v1 v2 ... vdim" with 9
// significant digits. Sparse BOW rows use the header "M |V| sparse" and
// "label<TAB>word:weight ..." lines.
void WriteVectors(const DenseVectorSet& vectors, std::ostream& out);
void WriteSparseVectors(const SparseDocTermMatrix& rows,
                        const std::vector<std::string>& labels, std::ostream& out);

struct LoadedVectors {
  std::vector<std::string> labels;
  std::variant<DenseVectorSet, SparseDocTermMatrix> data;

  bool sparse() const { return std::holds_alternative<SparseDocTermMatrix>(data); }
};

LoadedVectors ReadVectors(std::istream& in);
LoadedVectors ReadVectorsFile(const std::string& path);
DenseVectorSet ReadDenseVectorsFile(const std::string& path);

void WriteVectorsFile(const DenseVectorSet& vectors, const std::string& path);

// 64-bit FNV-1a over the file bytes, as 16 hex digits.
std::string FileChecksum(const std::string& path);
std::string Fnv1aHex(const std::string& bytes);

std::string ReadFileBytes(const std::string& path);
void WriteFileBytes(const std::string& path, const std::string& bytes);

}  // namespace docanalogy

#endif  // DOCANALOGY_IO_H_
