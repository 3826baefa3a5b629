#include "docanalogy/compose.h"

#include <utility>

#include "docanalogy/error.h"

namespace docanalogy {

DenseVectorSet BoweCompose(const SparseDocTermMatrix& x,
                           const DenseVectorSet& word_vectors,
                           std::vector<std::string> doc_labels) {
  Require(x.n_words() == word_vectors.rows(),
          "BOWE: matrix has " + std::to_string(x.n_words()) +
              " word columns but " + std::to_string(word_vectors.rows()) +
              " word vectors were given");
  if (doc_labels.empty()) doc_labels = IndexLabels(x.n_docs());
  Require(doc_labels.size() == x.n_docs(), "BOWE: label count mismatch");

  const std::size_t dim = word_vectors.dim();
  DenseVectorSet docs(std::move(doc_labels), dim);
  for (std::size_t i = 0; i < x.n_docs(); ++i) {
    auto out = docs.row(i);
    for (const auto& e : x.row(i)) {
      const auto w = word_vectors.row(e.word);
      for (std::size_t d = 0; d < dim; ++d) out[d] += e.weight * w[d];
    }
  }
  return docs;
}

}  // namespace docanalogy
