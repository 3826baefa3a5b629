#ifndef DOCANALOGY_COMPOSE_H_
#define DOCANALOGY_COMPOSE_H_

#include <string>
#include <vector>

#include "docanalogy/dense_vectors.h"
#include "docanalogy/weighting.h"

namespace docanalogy {

// D = X W: each document is the weighted sum of its words' vectors. Rows of
// `word_vectors` are indexed by word id. Empty `doc_labels` means index labels.
DenseVectorSet BoweCompose(const SparseDocTermMatrix& x,
                           const DenseVectorSet& word_vectors,
                           std::vector<std::string> doc_labels = {});

}  // namespace docanalogy

#endif  // DOCANALOGY_COMPOSE_H_
