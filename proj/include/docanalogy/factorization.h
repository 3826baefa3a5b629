#ifndef DOCANALOGY_FACTORIZATION_H_
#define DOCANALOGY_FACTORIZATION_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "docanalogy/dense_vectors.h"
#include "docanalogy/weighting.h"

namespace docanalogy {

enum class SvdMethod {
  kAuto,        // exact when the matrix is small enough, randomized otherwise
  kRandomized,  // range finder with power iterations
  kExact,       // dense SVD of the full matrix
};

struct LsiOptions {
  SvdMethod method = SvdMethod::kAuto;
  std::size_t oversampling = 10;
  std::size_t power_iterations = 2;
  // kAuto takes the exact path when min(N, |V|) is at most this.
  std::size_t exact_threshold = 512;
  std::uint64_t seed = 1;
};

struct LsiResult {
  DenseVectorSet doc_vectors;  // rows of U_k * Sigma_k
  std::vector<double> singular_values;
  DenseVectorSet word_basis;  // |V| x k right singular vectors
};

// Truncated SVD of X. Each right singular vector is signed so its
// largest-magnitude entry is positive.
LsiResult LsiFit(const SparseDocTermMatrix& x, std::size_t k,
                 const LsiOptions& options = {});

struct NmfOptions {
  std::size_t max_iters = 200;
  double tol = 1e-4;
  double epsilon = 1e-12;
  std::uint64_t seed = 1;
};

struct NmfResult {
  DenseVectorSet doc_factors;   // D, N x k
  DenseVectorSet word_factors;  // W, |V| x k
  // ||X - D W^T||_F^2 at initialization and after every iteration.
  std::vector<double> objective_trace;
};

// Lee-Seung multiplicative updates for the Frobenius objective.
NmfResult NmfFit(const SparseDocTermMatrix& x, std::size_t k,
                 const NmfOptions& options = {});

}  // namespace docanalogy

#endif  // DOCANALOGY_FACTORIZATION_H_
