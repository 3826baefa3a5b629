#include "docanalogy/factorization.h"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <random>

#include "docanalogy/error.h"

namespace docanalogy {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor>;

constexpr double kMaxDenseEntries = 5e7;

SparseRows ToEigen(const SparseDocTermMatrix& x) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(x.nnz());
  for (std::size_t i = 0; i < x.n_docs(); ++i) {
    for (const auto& e : x.row(i)) {
      triplets.emplace_back(static_cast<int>(i), static_cast<int>(e.word), e.weight);
    }
  }
  SparseRows m(static_cast<Eigen::Index>(x.n_docs()),
               static_cast<Eigen::Index>(x.n_words()));
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

MatrixXd OrthonormalBasis(const MatrixXd& y) {
  Eigen::HouseholderQR<MatrixXd> qr(y);
  return qr.householderQ() * MatrixXd::Identity(y.rows(), y.cols());
}

struct Svd {
  MatrixXd u;
  VectorXd s;
  MatrixXd v;
};

Svd ExactSvd(const SparseRows& x) {
  const MatrixXd dense(x);
  Eigen::BDCSVD<MatrixXd> svd(dense, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

Svd RandomizedSvd(const SparseRows& x, std::size_t k, const LsiOptions& options) {
  const auto rank_cap = std::min(x.rows(), x.cols());
  const auto width = std::min<Eigen::Index>(
      static_cast<Eigen::Index>(k + options.oversampling), rank_cap);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd omega(x.cols(), width);
  for (Eigen::Index j = 0; j < omega.cols(); ++j) {
    for (Eigen::Index i = 0; i < omega.rows(); ++i) omega(i, j) = normal(rng);
  }

  MatrixXd q = OrthonormalBasis(x * omega);
  for (std::size_t it = 0; it < options.power_iterations; ++it) {
    const MatrixXd z = OrthonormalBasis(x.transpose() * q);
    q = OrthonormalBasis(x * z);
  }

  const MatrixXd b = q.transpose() * x;  // width x |V|
  Eigen::BDCSVD<MatrixXd> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {q * svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

}  // namespace

LsiResult LsiFit(const SparseDocTermMatrix& x, std::size_t k,
                 const LsiOptions& options) {
  const std::size_t rank_cap = std::min(x.n_docs(), x.n_words());
  Require(k >= 1 && k <= rank_cap,
          "LSI rank k must lie in [1, min(N, |V|)] = [1, " +
              std::to_string(rank_cap) + "]");

  const SparseRows m = ToEigen(x);
  bool exact = options.method == SvdMethod::kExact;
  if (options.method == SvdMethod::kAuto) {
    exact = rank_cap <= options.exact_threshold &&
            static_cast<double>(x.n_docs()) * static_cast<double>(x.n_words()) <=
                kMaxDenseEntries;
  }
  Svd svd = exact ? ExactSvd(m) : RandomizedSvd(m, k, options);

  LsiResult result{DenseVectorSet(IndexLabels(x.n_docs()), k), {},
                   DenseVectorSet(IndexLabels(x.n_words()), k)};
  result.singular_values.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    const auto col = static_cast<Eigen::Index>(c);
    Eigen::Index pivot = 0;
    svd.v.col(col).cwiseAbs().maxCoeff(&pivot);
    const double sign = svd.v(pivot, col) < 0.0 ? -1.0 : 1.0;
    const double sigma = std::max(svd.s(col), 0.0);
    result.singular_values[c] = sigma;
    for (std::size_t i = 0; i < x.n_docs(); ++i) {
      result.doc_vectors.at(i, c) =
          sign * sigma * svd.u(static_cast<Eigen::Index>(i), col);
    }
    for (std::size_t j = 0; j < x.n_words(); ++j) {
      result.word_basis.at(j, c) = sign * svd.v(static_cast<Eigen::Index>(j), col);
    }
  }
  return result;
}

namespace {

// ||X||^2 - 2 <X W, D> + <D^T D, W^T W>, clamped at zero against cancellation.
double NmfObjective(double x_norm2, const MatrixXd& xw, const MatrixXd& d,
                    const MatrixXd& w) {
  const MatrixXd dtd = d.transpose() * d;
  const MatrixXd wtw = w.transpose() * w;
  const double value = x_norm2 - 2.0 * xw.cwiseProduct(d).sum() +
                       dtd.cwiseProduct(wtw).sum();
  return std::max(value, 0.0);
}

DenseVectorSet ToVectorSet(const MatrixXd& m) {
  DenseVectorSet out(IndexLabels(static_cast<std::size_t>(m.rows())),
                     static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
    }
  }
  return out;
}

}  // namespace

NmfResult NmfFit(const SparseDocTermMatrix& x, std::size_t k,
                 const NmfOptions& options) {
  Require(k >= 1, "NMF rank k must be at least 1");
  Require(options.max_iters >= 1, "NMF max_iters must be at least 1");
  Require(options.tol >= 0.0, "NMF tolerance must be non-negative");
  for (const auto& e : x.entries()) {
    Require(e.weight >= 0.0, "NMF requires a non-negative matrix");
  }

  const SparseRows m = ToEigen(x);
  const SparseRows mt = m.transpose();
  const double cells =
      static_cast<double>(x.n_docs()) * static_cast<double>(x.n_words());
  const double mean = cells > 0.0 ? x.Sum() / cells : 0.0;
  const double scale = std::sqrt(mean / static_cast<double>(k));

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const auto rank = static_cast<Eigen::Index>(k);
  MatrixXd d(m.rows(), rank);
  MatrixXd w(m.cols(), rank);
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = 0; j < rank; ++j) d(i, j) = uniform(rng) * scale;
  }
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    for (Eigen::Index j = 0; j < rank; ++j) w(i, j) = uniform(rng) * scale;
  }

  const double x_norm2 = m.squaredNorm();
  NmfResult result;
  MatrixXd xw = m * w;
  result.objective_trace.push_back(NmfObjective(x_norm2, xw, d, w));

  const double eps = options.epsilon;
  for (std::size_t it = 0; it < options.max_iters; ++it) {
    const MatrixXd xtd = mt * d;
    const MatrixXd w_den = w * (d.transpose() * d);
    w = w.cwiseProduct(xtd).cwiseQuotient((w_den.array() + eps).matrix());

    xw = m * w;
    const MatrixXd d_den = d * (w.transpose() * w);
    d = d.cwiseProduct(xw).cwiseQuotient((d_den.array() + eps).matrix());

    const double previous = result.objective_trace.back();
    const double current = NmfObjective(x_norm2, xw, d, w);
    result.objective_trace.push_back(current);
    if (previous == 0.0 || std::abs(previous - current) < options.tol * previous) {
      break;
    }
  }

  result.doc_factors = ToVectorSet(d);
  result.word_factors = ToVectorSet(w);
  return result;
}

}  // namespace docanalogy
