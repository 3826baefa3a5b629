#include "docanalogy/dense_vectors.h"

#include <cmath>
#include <utility>

#include "docanalogy/error.h"

namespace docanalogy {

std::string_view CategoryName(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kParameter: return "parameter";
    case ErrorCategory::kFormat: return "format";
    case ErrorCategory::kIo: return "io";
    case ErrorCategory::kData: return "data";
    case ErrorCategory::kNumeric: return "numeric";
  }
  return "unknown";
}

DenseVectorSet::DenseVectorSet(std::vector<std::string> labels, std::size_t dim)
    : labels_(std::move(labels)), dim_(dim), data_(labels_.size() * dim, 0.0) {
  Require(dim >= 1, "vector dimension must be at least 1");
}

DenseVectorSet::DenseVectorSet(std::vector<std::string> labels, std::size_t dim,
                               std::vector<double> data)
    : labels_(std::move(labels)), dim_(dim), data_(std::move(data)) {
  Require(dim >= 1, "vector dimension must be at least 1");
  Require(data_.size() == labels_.size() * dim_,
          "vector data size does not match rows x dim");
}

void DenseVectorSet::set_labels(std::vector<std::string> labels) {
  Require(labels.size() == labels_.size(), "label count does not match rows");
  labels_ = std::move(labels);
}

bool DenseVectorSet::finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

std::vector<std::string> IndexLabels(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return labels;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double Norm(std::span<const double> a) { return std::sqrt(Dot(a, a)); }

double Cosine(std::span<const double> a, std::span<const double> b) {
  const double na = Norm(a);
  const double nb = Norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return Dot(a, b) / (na * nb);
}

}  // namespace docanalogy
