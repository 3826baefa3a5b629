#ifndef DOCANALOGY_DENSE_VECTORS_H_
#define DOCANALOGY_DENSE_VECTORS_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace docanalogy {

// Row-labelled M x dim matrix of doubles, stored row-major. Holds document
// vectors, word vectors and scaled LSI coordinates alike.
class DenseVectorSet {
 public:
  DenseVectorSet() = default;
  DenseVectorSet(std::vector<std::string> labels, std::size_t dim);
  DenseVectorSet(std::vector<std::string> labels, std::size_t dim,
                 std::vector<double> data);

  std::size_t rows() const { return labels_.size(); }
  std::size_t dim() const { return dim_; }

  std::span<double> row(std::size_t i) {
    return {data_.data() + i * dim_, dim_};
  }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }

  double& at(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  void set_labels(std::vector<std::string> labels);

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  // True when every entry is finite.
  bool finite() const;

  bool operator==(const DenseVectorSet&) const = default;

 private:
  std::vector<std::string> labels_;
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

// Numeric labels "0".."n-1", used when rows have no natural name.
std::vector<std::string> IndexLabels(std::size_t n);

double Dot(std::span<const double> a, std::span<const double> b);
double Norm(std::span<const double> a);
double Cosine(std::span<const double> a, std::span<const double> b);

}  // namespace docanalogy

#endif  // DOCANALOGY_DENSE_VECTORS_H_
