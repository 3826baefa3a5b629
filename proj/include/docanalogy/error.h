#ifndef DOCANALOGY_ERROR_H_
#define DOCANALOGY_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace docanalogy {

// Coarse failure classes. The CLI maps each to its own exit code and prints
// the category name as the first field of the error line.
enum class ErrorCategory {
  kParameter,  // invalid argument or configuration
  kFormat,     // malformed input file
  kIo,         // cannot open/read/write
  kData,       // well-formed input that violates a data invariant
  kNumeric,    // non-finite values during training
};

std::string_view CategoryName(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

[[noreturn]] inline void Fail(ErrorCategory category, const std::string& message) {
  throw Error(category, message);
}

inline void Require(bool condition, const std::string& message) {
  if (!condition) Fail(ErrorCategory::kParameter, message);
}

}  // namespace docanalogy

#endif  // DOCANALOGY_ERROR_H_
