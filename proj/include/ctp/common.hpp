#ifndef CTP_COMMON_HPP
#define CTP_COMMON_HPP

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ctp {

using Seed = std::uint64_t;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using VectorXd = Vector<double>;
using MatrixXd = RowMatrix<double>;

enum class Label : std::uint8_t { Negative = 0, Positive = 1 };

inline int to_int(Label l) { return l == Label::Positive ? 1 : 0; }
inline Label from_bool(bool positive) { return positive ? Label::Positive : Label::Negative; }
std::string_view label_name(Label l);

enum class ErrorCode {
  MissingColumn,
  BadLabel,
  EmptyCorpus,
  EmptyText,
  MalformedCsv,
  TooFewDocuments,
  InvalidArgument,
  EmptyVocabulary,
  KTooLarge,
  EmptyMatrix,
  DimensionMismatch,
  EmptyCounts,
  ShapeMismatch,
  MtryTooLarge,
  VocabMismatch,
  NonFiniteLoss,
  LambdaZero,
  LengthMismatch,
  EmptyInput,
  OneClassOnly,
  IndexOutOfRange,
  IoError,
};

std::string_view error_code_name(ErrorCode code);

/// Single exception type for the library; `code()` distinguishes the failure.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace ctp

#endif  // CTP_COMMON_HPP
