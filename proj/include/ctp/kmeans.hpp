#ifndef CTP_KMEANS_HPP
#define CTP_KMEANS_HPP

#include "ctp/common.hpp"
#include "ctp/featurizer.hpp"

#include <span>
#include <vector>

namespace ctp {

struct KMeansConfig {
  int k = 2;
  Seed seed = 0;
  int max_iterations = 100;
  /// Scale every row to unit L2 norm before clustering and routing.
  bool normalize_rows = false;
};

struct KMeansModel {
  MatrixXd centroids;            // k x n_cols
  std::vector<int> assignments;  // one cluster id per fitted row
  double objective = 0.0;
  int iterations_run = 0;
  bool converged = false;
  bool normalize_rows = false;
  /// J after the initial partition, then after every centroid update.
  std::vector<double> objective_trace;

  int k() const { return static_cast<int>(centroids.rows()); }
  std::vector<std::size_t> cluster_sizes() const;
};

/// Squared Euclidean distance between two same-shaped expressions.
template <typename DerivedA, typename DerivedB>
double squared_distance(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return (a.derived().template cast<double>() - b.derived().template cast<double>()).squaredNorm();
}

/// argmin_j ||x - c_j||^2, ties to the lowest j.
template <typename DerivedX, typename DerivedC>
int nearest_centroid(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedC>& centroids) {
  int best = 0;
  double best_d = squared_distance(x.derived().transpose(), centroids.row(0));
  for (Eigen::Index j = 1; j < centroids.rows(); ++j) {
    const double d = squared_distance(x.derived().transpose(), centroids.row(j));
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(j);
    }
  }
  return best;
}

/// J = sum over rows of ||x_i - c_{a(i)}||^2, accumulated in row order.
template <typename DerivedX, typename DerivedC>
double kmeans_objective(const Eigen::MatrixBase<DerivedX>& rows, const Eigen::MatrixBase<DerivedC>& centroids,
                        std::span<const int> assignments) {
  if (rows.cols() != centroids.cols())
    throw Error(ErrorCode::DimensionMismatch, "centroid dimension differs from row dimension");
  if (static_cast<Eigen::Index>(assignments.size()) != rows.rows())
    throw Error(ErrorCode::DimensionMismatch, "assignments do not cover every row");
  double j = 0.0;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    const int c = assignments[static_cast<std::size_t>(i)];
    if (c < 0 || c >= centroids.rows()) throw Error(ErrorCode::DimensionMismatch, "assignment outside [0,k)");
    j += squared_distance(rows.row(i), centroids.row(c));
  }
  return j;
}

double kmeans_objective(const FeatureMatrix& matrix, const MatrixXd& centroids, std::span<const int> assignments);

/// Lloyd's algorithm from a random partition into k non-empty groups.
KMeansModel kmeans_fit(const MatrixXd& rows, const KMeansConfig& config);
KMeansModel kmeans_fit(const FeatureMatrix& matrix, const KMeansConfig& config);

/// One reassignment + centroid update on `rows`. Returns the number of rows that moved.
int lloyd_iteration(const MatrixXd& rows, KMeansModel& model);

int assign_nearest(const KMeansModel& model, const SparseRow& row, std::size_t n_cols);
int assign_nearest(const KMeansModel& model, const VectorXd& row);

/// Rows as the model sees them (L2-normalized when the model asks for it).
MatrixXd prepare_rows(const FeatureMatrix& matrix, bool normalize_rows);

}  // namespace ctp

#endif  // CTP_KMEANS_HPP
