#include "ctp/kmeans.hpp"

#include "ctp/random.hpp"

#include <limits>

namespace ctp {

namespace {

void normalize_in_place(MatrixXd& rows) {
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    const double norm = rows.row(i).norm();
    if (norm > 0.0) rows.row(i) /= norm;
  }
}

// Centroid j = mean of rows assigned to j. Accumulates in row order.
MatrixXd cluster_means(const MatrixXd& rows, std::span<const int> assignments, int k) {
  MatrixXd sums = MatrixXd::Zero(k, rows.cols());
  VectorXd counts = VectorXd::Zero(k);
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    const int c = assignments[static_cast<std::size_t>(i)];
    sums.row(c) += rows.row(i);
    counts(c) += 1.0;
  }
  for (int j = 0; j < k; ++j)
    if (counts(j) > 0) sums.row(j) /= counts(j);
  return sums;
}

// Moves the row farthest from its own centroid into each empty cluster. Donor
// clusters keep at least one member.
void repair_empty_clusters(const MatrixXd& rows, std::vector<int>& assignments, const MatrixXd& centroids, int k) {
  std::vector<int> sizes(static_cast<std::size_t>(k), 0);
  for (int a : assignments) ++sizes[static_cast<std::size_t>(a)];
  for (int j = 0; j < k; ++j) {
    if (sizes[static_cast<std::size_t>(j)] > 0) continue;
    Eigen::Index far = -1;
    double far_d = -1.0;
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
      const int c = assignments[static_cast<std::size_t>(i)];
      if (sizes[static_cast<std::size_t>(c)] < 2) continue;
      const double d = squared_distance(rows.row(i), centroids.row(c));
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    // k <= n guarantees a donor exists.
    const int donor = assignments[static_cast<std::size_t>(far)];
    --sizes[static_cast<std::size_t>(donor)];
    ++sizes[static_cast<std::size_t>(j)];
    assignments[static_cast<std::size_t>(far)] = j;
  }
}

}  // namespace

std::vector<std::size_t> KMeansModel::cluster_sizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(k()), 0);
  for (int a : assignments) ++sizes[static_cast<std::size_t>(a)];
  return sizes;
}

double kmeans_objective(const FeatureMatrix& matrix, const MatrixXd& centroids, std::span<const int> assignments) {
  if (static_cast<Eigen::Index>(matrix.n_cols) != centroids.cols())
    throw Error(ErrorCode::DimensionMismatch, "centroid dimension differs from matrix columns");
  return kmeans_objective(to_dense(matrix), centroids, assignments);
}

MatrixXd prepare_rows(const FeatureMatrix& matrix, bool normalize_rows) {
  MatrixXd rows = to_dense(matrix);
  if (normalize_rows) normalize_in_place(rows);
  return rows;
}

int lloyd_iteration(const MatrixXd& rows, KMeansModel& model) {
  const int k = model.k();
  int moved = 0;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    const int c = nearest_centroid(rows.row(i).transpose(), model.centroids);
    auto& a = model.assignments[static_cast<std::size_t>(i)];
    if (c != a) {
      a = c;
      ++moved;
    }
  }
  repair_empty_clusters(rows, model.assignments, model.centroids, k);
  model.centroids = cluster_means(rows, model.assignments, k);
  model.objective = kmeans_objective(rows, model.centroids, model.assignments);
  return moved;
}

KMeansModel kmeans_fit(const MatrixXd& rows, const KMeansConfig& config) {
  if (rows.rows() == 0 || rows.cols() == 0) throw Error(ErrorCode::EmptyMatrix, "cannot cluster an empty matrix");
  if (config.k < 1) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
  if (config.k > rows.rows())
    throw Error(ErrorCode::KTooLarge, "k=" + std::to_string(config.k) + " exceeds " + std::to_string(rows.rows()) + " rows");
  if (config.max_iterations < 1) throw Error(ErrorCode::InvalidArgument, "max_iterations must be at least 1");

  MatrixXd data = rows;
  if (config.normalize_rows) normalize_in_place(data);

  const auto n = static_cast<std::size_t>(data.rows());
  const int k = config.k;
  KMeansModel model;
  model.normalize_rows = config.normalize_rows;
  model.assignments.assign(n, 0);

  // Random partition: the first k rows of a permutation seed one group each,
  // every other row joins a uniformly drawn group.
  Rng rng(config.seed);
  const auto perm = rng.permutation(n);
  for (std::size_t i = 0; i < n; ++i) {
    model.assignments[perm[i]] = i < static_cast<std::size_t>(k) ? static_cast<int>(i)
                                                                 : static_cast<int>(rng.uniform_index(static_cast<std::size_t>(k)));
  }
  model.centroids = cluster_means(data, model.assignments, k);
  model.objective = kmeans_objective(data, model.centroids, model.assignments);
  model.objective_trace.push_back(model.objective);

  while (model.iterations_run < config.max_iterations) {
    const int moved = lloyd_iteration(data, model);
    ++model.iterations_run;
    model.objective_trace.push_back(model.objective);
    if (moved == 0) {
      model.converged = true;
      break;
    }
  }
  return model;
}

KMeansModel kmeans_fit(const FeatureMatrix& matrix, const KMeansConfig& config) {
  if (matrix.n_rows() == 0 || matrix.n_cols == 0) throw Error(ErrorCode::EmptyMatrix, "cannot cluster an empty matrix");
  return kmeans_fit(to_dense(matrix), config);
}

int assign_nearest(const KMeansModel& model, const VectorXd& row) {
  if (row.size() != model.centroids.cols())
    throw Error(ErrorCode::DimensionMismatch, "row has " + std::to_string(row.size()) + " columns, centroids have " +
                                                  std::to_string(model.centroids.cols()));
  if (!model.normalize_rows) return nearest_centroid(row, model.centroids);
  VectorXd x = row;
  const double norm = x.norm();
  if (norm > 0.0) x /= norm;
  return nearest_centroid(x, model.centroids);
}

int assign_nearest(const KMeansModel& model, const SparseRow& row, std::size_t n_cols) {
  if (static_cast<Eigen::Index>(n_cols) != model.centroids.cols())
    throw Error(ErrorCode::DimensionMismatch, "row dimension differs from centroids");
  return assign_nearest(model, to_dense(row, n_cols));
}

}  // namespace ctp
