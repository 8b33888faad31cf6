#include "prototopic/clustering.hpp"

#include <cmath>
#include <cstring>

#include "prototopic/errors.hpp"
#include "prototopic/kernels.hpp"
#include "prototopic/rng.hpp"

namespace prototopic {

namespace {

std::vector<double> kmeanspp_seed(const EmbeddingMatrix& matrix, int k, Rng& rng) {
  const int n = static_cast<int>(matrix.rows());
  const int dim = matrix.dim;
  std::vector<double> centroids(static_cast<std::size_t>(k) * dim);
  std::vector<double> d2(n, 0.0);

  const int first = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n)));
  std::memcpy(centroids.data(), matrix.row(first).data(), sizeof(double) * dim);

  for (int c = 1; c < k; ++c) {
    const double* last = centroids.data() + static_cast<std::size_t>(c - 1) * dim;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      const double* x = matrix.row(i).data();
      double d = 0.0;
      for (int j = 0; j < dim; ++j) {
        const double diff = x[j] - last[j];
        d += diff * diff;
      }
      if (c == 1 || d < d2[i]) d2[i] = d;
      total += d2[i];
    }
    int pick;
    if (total > 0.0) {
      const double r = rng.uniform() * total;
      double cum = 0.0;
      pick = n - 1;
      for (int i = 0; i < n; ++i) {
        cum += d2[i];
        if (cum > r) {
          pick = i;
          break;
        }
      }
    } else {
      // All points coincide with chosen centroids.
      pick = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n)));
    }
    std::memcpy(centroids.data() + static_cast<std::size_t>(c) * dim,
                matrix.row(pick).data(), sizeof(double) * dim);
  }
  return centroids;
}

}  // namespace

ClusterModel kmeans_lloyd(const EmbeddingMatrix& matrix,
                          std::vector<double> initial_centroids, int k,
                          int max_iter, double tol) {
  const int n = static_cast<int>(matrix.rows());
  const int dim = matrix.dim;
  if (k <= 0) throw ValidationError("k must be positive");
  if (k > n) {
    throw ValidationError("k = " + std::to_string(k) + " exceeds document count " +
                          std::to_string(n));
  }
  if (max_iter < 1) throw ValidationError("max_iter must be >= 1");
  if (initial_centroids.size() != static_cast<std::size_t>(k) * dim) {
    throw ValidationError("initial centroid shape mismatch");
  }

  ClusterModel model;
  model.k = k;
  model.dim = dim;
  model.centroids = std::move(initial_centroids);
  model.labels.assign(n, 0);
  std::vector<double> dist2(n, 0.0);
  std::vector<double> new_centroids(static_cast<std::size_t>(k) * dim);
  std::vector<int> counts(k, 0);

  for (int it = 0; it < max_iter; ++it) {
    kernels::nearest_assign(matrix.values.data(), n, dim, model.centroids.data(),
                            k, model.labels.data(), dist2.data());
    double inertia = 0.0;
    for (int i = 0; i < n; ++i) inertia += dist2[i];
    model.inertia_trace.push_back(inertia);
    model.iterations_run = it + 1;

    kernels::group_means(matrix.values.data(), n, dim, model.labels.data(), k,
                         new_centroids.data(), counts.data());

    // Re-seed empty clusters at the point farthest from its centroid.
    std::vector<bool> taken(n, false);
    for (int g = 0; g < k; ++g) {
      if (counts[g] != 0) continue;
      int far = -1;
      double far_d = -1.0;
      for (int i = 0; i < n; ++i) {
        if (!taken[i] && dist2[i] > far_d) {
          far_d = dist2[i];
          far = i;
        }
      }
      taken[far] = true;
      std::memcpy(new_centroids.data() + static_cast<std::size_t>(g) * dim,
                  matrix.row(far).data(), sizeof(double) * dim);
    }

    double max_disp = 0.0;
    for (int g = 0; g < k; ++g) {
      double d = 0.0;
      for (int j = 0; j < dim; ++j) {
        const double diff = new_centroids[static_cast<std::size_t>(g) * dim + j] -
                            model.centroids[static_cast<std::size_t>(g) * dim + j];
        d += diff * diff;
      }
      max_disp = std::max(max_disp, std::sqrt(d));
    }
    model.centroids = new_centroids;
    if (max_disp < tol) break;
  }

  // Final assignment against the final centroids.
  kernels::nearest_assign(matrix.values.data(), n, dim, model.centroids.data(), k,
                          model.labels.data(), dist2.data());
  model.inertia = 0.0;
  for (int i = 0; i < n; ++i) model.inertia += dist2[i];
  model.inertia_trace.push_back(model.inertia);

  for (const double c : model.centroids) {
    if (!std::isfinite(c)) throw NumericError("non-finite centroid after k-means");
  }
  return model;
}

ClusterModel kmeans_fit(const EmbeddingMatrix& matrix, int k, std::uint64_t seed,
                        int max_iter, double tol) {
  const int n = static_cast<int>(matrix.rows());
  if (k <= 0) throw ValidationError("k must be positive");
  if (k > n) {
    throw ValidationError("k = " + std::to_string(k) + " exceeds document count " +
                          std::to_string(n));
  }
  Rng rng(seed);
  return kmeans_lloyd(matrix, kmeanspp_seed(matrix, k, rng), k, max_iter, tol);
}

std::vector<int> kmeans_assign(const EmbeddingMatrix& matrix,
                               const std::vector<double>& centroids, int k) {
  const int n = static_cast<int>(matrix.rows());
  if (centroids.size() != static_cast<std::size_t>(k) * matrix.dim) {
    throw ValidationError("centroid dim does not match embedding dim");
  }
  std::vector<int> labels(n, 0);
  kernels::nearest_assign(matrix.values.data(), n, matrix.dim, centroids.data(), k,
                          labels.data(), nullptr);
  return labels;
}

}  // namespace prototopic
