#pragma once

#include <cstdint>
#include <vector>

#include "prototopic/embedding.hpp"

namespace prototopic {

struct ClusterModel {
  int k = 0;
  int dim = 0;
  std::vector<double> centroids;  // k * dim, row-major
  std::vector<int> labels;        // per document, 0..k-1
  double inertia = 0.0;
  int iterations_run = 0;
  std::vector<double> inertia_trace;  // inertia after each assignment step
};

// k-means++ seeding from the given seed, then Lloyd iterations until the
// largest centroid displacement drops below tol or max_iter is reached.
// Clusters that lose all members are re-seeded at the point farthest from
// its assigned centroid. Deterministic for fixed inputs.
ClusterModel kmeans_fit(const EmbeddingMatrix& matrix, int k, std::uint64_t seed,
                        int max_iter = 300, double tol = 1e-6);

// Lloyd iterations from explicit initial centroids (also used by kmeans_fit).
ClusterModel kmeans_lloyd(const EmbeddingMatrix& matrix,
                          std::vector<double> initial_centroids, int k,
                          int max_iter, double tol);

// Nearest centroid per document, ties to the lowest centroid index.
std::vector<int> kmeans_assign(const EmbeddingMatrix& matrix,
                               const std::vector<double>& centroids, int k);

}  // namespace prototopic
