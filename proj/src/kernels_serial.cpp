#include "kernels_detail.hpp"
#include "prototopic/kernels.hpp"

namespace prototopic::kernels::serial {

void project_rows(const double* weights, const double* bias, Activation act,
                  int out_dim, int in_dim, const double* x, int n, double* z) {
  for (int i = 0; i < n; ++i) {
    detail::project_one_row(weights, bias, act, out_dim, in_dim,
                            x + static_cast<std::size_t>(i) * in_dim,
                            z + static_cast<std::size_t>(i) * out_dim);
  }
}

void nearest_assign(const double* x, int n, int dim, const double* centroids,
                    int k, int* labels, double* dist2) {
  for (int i = 0; i < n; ++i) {
    detail::nearest_one(x + static_cast<std::size_t>(i) * dim, dim, centroids,
                        k, labels + i, dist2 != nullptr ? dist2 + i : nullptr);
  }
}

void group_means(const double* x, int n, int dim, const int* labels, int k,
                 double* means, int* counts) {
  const auto members = detail::bucket_by_label(labels, n, k);
  for (int g = 0; g < k; ++g) {
    counts[g] = static_cast<int>(members[g].size());
    detail::mean_of_members(x, dim, members[g],
                            means + static_cast<std::size_t>(g) * dim);
  }
}

void hash_rows(const std::vector<std::vector<std::string>>& token_lists,
               int dim, std::uint64_t seed, double* out) {
  const int n = static_cast<int>(token_lists.size());
  for (int i = 0; i < n; ++i) {
    detail::hash_one_row(token_lists[i], dim, seed,
                         out + static_cast<std::size_t>(i) * dim);
  }
}

void grad_accum(const double* dz, const double* x, int entries, int out_dim,
                int in_dim, double* grad_w, double* grad_b) {
  for (int p = 0; p < out_dim; ++p) {
    detail::grad_one_row(p, dz, x, entries, out_dim, in_dim,
                         grad_w + static_cast<std::size_t>(p) * in_dim,
                         grad_b + p);
  }
}

std::int64_t window_counts(const std::vector<std::vector<int>>& docs,
                           int window_size, int m, std::int64_t* counts) {
  for (std::size_t i = 0; i < static_cast<std::size_t>(m) * m; ++i) counts[i] = 0;
  std::int64_t total = 0;
  for (const auto& doc : docs) {
    total += detail::doc_window_counts(doc, window_size, m, counts);
  }
  // Mirror the upper triangle.
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      counts[static_cast<std::size_t>(j) * m + i] =
          counts[static_cast<std::size_t>(i) * m + j];
    }
  }
  return total;
}

}  // namespace prototopic::kernels::serial
