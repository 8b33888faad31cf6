#pragma once

// Per-cell arithmetic shared by the serial and OpenMP kernel variants.
// Both variants must call these helpers so every output cell sees the
// exact same sequence of floating-point operations.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "prototopic/kernels.hpp"
#include "prototopic/rng.hpp"

namespace prototopic::kernels::detail {

inline void project_one_row(const double* weights, const double* bias,
                            Activation act, int out_dim, int in_dim,
                            const double* x, double* z) {
  for (int p = 0; p < out_dim; ++p) {
    double acc = 0.0;
    const double* w_row = weights + static_cast<std::size_t>(p) * in_dim;
    for (int d = 0; d < in_dim; ++d) acc += w_row[d] * x[d];
    acc += bias[p];
    z[p] = (act == Activation::Tanh) ? std::tanh(acc) : acc;
  }
}

inline void nearest_one(const double* x, int dim, const double* centroids,
                        int k, int* label, double* dist2) {
  int best = 0;
  double best_d = 0.0;
  for (int c = 0; c < k; ++c) {
    const double* row = centroids + static_cast<std::size_t>(c) * dim;
    double d = 0.0;
    for (int j = 0; j < dim; ++j) {
      const double diff = x[j] - row[j];
      d += diff * diff;
    }
    if (c == 0 || d < best_d) {
      best_d = d;
      best = c;
    }
  }
  *label = best;
  if (dist2 != nullptr) *dist2 = best_d;
}

inline void mean_of_members(const double* x, int dim,
                            const std::vector<int>& members, double* out) {
  for (int d = 0; d < dim; ++d) out[d] = 0.0;
  for (const int i : members) {
    const double* row = x + static_cast<std::size_t>(i) * dim;
    for (int d = 0; d < dim; ++d) out[d] += row[d];
  }
  if (!members.empty()) {
    const double inv = 1.0 / static_cast<double>(members.size());
    for (int d = 0; d < dim; ++d) out[d] *= inv;
  }
}

inline void hash_one_row(const std::vector<std::string>& tokens, int dim,
                         std::uint64_t seed, double* out) {
  for (int d = 0; d < dim; ++d) out[d] = 0.0;
  for (const auto& tok : tokens) {
    const std::uint64_t h = hash64(tok, seed);
    const int idx = static_cast<int>((h >> 1) % static_cast<std::uint64_t>(dim));
    out[idx] += (h & 1u) ? 1.0 : -1.0;
  }
  double norm2 = 0.0;
  for (int d = 0; d < dim; ++d) norm2 += out[d] * out[d];
  if (norm2 > 0.0) {
    const double inv = 1.0 / std::sqrt(norm2);
    for (int d = 0; d < dim; ++d) out[d] *= inv;
  }
}

inline void grad_one_row(int p, const double* dz, const double* x, int entries,
                         int out_dim, int in_dim, double* grad_w_row,
                         double* grad_b_p) {
  for (int d = 0; d < in_dim; ++d) grad_w_row[d] = 0.0;
  double gb = 0.0;
  for (int e = 0; e < entries; ++e) {
    const double s = dz[static_cast<std::size_t>(e) * out_dim + p];
    gb += s;
    const double* xe = x + static_cast<std::size_t>(e) * in_dim;
    for (int d = 0; d < in_dim; ++d) grad_w_row[d] += s * xe[d];
  }
  *grad_b_p = gb;
}

// Window counts for one document, accumulated into the upper triangle
// (i <= j) of an m x m matrix. Returns the document's window count.
inline std::int64_t doc_window_counts(const std::vector<int>& doc,
                                      int window_size, int m,
                                      std::int64_t* counts) {
  const int len = static_cast<int>(doc.size());
  if (len == 0) return 0;
  const int n_windows = len >= window_size ? len - window_size + 1 : 1;
  const int span = len >= window_size ? window_size : len;

  std::vector<int> occur(m, 0);
  std::vector<int> present;
  present.reserve(m);
  for (int pos = 0; pos < span; ++pos) {
    const int w = doc[pos];
    if (w >= 0) ++occur[w];
  }
  for (int s = 0;; ++s) {
    present.clear();
    for (int w = 0; w < m; ++w) {
      if (occur[w] > 0) present.push_back(w);
    }
    for (std::size_t a = 0; a < present.size(); ++a) {
      for (std::size_t b = a; b < present.size(); ++b) {
        ++counts[static_cast<std::size_t>(present[a]) * m + present[b]];
      }
    }
    if (s + 1 >= n_windows) break;
    const int leaving = doc[s];
    if (leaving >= 0) --occur[leaving];
    const int entering = doc[s + window_size];
    if (entering >= 0) ++occur[entering];
  }
  return n_windows;
}

inline std::vector<std::vector<int>> bucket_by_label(const int* labels, int n,
                                                     int k) {
  std::vector<std::vector<int>> members(k);
  for (int i = 0; i < n; ++i) members[labels[i]].push_back(i);
  return members;
}

}  // namespace prototopic::kernels::detail
