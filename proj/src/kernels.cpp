#include "prototopic/kernels.hpp"

#include <omp.h>

#include "prototopic/errors.hpp"

namespace prototopic::kernels {

namespace {
int g_workers = 0;

bool use_serial() { return g_workers == 1; }

struct ThreadScope {
  // omp_set_num_threads is process-wide; scoped so a bounded worker count
  // only applies to the wrapped kernel call.
  explicit ThreadScope(int n) : prev_(omp_get_max_threads()) {
    if (n > 0) omp_set_num_threads(n);
  }
  ~ThreadScope() { omp_set_num_threads(prev_); }
  int prev_;
};
}  // namespace

void set_workers(int n) {
  if (n < 0) throw ValidationError("worker count must be >= 0");
  g_workers = n;
}

int workers() { return g_workers; }

void project_rows(const double* weights, const double* bias, Activation act,
                  int out_dim, int in_dim, const double* x, int n, double* z) {
  if (use_serial()) {
    serial::project_rows(weights, bias, act, out_dim, in_dim, x, n, z);
  } else {
    ThreadScope scope(g_workers);
    omp::project_rows(weights, bias, act, out_dim, in_dim, x, n, z);
  }
}

void nearest_assign(const double* x, int n, int dim, const double* centroids,
                    int k, int* labels, double* dist2) {
  if (use_serial()) {
    serial::nearest_assign(x, n, dim, centroids, k, labels, dist2);
  } else {
    ThreadScope scope(g_workers);
    omp::nearest_assign(x, n, dim, centroids, k, labels, dist2);
  }
}

void group_means(const double* x, int n, int dim, const int* labels, int k,
                 double* means, int* counts) {
  if (use_serial()) {
    serial::group_means(x, n, dim, labels, k, means, counts);
  } else {
    ThreadScope scope(g_workers);
    omp::group_means(x, n, dim, labels, k, means, counts);
  }
}

void hash_rows(const std::vector<std::vector<std::string>>& token_lists,
               int dim, std::uint64_t seed, double* out) {
  if (use_serial()) {
    serial::hash_rows(token_lists, dim, seed, out);
  } else {
    ThreadScope scope(g_workers);
    omp::hash_rows(token_lists, dim, seed, out);
  }
}

void grad_accum(const double* dz, const double* x, int entries, int out_dim,
                int in_dim, double* grad_w, double* grad_b) {
  if (use_serial()) {
    serial::grad_accum(dz, x, entries, out_dim, in_dim, grad_w, grad_b);
  } else {
    ThreadScope scope(g_workers);
    omp::grad_accum(dz, x, entries, out_dim, in_dim, grad_w, grad_b);
  }
}

std::int64_t window_counts(const std::vector<std::vector<int>>& docs,
                           int window_size, int m, std::int64_t* counts) {
  if (use_serial()) {
    return serial::window_counts(docs, window_size, m, counts);
  }
  ThreadScope scope(g_workers);
  return omp::window_counts(docs, window_size, m, counts);
}

}  // namespace prototopic::kernels
