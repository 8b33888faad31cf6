#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace prototopic {

enum class Activation { Identity, Tanh };

// Data-parallel inner loops of the pipeline. Each kernel exists twice:
// `serial::` is the reference implementation, `omp::` parallelizes across
// independent output cells while keeping every per-cell reduction in the
// same order, so both variants return bit-identical results and the worker
// count never changes any output.
namespace kernels {

// Worker count used by the dispatching wrappers below.
// 1 selects the serial path; 0 means all hardware threads.
void set_workers(int n);
int workers();

namespace serial {

// Z[i] = act(W * X[i] + b); W is P x D row-major, X/Z are row-major.
void project_rows(const double* weights, const double* bias, Activation act,
                  int out_dim, int in_dim, const double* x, int n, double* z);

// Nearest centroid by squared Euclidean distance, ties to the lowest index.
// dist2 (optional, may be null) receives the winning squared distance.
void nearest_assign(const double* x, int n, int dim, const double* centroids,
                    int k, int* labels, double* dist2);

// Per-group coordinate-wise means, members summed in ascending row order.
// Groups with no members get a zero row and count 0.
void group_means(const double* x, int n, int dim, const int* labels, int k,
                 double* means, int* counts);

// Signed feature hashing: each token adds +-1 at one index, then the row is
// L2-normalized. Rows whose accumulation cancels to zero are left zero.
void hash_rows(const std::vector<std::vector<std::string>>& token_lists,
               int dim, std::uint64_t seed, double* out);

// grad_w[p][d] = sum_e dz[e][p] * x[e][d]; grad_b[p] = sum_e dz[e][p].
// Entries are summed in ascending order for every output cell.
void grad_accum(const double* dz, const double* x, int entries, int out_dim,
                int in_dim, double* grad_w, double* grad_b);

// Boolean sliding-window counts. docs holds per-document token streams
// mapped to tracked-word indices (-1 = untracked). counts is m x m: the
// diagonal counts windows containing word i, off-diagonal windows containing
// both words. Documents shorter than the window contribute one window;
// empty documents contribute none. Returns the total window count.
std::int64_t window_counts(const std::vector<std::vector<int>>& docs,
                           int window_size, int m, std::int64_t* counts);

}  // namespace serial

namespace omp {

void project_rows(const double* weights, const double* bias, Activation act,
                  int out_dim, int in_dim, const double* x, int n, double* z);
void nearest_assign(const double* x, int n, int dim, const double* centroids,
                    int k, int* labels, double* dist2);
void group_means(const double* x, int n, int dim, const int* labels, int k,
                 double* means, int* counts);
void hash_rows(const std::vector<std::vector<std::string>>& token_lists,
               int dim, std::uint64_t seed, double* out);
void grad_accum(const double* dz, const double* x, int entries, int out_dim,
                int in_dim, double* grad_w, double* grad_b);
std::int64_t window_counts(const std::vector<std::vector<int>>& docs,
                           int window_size, int m, std::int64_t* counts);

}  // namespace omp

// Dispatching wrappers: serial when workers() == 1, OpenMP otherwise.
void project_rows(const double* weights, const double* bias, Activation act,
                  int out_dim, int in_dim, const double* x, int n, double* z);
void nearest_assign(const double* x, int n, int dim, const double* centroids,
                    int k, int* labels, double* dist2);
void group_means(const double* x, int n, int dim, const int* labels, int k,
                 double* means, int* counts);
void hash_rows(const std::vector<std::vector<std::string>>& token_lists,
               int dim, std::uint64_t seed, double* out);
void grad_accum(const double* dz, const double* x, int entries, int out_dim,
                int in_dim, double* grad_w, double* grad_b);
std::int64_t window_counts(const std::vector<std::vector<int>>& docs,
                           int window_size, int m, std::int64_t* counts);

}  // namespace kernels
}  // namespace prototopic
