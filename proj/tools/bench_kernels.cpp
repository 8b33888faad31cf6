// Times each kernel's serial reference against the OpenMP variant on
// synthetic data and verifies that both produce identical bits.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "prototopic/kernels.hpp"
#include "prototopic/rng.hpp"

namespace {

using prototopic::Activation;
using prototopic::Rng;
namespace kernels = prototopic::kernels;

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warmup
  const auto start = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) fn();
  const auto end = std::chrono::steady_clock::now();
  return std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(
             end - start)
             .count() /
         reps;
}

void report(const char* name, double serial_ms, double omp_ms, bool identical) {
  std::printf("%-16s %10.2f ms %10.2f ms %8.2fx  %s\n", name, serial_ms, omp_ms,
              serial_ms / omp_ms, identical ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"benchmark serial vs OpenMP kernels"};
  int n = 20000;
  int dim = 256;
  int proj = 128;
  int k = 50;
  int reps = 3;
  app.add_option("--n", n, "rows");
  app.add_option("--dim", dim, "input dimension");
  app.add_option("--proj", proj, "projection dimension");
  app.add_option("--k", k, "centroid count");
  app.add_option("--reps", reps, "repetitions per timing");
  CLI11_PARSE(app, argc, argv);

  Rng rng(42);
  std::vector<double> x(static_cast<std::size_t>(n) * dim);
  for (auto& v : x) v = rng.uniform(-1.0, 1.0);
  std::vector<double> weights(static_cast<std::size_t>(proj) * dim);
  for (auto& v : weights) v = rng.uniform(-0.1, 0.1);
  std::vector<double> bias(proj, 0.01);
  std::vector<double> centroids(static_cast<std::size_t>(k) * dim);
  for (auto& v : centroids) v = rng.uniform(-1.0, 1.0);

  std::printf("%-16s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

  {
    std::vector<double> z_s(static_cast<std::size_t>(n) * proj);
    std::vector<double> z_p(z_s.size());
    const double ts = time_ms(
        [&] {
          kernels::serial::project_rows(weights.data(), bias.data(),
                                        Activation::Identity, proj, dim, x.data(), n,
                                        z_s.data());
        },
        reps);
    const double tp = time_ms(
        [&] {
          kernels::omp::project_rows(weights.data(), bias.data(),
                                     Activation::Identity, proj, dim, x.data(), n,
                                     z_p.data());
        },
        reps);
    report("project_rows", ts, tp,
           std::memcmp(z_s.data(), z_p.data(), z_s.size() * sizeof(double)) == 0);
  }

  std::vector<int> labels_s(n), labels_p(n);
  {
    std::vector<double> d_s(n), d_p(n);
    const double ts = time_ms(
        [&] {
          kernels::serial::nearest_assign(x.data(), n, dim, centroids.data(), k,
                                          labels_s.data(), d_s.data());
        },
        reps);
    const double tp = time_ms(
        [&] {
          kernels::omp::nearest_assign(x.data(), n, dim, centroids.data(), k,
                                       labels_p.data(), d_p.data());
        },
        reps);
    report("nearest_assign", ts, tp,
           labels_s == labels_p &&
               std::memcmp(d_s.data(), d_p.data(), d_s.size() * sizeof(double)) == 0);
  }

  {
    std::vector<double> m_s(static_cast<std::size_t>(k) * dim);
    std::vector<double> m_p(m_s.size());
    std::vector<int> c_s(k), c_p(k);
    const double ts = time_ms(
        [&] {
          kernels::serial::group_means(x.data(), n, dim, labels_s.data(), k,
                                       m_s.data(), c_s.data());
        },
        reps);
    const double tp = time_ms(
        [&] {
          kernels::omp::group_means(x.data(), n, dim, labels_s.data(), k, m_p.data(),
                                    c_p.data());
        },
        reps);
    report("group_means", ts, tp,
           c_s == c_p &&
               std::memcmp(m_s.data(), m_p.data(), m_s.size() * sizeof(double)) == 0);
  }

  {
    std::vector<std::vector<std::string>> tokens(n);
    for (int i = 0; i < n; ++i) {
      const int len = 20 + static_cast<int>(rng.bounded(20));
      for (int t = 0; t < len; ++t) {
        tokens[i].push_back("tok" + std::to_string(rng.bounded(5000)));
      }
    }
    std::vector<double> h_s(static_cast<std::size_t>(n) * dim);
    std::vector<double> h_p(h_s.size());
    const double ts = time_ms(
        [&] { kernels::serial::hash_rows(tokens, dim, 7, h_s.data()); }, reps);
    const double tp =
        time_ms([&] { kernels::omp::hash_rows(tokens, dim, 7, h_p.data()); }, reps);
    report("hash_rows", ts, tp,
           std::memcmp(h_s.data(), h_p.data(), h_s.size() * sizeof(double)) == 0);
  }

  {
    const int entries = 2000;
    std::vector<double> dz(static_cast<std::size_t>(entries) * proj);
    for (auto& v : dz) v = rng.uniform(-1.0, 1.0);
    std::vector<double> gw_s(static_cast<std::size_t>(proj) * dim), gb_s(proj);
    std::vector<double> gw_p(gw_s.size()), gb_p(proj);
    const double ts = time_ms(
        [&] {
          kernels::serial::grad_accum(dz.data(), x.data(), entries, proj, dim,
                                      gw_s.data(), gb_s.data());
        },
        reps);
    const double tp = time_ms(
        [&] {
          kernels::omp::grad_accum(dz.data(), x.data(), entries, proj, dim,
                                   gw_p.data(), gb_p.data());
        },
        reps);
    report("grad_accum", ts, tp,
           std::memcmp(gw_s.data(), gw_p.data(), gw_s.size() * sizeof(double)) == 0 &&
               std::memcmp(gb_s.data(), gb_p.data(), gb_s.size() * sizeof(double)) == 0);
  }

  {
    const int m = 40;
    const int docs_n = n / 10;
    std::vector<std::vector<int>> docs(docs_n);
    for (auto& doc : docs) {
      const int len = 150 + static_cast<int>(rng.bounded(100));
      doc.resize(len);
      for (auto& w : doc) {
        w = rng.bounded(4) == 0 ? static_cast<int>(rng.bounded(m)) : -1;
      }
    }
    std::vector<std::int64_t> c_s(static_cast<std::size_t>(m) * m);
    std::vector<std::int64_t> c_p(c_s.size());
    std::int64_t t_s = 0, t_p = 0;
    const double ts = time_ms(
        [&] { t_s = kernels::serial::window_counts(docs, 110, m, c_s.data()); }, reps);
    const double tp = time_ms(
        [&] { t_p = kernels::omp::window_counts(docs, 110, m, c_p.data()); }, reps);
    report("window_counts", ts, tp, t_s == t_p && c_s == c_p);
  }

  return 0;
}
