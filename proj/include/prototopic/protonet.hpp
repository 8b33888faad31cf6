#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "prototopic/embedding.hpp"
#include "prototopic/kernels.hpp"
#include "prototopic/rng.hpp"

namespace prototopic {

// Trainable affine map over frozen document embeddings; the only learned
// parameters in the pipeline.
struct ProjectionHead {
  int input_dim = 0;
  int output_dim = 0;
  std::vector<double> weights;  // output_dim x input_dim, row-major
  std::vector<double> bias;     // output_dim
  Activation activation = Activation::Identity;
};

// One n-way episode. Support and query hold document row indices, sorted
// ascending within each class, disjoint, all carrying the class's label.
struct Episode {
  std::vector<int> class_ids;
  std::vector<std::vector<int>> support;
  std::vector<std::vector<int>> query;
};

struct Prototypes {
  std::vector<int> class_ids;
  int dim = 0;
  std::vector<double> vectors;  // one row per class

  std::span<const double> row(std::size_t i) const {
    return {vectors.data() + i * static_cast<std::size_t>(dim),
            static_cast<std::size_t>(dim)};
  }
};

struct TrainConfig {
  int n_way = 5;
  int k_shot = 5;
  int q_query = 5;
  int episodes_per_epoch = 50;
  int epochs = 10;
  double learning_rate = 5e-5;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 0;
  int output_dim = 128;
  Activation activation = Activation::Identity;
};

struct AdamState {
  std::vector<double> m_weights, v_weights;
  std::vector<double> m_bias, v_bias;
  long long step = 0;
};

struct HeadGradient {
  std::vector<double> weights;
  std::vector<double> bias;
};

struct EpisodeRecord {
  int epoch = 0;
  int episode = 0;
  double loss = 0.0;
  double accuracy = 0.0;
};

struct LossTrace {
  std::vector<EpisodeRecord> records;
};

struct EpisodeResult {
  double loss = 0.0;
  double accuracy = 0.0;
  HeadGradient grad;
};

// Uniformly samples n_way classes (each with >= k_shot + q_query members),
// then k_shot + q_query member documents per class without replacement.
Episode sample_episode(const std::vector<int>& labels, const TrainConfig& cfg,
                       Rng& rng);

ProjectionHead init_head(int input_dim, const TrainConfig& cfg, Rng& rng);

// activation(W x + b)
std::vector<double> project(const ProjectionHead& head, std::span<const double> x);

// Per-class mean of the projected support embeddings, summed in ascending
// row-index order.
Prototypes compute_prototypes(const ProjectionHead& head,
                              const EmbeddingMatrix& matrix,
                              const Episode& episode);

// softmax over negative squared-Euclidean distances, max-shift stabilized.
std::vector<double> softmax_neg_distances(const std::vector<double>& dist2);
std::vector<double> classify_query(const Prototypes& prototypes,
                                   std::span<const double> z);

// Mean negative log-likelihood over the episode's queries, with analytic
// gradients flowing through both the query projections and the prototype
// means. Also reports query accuracy against the episode classes.
EpisodeResult episode_loss_and_grad(const ProjectionHead& head,
                                    const EmbeddingMatrix& matrix,
                                    const Episode& episode);

// Adam with bias correction; increments state.step.
void adam_step(ProjectionHead& head, const HeadGradient& grad, AdamState& state,
               const TrainConfig& cfg);

std::pair<ProjectionHead, LossTrace> train(const EmbeddingMatrix& matrix,
                                           const std::vector<int>& labels,
                                           const TrainConfig& cfg);

// Max over parameters of |analytic - numeric| / max(1e-12, |analytic| + |numeric|)
// with central differences of width epsilon.
double finite_diff_check(const ProjectionHead& head, const EmbeddingMatrix& matrix,
                         const Episode& episode, double epsilon);

// Checkpoint format: "protohead <D> <P> <activation>" then P lines of D+1
// floats (weight row, bias element last), shortest round-trip decimals.
void save_head(const ProjectionHead& head, const std::filesystem::path& path);
ProjectionHead load_head(const std::filesystem::path& path);

}  // namespace prototopic
