#include "prototopic/protonet.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <sstream>

#include "prototopic/errors.hpp"
#include "prototopic/text_io.hpp"

namespace prototopic {

namespace {

void check_head(const ProjectionHead& head) {
  if (head.input_dim <= 0 || head.output_dim <= 0 ||
      head.weights.size() != static_cast<std::size_t>(head.output_dim) * head.input_dim ||
      head.bias.size() != static_cast<std::size_t>(head.output_dim)) {
    throw ValidationError("projection head shape mismatch");
  }
}

void check_episode(const Episode& episode, std::size_t n_rows) {
  if (episode.class_ids.empty() ||
      episode.support.size() != episode.class_ids.size() ||
      episode.query.size() != episode.class_ids.size()) {
    throw ValidationError("episode class structure mismatch");
  }
  for (std::size_t a = 0; a < episode.class_ids.size(); ++a) {
    if (episode.support[a].empty()) {
      throw ValidationError("episode class " + std::to_string(episode.class_ids[a]) +
                            " has an empty support set");
    }
    for (const int i : episode.support[a]) {
      if (i < 0 || static_cast<std::size_t>(i) >= n_rows) {
        throw ValidationError("episode support index out of range");
      }
    }
    for (const int i : episode.query[a]) {
      if (i < 0 || static_cast<std::size_t>(i) >= n_rows) {
        throw ValidationError("episode query index out of range");
      }
    }
  }
}

double activation_backward(Activation act, double z) {
  return act == Activation::Tanh ? 1.0 - z * z : 1.0;
}

std::string activation_name(Activation act) {
  return act == Activation::Tanh ? "tanh" : "identity";
}

// Episode documents gathered in canonical order: support rows class-major,
// then query rows class-major, ascending row index within each class.
struct GatheredEpisode {
  int n_way = 0;
  int k_shot = 0;  // per-class support sizes (uniform within an episode)
  int n_query = 0;
  std::vector<int> row_of_entry;     // entry -> matrix row
  std::vector<double> x;             // entries x D
  std::vector<int> query_class;      // per query entry, class position
  int support_entries = 0;
};

GatheredEpisode gather(const EmbeddingMatrix& matrix, const Episode& episode) {
  GatheredEpisode g;
  g.n_way = static_cast<int>(episode.class_ids.size());
  // Blocks are sorted so summation order never depends on list order.
  for (std::size_t a = 0; a < episode.support.size(); ++a) {
    std::vector<int> block = episode.support[a];
    std::sort(block.begin(), block.end());
    for (const int i : block) g.row_of_entry.push_back(i);
  }
  g.support_entries = static_cast<int>(g.row_of_entry.size());
  for (std::size_t a = 0; a < episode.query.size(); ++a) {
    std::vector<int> block = episode.query[a];
    std::sort(block.begin(), block.end());
    for (const int i : block) {
      g.row_of_entry.push_back(i);
      g.query_class.push_back(static_cast<int>(a));
    }
  }
  g.n_query = static_cast<int>(g.query_class.size());
  const int dim = matrix.dim;
  g.x.resize(g.row_of_entry.size() * static_cast<std::size_t>(dim));
  for (std::size_t e = 0; e < g.row_of_entry.size(); ++e) {
    std::memcpy(g.x.data() + e * dim, matrix.row(g.row_of_entry[e]).data(),
                sizeof(double) * dim);
  }
  return g;
}

double squared_distance(const double* a, const double* b, int dim) {
  double d = 0.0;
  for (int j = 0; j < dim; ++j) {
    const double diff = a[j] - b[j];
    d += diff * diff;
  }
  return d;
}

}  // namespace

Episode sample_episode(const std::vector<int>& labels, const TrainConfig& cfg,
                       Rng& rng) {
  if (cfg.n_way < 2) throw ValidationError("n_way must be >= 2");
  if (cfg.k_shot < 1 || cfg.q_query < 1) {
    throw ValidationError("k_shot and q_query must be >= 1");
  }
  std::map<int, std::vector<int>> members;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    members[labels[i]].push_back(static_cast<int>(i));
  }
  const int need = cfg.k_shot + cfg.q_query;
  std::vector<int> eligible;
  for (const auto& [cls, m] : members) {
    if (static_cast<int>(m.size()) >= need) eligible.push_back(cls);
  }
  if (static_cast<int>(eligible.size()) < cfg.n_way) {
    throw ValidationError(
        "episode needs " + std::to_string(cfg.n_way) + " classes with >= " +
        std::to_string(need) + " members, but only " +
        std::to_string(eligible.size()) + " of " + std::to_string(members.size()) +
        " classes qualify");
  }

  Episode episode;
  const auto class_picks =
      rng.sample_without_replacement(static_cast<int>(eligible.size()), cfg.n_way);
  for (const int pick : class_picks) {
    const int cls = eligible[pick];
    const auto& pool = members[cls];
    const auto doc_picks =
        rng.sample_without_replacement(static_cast<int>(pool.size()), need);
    std::vector<int> support, query;
    for (int i = 0; i < cfg.k_shot; ++i) support.push_back(pool[doc_picks[i]]);
    for (int i = cfg.k_shot; i < need; ++i) query.push_back(pool[doc_picks[i]]);
    std::sort(support.begin(), support.end());
    std::sort(query.begin(), query.end());
    episode.class_ids.push_back(cls);
    episode.support.push_back(std::move(support));
    episode.query.push_back(std::move(query));
  }
  return episode;
}

ProjectionHead init_head(int input_dim, const TrainConfig& cfg, Rng& rng) {
  if (input_dim <= 0 || cfg.output_dim <= 0) {
    throw ValidationError("head dimensions must be positive");
  }
  ProjectionHead head;
  head.input_dim = input_dim;
  head.output_dim = cfg.output_dim;
  head.activation = cfg.activation;
  head.weights.resize(static_cast<std::size_t>(cfg.output_dim) * input_dim);
  head.bias.assign(cfg.output_dim, 0.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(input_dim));
  for (auto& w : head.weights) w = rng.uniform(-scale, scale);
  return head;
}

std::vector<double> project(const ProjectionHead& head, std::span<const double> x) {
  check_head(head);
  if (static_cast<int>(x.size()) != head.input_dim) {
    throw ValidationError("project: input has dim " + std::to_string(x.size()) +
                          ", head expects " + std::to_string(head.input_dim));
  }
  std::vector<double> z(head.output_dim);
  kernels::project_rows(head.weights.data(), head.bias.data(), head.activation,
                        head.output_dim, head.input_dim, x.data(), 1, z.data());
  return z;
}

Prototypes compute_prototypes(const ProjectionHead& head,
                              const EmbeddingMatrix& matrix,
                              const Episode& episode) {
  check_head(head);
  check_episode(episode, matrix.rows());
  if (head.input_dim != matrix.dim) {
    throw ValidationError("head input dim does not match embedding dim");
  }
  const int P = head.output_dim;
  Prototypes protos;
  protos.class_ids = episode.class_ids;
  protos.dim = P;
  protos.vectors.assign(episode.class_ids.size() * static_cast<std::size_t>(P), 0.0);

  std::vector<double> z(P);
  for (std::size_t a = 0; a < episode.class_ids.size(); ++a) {
    std::vector<int> order = episode.support[a];
    std::sort(order.begin(), order.end());
    double* proto = protos.vectors.data() + a * static_cast<std::size_t>(P);
    for (const int row : order) {
      kernels::project_rows(head.weights.data(), head.bias.data(), head.activation,
                            P, head.input_dim, matrix.row(row).data(), 1, z.data());
      for (int p = 0; p < P; ++p) proto[p] += z[p];
    }
    const double inv = 1.0 / static_cast<double>(order.size());
    for (int p = 0; p < P; ++p) proto[p] *= inv;
  }
  return protos;
}

std::vector<double> softmax_neg_distances(const std::vector<double>& dist2) {
  if (dist2.empty()) throw ValidationError("softmax over empty distance list");
  double min_d = dist2[0];
  for (const double d : dist2) min_d = std::min(min_d, d);
  std::vector<double> p(dist2.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < dist2.size(); ++k) {
    p[k] = std::exp(-(dist2[k] - min_d));
    sum += p[k];
  }
  for (auto& v : p) v /= sum;
  return p;
}

std::vector<double> classify_query(const Prototypes& prototypes,
                                   std::span<const double> z) {
  if (prototypes.class_ids.empty()) {
    throw ValidationError("classify_query: no prototypes");
  }
  if (static_cast<int>(z.size()) != prototypes.dim) {
    throw ValidationError("classify_query: dim mismatch");
  }
  std::vector<double> dist2(prototypes.class_ids.size());
  for (std::size_t k = 0; k < prototypes.class_ids.size(); ++k) {
    dist2[k] = squared_distance(z.data(), prototypes.row(k).data(), prototypes.dim);
  }
  return softmax_neg_distances(dist2);
}

EpisodeResult episode_loss_and_grad(const ProjectionHead& head,
                                    const EmbeddingMatrix& matrix,
                                    const Episode& episode) {
  check_head(head);
  check_episode(episode, matrix.rows());
  if (head.input_dim != matrix.dim) {
    throw ValidationError("head input dim does not match embedding dim");
  }
  const int P = head.output_dim;
  const int D = head.input_dim;
  const int n_way = static_cast<int>(episode.class_ids.size());

  const GatheredEpisode g = gather(matrix, episode);
  const int entries = static_cast<int>(g.row_of_entry.size());
  std::vector<double> z(static_cast<std::size_t>(entries) * P);
  kernels::project_rows(head.weights.data(), head.bias.data(), head.activation, P,
                        D, g.x.data(), entries, z.data());

  // Prototypes: means over contiguous support blocks, ascending row order.
  std::vector<double> protos(static_cast<std::size_t>(n_way) * P, 0.0);
  std::vector<int> support_begin(n_way + 1, 0);
  for (int a = 0; a < n_way; ++a) {
    support_begin[a + 1] =
        support_begin[a] + static_cast<int>(episode.support[a].size());
    double* proto = protos.data() + static_cast<std::size_t>(a) * P;
    for (int e = support_begin[a]; e < support_begin[a + 1]; ++e) {
      const double* ze = z.data() + static_cast<std::size_t>(e) * P;
      for (int p = 0; p < P; ++p) proto[p] += ze[p];
    }
    const double inv = 1.0 / static_cast<double>(episode.support[a].size());
    for (int p = 0; p < P; ++p) proto[p] *= inv;
  }

  const int n_query = g.n_query;
  if (n_query == 0) throw ValidationError("episode has no query documents");
  const double inv_nq = 1.0 / static_cast<double>(n_query);

  std::vector<double> dz(static_cast<std::size_t>(entries) * P, 0.0);
  std::vector<double> dproto(static_cast<std::size_t>(n_way) * P, 0.0);
  std::vector<double> dist2(n_way);
  double loss_sum = 0.0;
  int correct = 0;

  for (int q = 0; q < n_query; ++q) {
    const int e = g.support_entries + q;
    const int truth = g.query_class[q];
    const double* zq = z.data() + static_cast<std::size_t>(e) * P;
    for (int k = 0; k < n_way; ++k) {
      dist2[k] = squared_distance(zq, protos.data() + static_cast<std::size_t>(k) * P, P);
    }
    const auto p = softmax_neg_distances(dist2);
    loss_sum += -std::log(p[truth]);

    int argmax = 0;
    for (int k = 1; k < n_way; ++k) {
      if (p[k] > p[argmax]) argmax = k;
    }
    if (argmax == truth) ++correct;

    double* dzq = dz.data() + static_cast<std::size_t>(e) * P;
    for (int k = 0; k < n_way; ++k) {
      const double gk = (p[k] - (k == truth ? 1.0 : 0.0)) * inv_nq;
      const double* ck = protos.data() + static_cast<std::size_t>(k) * P;
      double* dck = dproto.data() + static_cast<std::size_t>(k) * P;
      for (int pp = 0; pp < P; ++pp) {
        const double diff = zq[pp] - ck[pp];
        dzq[pp] += -2.0 * gk * diff;
        dck[pp] += 2.0 * gk * diff;
      }
    }
  }

  // Prototype gradients flow back to the support projections (Eq. 1 path).
  for (int a = 0; a < n_way; ++a) {
    const double inv = 1.0 / static_cast<double>(episode.support[a].size());
    const double* dca = dproto.data() + static_cast<std::size_t>(a) * P;
    for (int e = support_begin[a]; e < support_begin[a + 1]; ++e) {
      double* dze = dz.data() + static_cast<std::size_t>(e) * P;
      for (int p = 0; p < P; ++p) dze[p] += dca[p] * inv;
    }
  }

  // Through the activation.
  for (int e = 0; e < entries; ++e) {
    const double* ze = z.data() + static_cast<std::size_t>(e) * P;
    double* dze = dz.data() + static_cast<std::size_t>(e) * P;
    for (int p = 0; p < P; ++p) {
      dze[p] *= activation_backward(head.activation, ze[p]);
    }
  }

  EpisodeResult result;
  result.loss = loss_sum * inv_nq;
  result.accuracy = static_cast<double>(correct) / static_cast<double>(n_query);
  result.grad.weights.assign(static_cast<std::size_t>(P) * D, 0.0);
  result.grad.bias.assign(P, 0.0);
  kernels::grad_accum(dz.data(), g.x.data(), entries, P, D,
                      result.grad.weights.data(), result.grad.bias.data());

  if (!std::isfinite(result.loss)) {
    throw NumericError("episode loss is not finite");
  }
  for (const double v : result.grad.weights) {
    if (!std::isfinite(v)) throw NumericError("episode gradient is not finite");
  }
  for (const double v : result.grad.bias) {
    if (!std::isfinite(v)) throw NumericError("episode gradient is not finite");
  }
  return result;
}

void adam_step(ProjectionHead& head, const HeadGradient& grad, AdamState& state,
               const TrainConfig& cfg) {
  check_head(head);
  if (grad.weights.size() != head.weights.size() ||
      grad.bias.size() != head.bias.size()) {
    throw ValidationError("adam_step: gradient shape mismatch");
  }
  if (state.step == 0 && state.m_weights.empty()) {
    state.m_weights.assign(head.weights.size(), 0.0);
    state.v_weights.assign(head.weights.size(), 0.0);
    state.m_bias.assign(head.bias.size(), 0.0);
    state.v_bias.assign(head.bias.size(), 0.0);
  }
  if (state.m_weights.size() != head.weights.size() ||
      state.m_bias.size() != head.bias.size()) {
    throw ValidationError("adam_step: state shape mismatch");
  }
  for (const double v : grad.weights) {
    if (!std::isfinite(v)) throw NumericError("adam_step: non-finite gradient");
  }
  for (const double v : grad.bias) {
    if (!std::isfinite(v)) throw NumericError("adam_step: non-finite gradient");
  }

  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(cfg.adam_beta1, t);
  const double bc2 = 1.0 - std::pow(cfg.adam_beta2, t);

  auto update = [&](std::vector<double>& theta, const std::vector<double>& g,
                    std::vector<double>& m, std::vector<double>& v) {
    for (std::size_t i = 0; i < theta.size(); ++i) {
      m[i] = cfg.adam_beta1 * m[i] + (1.0 - cfg.adam_beta1) * g[i];
      v[i] = cfg.adam_beta2 * v[i] + (1.0 - cfg.adam_beta2) * g[i] * g[i];
      const double m_hat = m[i] / bc1;
      const double v_hat = v[i] / bc2;
      theta[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.adam_eps);
      if (!std::isfinite(theta[i])) {
        throw NumericError("adam_step: parameter became non-finite");
      }
    }
  };
  update(head.weights, grad.weights, state.m_weights, state.v_weights);
  update(head.bias, grad.bias, state.m_bias, state.v_bias);
}

std::pair<ProjectionHead, LossTrace> train(const EmbeddingMatrix& matrix,
                                           const std::vector<int>& labels,
                                           const TrainConfig& cfg) {
  if (labels.size() != matrix.rows()) {
    throw ValidationError("train: label count does not match embedding rows");
  }
  if (cfg.learning_rate < 0.0) throw ValidationError("learning rate must be >= 0");
  Rng rng(cfg.seed);
  ProjectionHead head = init_head(matrix.dim, cfg, rng);
  AdamState state;
  LossTrace trace;
  trace.records.reserve(static_cast<std::size_t>(cfg.epochs) * cfg.episodes_per_epoch);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (int ep = 0; ep < cfg.episodes_per_epoch; ++ep) {
      const Episode episode = sample_episode(labels, cfg, rng);
      const EpisodeResult res = episode_loss_and_grad(head, matrix, episode);
      adam_step(head, res.grad, state, cfg);
      trace.records.push_back({epoch, ep, res.loss, res.accuracy});
    }
  }
  return {std::move(head), std::move(trace)};
}

double finite_diff_check(const ProjectionHead& head, const EmbeddingMatrix& matrix,
                         const Episode& episode, double epsilon) {
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be > 0");
  const EpisodeResult analytic = episode_loss_and_grad(head, matrix, episode);

  ProjectionHead probe = head;
  auto loss_at = [&]() {
    return episode_loss_and_grad(probe, matrix, episode).loss;
  };
  double max_err = 0.0;
  auto check_param = [&](double& theta, double analytic_g) {
    const double saved = theta;
    theta = saved + epsilon;
    const double up = loss_at();
    theta = saved - epsilon;
    const double down = loss_at();
    theta = saved;
    const double numeric = (up - down) / (2.0 * epsilon);
    const double err = std::abs(analytic_g - numeric) /
                       std::max(1e-12, std::abs(analytic_g) + std::abs(numeric));
    max_err = std::max(max_err, err);
  };
  for (std::size_t i = 0; i < probe.weights.size(); ++i) {
    check_param(probe.weights[i], analytic.grad.weights[i]);
  }
  for (std::size_t i = 0; i < probe.bias.size(); ++i) {
    check_param(probe.bias[i], analytic.grad.bias[i]);
  }
  return max_err;
}

void save_head(const ProjectionHead& head, const std::filesystem::path& path) {
  check_head(head);
  std::string out = "protohead " + std::to_string(head.input_dim) + " " +
                    std::to_string(head.output_dim) + " " +
                    activation_name(head.activation) + "\n";
  for (int p = 0; p < head.output_dim; ++p) {
    const double* row = head.weights.data() + static_cast<std::size_t>(p) * head.input_dim;
    for (int d = 0; d < head.input_dim; ++d) {
      if (d > 0) out += ' ';
      out += format_double(row[d]);
    }
    out += ' ';
    out += format_double(head.bias[p]);
    out += '\n';
  }
  write_file(path, out);
}

ProjectionHead load_head(const std::filesystem::path& path) {
  const auto lines = split_lines(read_file(path));
  if (lines.empty()) throw ValidationError(path.string() + ": missing protohead header");
  std::istringstream header(lines[0]);
  std::string magic, act;
  int in_dim = 0, out_dim = 0;
  header >> magic >> in_dim >> out_dim >> act;
  if (magic != "protohead" || header.fail() || in_dim <= 0 || out_dim <= 0 ||
      (act != "identity" && act != "tanh")) {
    throw ValidationError(path.string() + ": malformed header \"" + lines[0] + "\"");
  }
  if (static_cast<int>(lines.size()) - 1 != out_dim) {
    throw ValidationError(path.string() + ": expected " + std::to_string(out_dim) +
                          " parameter rows, got " + std::to_string(lines.size() - 1));
  }
  ProjectionHead head;
  head.input_dim = in_dim;
  head.output_dim = out_dim;
  head.activation = act == "tanh" ? Activation::Tanh : Activation::Identity;
  head.weights.reserve(static_cast<std::size_t>(out_dim) * in_dim);
  head.bias.reserve(out_dim);
  for (int p = 0; p < out_dim; ++p) {
    std::istringstream row(lines[static_cast<std::size_t>(p) + 1]);
    std::string field;
    std::vector<double> vals;
    while (row >> field) {
      const auto v = parse_double(field);
      if (!v) {
        throw ValidationError(path.string() + " row " + std::to_string(p + 1) +
                              ": non-numeric value \"" + field + "\"");
      }
      vals.push_back(*v);
    }
    if (static_cast<int>(vals.size()) != in_dim + 1) {
      throw ValidationError(path.string() + " row " + std::to_string(p + 1) +
                            ": expected " + std::to_string(in_dim + 1) + " values");
    }
    head.weights.insert(head.weights.end(), vals.begin(), vals.end() - 1);
    head.bias.push_back(vals.back());
  }
  return head;
}

}  // namespace prototopic
