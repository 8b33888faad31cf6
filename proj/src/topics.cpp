#include "prototopic/topics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "json.hpp"
#include "prototopic/errors.hpp"
#include "prototopic/kernels.hpp"
#include "prototopic/text_io.hpp"

namespace prototopic {

namespace {

std::vector<double> project_all(const ProjectionHead& head,
                                const EmbeddingMatrix& matrix) {
  if (head.input_dim != matrix.dim) {
    throw ValidationError("head input dim does not match embedding dim");
  }
  std::vector<double> z(matrix.rows() * static_cast<std::size_t>(head.output_dim));
  kernels::project_rows(head.weights.data(), head.bias.data(), head.activation,
                        head.output_dim, head.input_dim, matrix.values.data(),
                        static_cast<int>(matrix.rows()), z.data());
  return z;
}

}  // namespace

double ctfidf_score(double tf, double global_count, double avg_class_tokens) {
  return tf * std::log(1.0 + avg_class_tokens / global_count);
}

Prototypes finalize_prototypes(const ProjectionHead& head,
                               const EmbeddingMatrix& matrix,
                               const std::vector<int>& labels, int expected_k) {
  if (labels.size() != matrix.rows()) {
    throw ValidationError("label count does not match embedding rows");
  }
  if (labels.empty()) throw ValidationError("cannot build prototypes from no documents");

  std::vector<int> class_ids;
  std::vector<int> positions(labels.size());
  if (expected_k >= 0) {
    std::vector<std::int64_t> counts(expected_k, 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] < 0 || labels[i] >= expected_k) {
        throw ValidationError("label " + std::to_string(labels[i]) +
                              " outside 0.." + std::to_string(expected_k - 1));
      }
      positions[i] = labels[i];
      ++counts[labels[i]];
    }
    for (int c = 0; c < expected_k; ++c) {
      if (counts[c] == 0) {
        throw ValidationError("class " + std::to_string(c) +
                              " has no member documents");
      }
      class_ids.push_back(c);
    }
  } else {
    class_ids = labels;
    std::sort(class_ids.begin(), class_ids.end());
    class_ids.erase(std::unique(class_ids.begin(), class_ids.end()), class_ids.end());
    std::unordered_map<int, int> pos;
    for (std::size_t i = 0; i < class_ids.size(); ++i) {
      pos.emplace(class_ids[i], static_cast<int>(i));
    }
    for (std::size_t i = 0; i < labels.size(); ++i) positions[i] = pos[labels[i]];
  }

  const int k = static_cast<int>(class_ids.size());
  const int P = head.output_dim;
  const std::vector<double> z = project_all(head, matrix);

  Prototypes protos;
  protos.class_ids = std::move(class_ids);
  protos.dim = P;
  protos.vectors.assign(static_cast<std::size_t>(k) * P, 0.0);
  std::vector<int> counts(k, 0);
  kernels::group_means(z.data(), static_cast<int>(matrix.rows()), P,
                       positions.data(), k, protos.vectors.data(), counts.data());
  return protos;
}

std::vector<int> assign_topics(const ProjectionHead& head,
                               const EmbeddingMatrix& matrix,
                               const Prototypes& prototypes) {
  if (prototypes.class_ids.empty()) throw ValidationError("no prototypes to assign to");
  if (prototypes.dim != head.output_dim) {
    throw ValidationError("prototype dim does not match head output dim");
  }
  const std::vector<double> z = project_all(head, matrix);
  const int k = static_cast<int>(prototypes.class_ids.size());
  std::vector<int> nearest(matrix.rows(), 0);
  kernels::nearest_assign(z.data(), static_cast<int>(matrix.rows()), prototypes.dim,
                          prototypes.vectors.data(), k, nearest.data(), nullptr);
  std::vector<int> topics(matrix.rows());
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    topics[i] = prototypes.class_ids[nearest[i]];
  }
  return topics;
}

std::pair<std::map<int, std::vector<TopicKeyword>>, CtfidfTable> ctfidf_keywords(
    const Corpus& corpus, const std::vector<std::pair<std::string, int>>& assignments,
    int top_n) {
  if (top_n < 1) throw ValidationError("top_n must be >= 1");
  std::unordered_map<std::string, const Document*> by_id;
  for (const auto& doc : corpus.documents) by_id.emplace(doc.id, &doc);

  std::map<int, std::map<std::string, std::int64_t>> topic_counts;
  std::map<int, std::int64_t> topic_totals;
  for (const auto& [doc_id, topic] : assignments) {
    const auto it = by_id.find(doc_id);
    if (it == by_id.end()) {
      throw ValidationError("assignment references unknown document \"" + doc_id + "\"");
    }
    auto& counts = topic_counts[topic];
    auto& total = topic_totals[topic];
    for (const auto& tok : it->second->tokens) {
      ++counts[tok];
      ++total;
    }
  }

  CtfidfTable table;
  std::int64_t grand_total = 0;
  for (const auto& [topic, total] : topic_totals) {
    if (total == 0) {
      throw ValidationError("topic " + std::to_string(topic) +
                            " has zero tokens; cannot extract keywords");
    }
    grand_total += total;
  }
  if (topic_totals.empty()) throw ValidationError("no topics to extract keywords for");
  table.avg_class_tokens =
      static_cast<double>(grand_total) / static_cast<double>(topic_totals.size());

  for (const auto& [topic, counts] : topic_counts) {
    for (const auto& [term, c] : counts) table.global_counts[term] += c;
  }

  std::map<int, std::vector<TopicKeyword>> keywords;
  for (const auto& [topic, counts] : topic_counts) {
    auto& entries = table.per_topic[topic];
    entries.reserve(counts.size());
    const double total = static_cast<double>(topic_totals[topic]);
    for (const auto& [term, c] : counts) {
      CtfidfEntry e;
      e.term = term;
      e.tf = static_cast<double>(c) / total;
      e.score = ctfidf_score(e.tf, static_cast<double>(table.global_counts[term]),
                             table.avg_class_tokens);
      entries.push_back(std::move(e));
    }
    std::vector<TopicKeyword> ranked;
    ranked.reserve(entries.size());
    for (const auto& e : entries) ranked.push_back({e.term, e.score});
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.term < b.term;
    });
    if (static_cast<int>(ranked.size()) > top_n) ranked.resize(top_n);
    keywords.emplace(topic, std::move(ranked));
  }
  return {std::move(keywords), std::move(table)};
}

TopicModel build_topic_model(const ProjectionHead& head, const EmbeddingMatrix& matrix,
                             const std::vector<int>& labels, const Corpus& corpus,
                             int num_topics, int top_n) {
  const Prototypes protos = finalize_prototypes(head, matrix, labels, num_topics);
  const std::vector<int> topics = assign_topics(head, matrix, protos);

  TopicModel model;
  model.proto_dim = protos.dim;
  std::map<int, int> sizes;
  for (const int t : topics) ++sizes[t];

  for (std::size_t pos = 0; pos < protos.class_ids.size(); ++pos) {
    const int id = protos.class_ids[pos];
    if (sizes.find(id) == sizes.end()) {
      model.notices.push_back("topic " + std::to_string(id) +
                              " dropped: no documents after reassignment");
      continue;
    }
    model.topic_ids.push_back(id);
    const auto row = protos.row(pos);
    model.prototypes.insert(model.prototypes.end(), row.begin(), row.end());
  }
  model.sizes = std::move(sizes);

  model.assignments.reserve(matrix.rows());
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    model.assignments.emplace_back(matrix.doc_ids[i], topics[i]);
  }

  auto [keywords, table] = ctfidf_keywords(corpus, model.assignments, top_n);
  model.keywords = std::move(keywords);
  return model;
}

void save_topic_model(const TopicModel& model, const std::filesystem::path& path) {
  nlohmann::json out;
  out["topics"] = nlohmann::json::array();
  for (const int id : model.topic_ids) {
    nlohmann::json t;
    t["id"] = id;
    t["size"] = model.sizes.at(id);
    t["keywords"] = nlohmann::json::array();
    for (const auto& kw : model.keywords.at(id)) {
      t["keywords"].push_back({{"term", kw.term}, {"score", kw.score}});
    }
    out["topics"].push_back(std::move(t));
  }
  out["assignments"] = nlohmann::json::array();
  for (const auto& [doc_id, topic] : model.assignments) {
    out["assignments"].push_back({{"doc_id", doc_id}, {"topic_id", topic}});
  }
  write_file(path, out.dump(2) + "\n");
}

TopicModel load_topic_model(const std::filesystem::path& path) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path.string() + ": invalid json: " + e.what());
  }
  TopicModel model;
  try {
    for (const auto& t : obj.at("topics")) {
      const int id = t.at("id").get<int>();
      model.topic_ids.push_back(id);
      model.sizes[id] = t.at("size").get<int>();
      auto& kws = model.keywords[id];
      for (const auto& kw : t.at("keywords")) {
        kws.push_back({kw.at("term").get<std::string>(), kw.at("score").get<double>()});
      }
    }
    for (const auto& a : obj.at("assignments")) {
      model.assignments.emplace_back(a.at("doc_id").get<std::string>(),
                                     a.at("topic_id").get<int>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": unexpected topics schema: " + e.what());
  }
  return model;
}

}  // namespace prototopic
