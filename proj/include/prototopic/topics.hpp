#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "prototopic/corpus.hpp"
#include "prototopic/protonet.hpp"

namespace prototopic {

struct TopicKeyword {
  std::string term;
  double score = 0.0;
};

struct TopicModel {
  std::vector<int> topic_ids;
  int proto_dim = 0;
  std::vector<double> prototypes;  // one row per topic id
  std::vector<std::pair<std::string, int>> assignments;  // doc_id -> topic, corpus order
  std::map<int, std::vector<TopicKeyword>> keywords;     // sorted by score desc, term asc
  std::map<int, int> sizes;
  std::vector<std::string> notices;  // e.g. dropped empty topics
};

struct CtfidfEntry {
  std::string term;
  double tf = 0.0;      // class-normalized term frequency
  double score = 0.0;   // tf * ln(1 + A / f_t)
};

struct CtfidfTable {
  double avg_class_tokens = 0.0;                   // A
  std::map<std::string, std::int64_t> global_counts;  // f_t
  std::map<int, std::vector<CtfidfEntry>> per_topic;  // terms occurring in the topic
};

// The c-TF-IDF weighting. Exposed so the monotonicity properties can be
// checked on the formula directly.
double ctfidf_score(double tf, double global_count, double avg_class_tokens);

// Per-class mean of projected embeddings over all members of each label.
// When expected_k >= 0, labels must cover 0..expected_k-1 with no empty class.
Prototypes finalize_prototypes(const ProjectionHead& head,
                               const EmbeddingMatrix& matrix,
                               const std::vector<int>& labels,
                               int expected_k = -1);

// Nearest prototype per document, ties to the lowest topic id.
std::vector<int> assign_topics(const ProjectionHead& head,
                               const EmbeddingMatrix& matrix,
                               const Prototypes& prototypes);

// Ranked keywords per topic from the concatenated member documents.
std::pair<std::map<int, std::vector<TopicKeyword>>, CtfidfTable> ctfidf_keywords(
    const Corpus& corpus, const std::vector<std::pair<std::string, int>>& assignments,
    int top_n);

// Full model: prototypes from pseudo-labels, reassignment, keywords.
// Topics left empty after reassignment are dropped with a notice.
TopicModel build_topic_model(const ProjectionHead& head, const EmbeddingMatrix& matrix,
                             const std::vector<int>& labels, const Corpus& corpus,
                             int num_topics, int top_n);

void save_topic_model(const TopicModel& model, const std::filesystem::path& path);
TopicModel load_topic_model(const std::filesystem::path& path);

}  // namespace prototopic
