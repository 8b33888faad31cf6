#pragma once

#include <map>
#include <string>
#include <vector>

#include "prototopic/corpus.hpp"
#include "prototopic/topics.hpp"

namespace prototopic {

struct CoherenceReport {
  int window_size = 0;
  int top_n_words = 0;
  std::map<int, double> per_topic;
  double mean = 0.0;
  std::vector<std::string> notices;  // words dropped as out-of-vocabulary
};

struct DiversityReport {
  int top_n = 0;
  std::int64_t unique_count = 0;
  std::int64_t total_count = 0;
  double diversity = 0.0;
};

struct TTestResult {
  double t_statistic = 0.0;
  double degrees_of_freedom = 0.0;
  double p_value = 0.0;
  bool two_sided = true;
};

// C_V coherence: boolean sliding windows over preprocessed tokens (windows
// never span documents; shorter documents contribute one window), NPMI
// context vectors with one-set segmentation, cosine similarity, arithmetic
// mean over each topic's words. Topic words absent from the vocabulary are
// dropped with a notice; a topic with no remaining words is an error.
CoherenceReport coherence_cv(const Corpus& corpus,
                             const std::map<int, std::vector<std::string>>& topic_words,
                             int window_size = 110, int top_n_words = 10);

// Fraction of distinct terms among the top-N keywords pooled over topics.
DiversityReport topic_diversity(const TopicModel& model, int top_n = 25);

// Welch's unequal-variance t-test, two-sided p via the regularized
// incomplete beta function.
TTestResult welch_ttest(const std::vector<double>& sample_a,
                        const std::vector<double>& sample_b);

// Regularized incomplete beta I_x(a, b); exposed for direct verification.
double incomplete_beta(double a, double b, double x);

}  // namespace prototopic
