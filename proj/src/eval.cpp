#include "prototopic/eval.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "prototopic/errors.hpp"
#include "prototopic/kernels.hpp"

namespace prototopic {

namespace {

constexpr double kNpmiEps = 1e-12;

double npmi(double p_joint, double p_i, double p_j) {
  const double joint = p_joint + kNpmiEps;
  return std::log(joint / (p_i * p_j)) / (-std::log(joint));
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a == b) return 1.0;
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

CoherenceReport coherence_cv(const Corpus& corpus,
                             const std::map<int, std::vector<std::string>>& topic_words,
                             int window_size, int top_n_words) {
  if (window_size < 1) throw ValidationError("window_size must be >= 1");
  if (topic_words.empty()) throw ValidationError("no topics to score");

  CoherenceReport report;
  report.window_size = window_size;
  report.top_n_words = top_n_words;

  // Keep per-topic words that exist in the vocabulary; index the union.
  std::map<int, std::vector<std::string>> kept;
  std::set<std::string> union_words;
  for (const auto& [topic, words] : topic_words) {
    if (words.empty()) {
      throw ValidationError("topic " + std::to_string(topic) + " has no words to score");
    }
    auto& lst = kept[topic];
    for (const auto& w : words) {
      if (corpus.vocabulary.contains(w)) {
        lst.push_back(w);
        union_words.insert(w);
      } else {
        report.notices.push_back("topic " + std::to_string(topic) + ": word \"" + w +
                                 "\" not in corpus vocabulary, dropped");
      }
    }
    if (lst.empty()) {
      throw ValidationError("topic " + std::to_string(topic) +
                            ": no topic word occurs in the corpus");
    }
  }

  std::unordered_map<std::string, int> word_index;
  int m = 0;
  for (const auto& w : union_words) word_index.emplace(w, m++);

  std::vector<std::vector<int>> docs;
  docs.reserve(corpus.documents.size());
  for (const auto& doc : corpus.documents) {
    std::vector<int> mapped(doc.tokens.size(), -1);
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
      const auto it = word_index.find(doc.tokens[i]);
      if (it != word_index.end()) mapped[i] = it->second;
    }
    docs.push_back(std::move(mapped));
  }

  std::vector<std::int64_t> counts(static_cast<std::size_t>(m) * m, 0);
  const std::int64_t total = kernels::window_counts(docs, window_size, m, counts.data());
  if (total == 0) throw ValidationError("corpus contains no token windows");
  const double n_windows = static_cast<double>(total);

  double sum_scores = 0.0;
  for (const auto& [topic, words] : kept) {
    const int t = static_cast<int>(words.size());
    std::vector<int> idx(t);
    for (int i = 0; i < t; ++i) idx[i] = word_index[words[i]];

    // Context vector of word i over the topic's own words (one-set segmentation).
    std::vector<std::vector<double>> context(t, std::vector<double>(t, 0.0));
    for (int i = 0; i < t; ++i) {
      const double p_i =
          static_cast<double>(counts[static_cast<std::size_t>(idx[i]) * m + idx[i]]) /
          n_windows;
      for (int j = 0; j < t; ++j) {
        const double p_j =
            static_cast<double>(counts[static_cast<std::size_t>(idx[j]) * m + idx[j]]) /
            n_windows;
        const double p_ij =
            static_cast<double>(counts[static_cast<std::size_t>(idx[i]) * m + idx[j]]) /
            n_windows;
        context[i][j] = npmi(p_ij, p_i, p_j);
      }
    }
    std::vector<double> combined(t, 0.0);
    for (int i = 0; i < t; ++i) {
      for (int j = 0; j < t; ++j) combined[j] += context[i][j];
    }
    double score = 0.0;
    for (int i = 0; i < t; ++i) score += cosine(context[i], combined);
    score /= static_cast<double>(t);
    report.per_topic.emplace(topic, score);
    sum_scores += score;
  }
  report.mean = sum_scores / static_cast<double>(report.per_topic.size());
  return report;
}

DiversityReport topic_diversity(const TopicModel& model, int top_n) {
  if (top_n < 1) throw ValidationError("top_n must be >= 1");
  if (model.topic_ids.empty()) throw ValidationError("topic model has no topics");

  DiversityReport report;
  report.top_n = top_n;
  std::set<std::string> distinct;
  for (const int id : model.topic_ids) {
    const auto it = model.keywords.find(id);
    if (it == model.keywords.end() || it->second.empty()) {
      throw ValidationError("topic " + std::to_string(id) + " has no keywords");
    }
    const int take = std::min<int>(top_n, static_cast<int>(it->second.size()));
    for (int i = 0; i < take; ++i) distinct.insert(it->second[i].term);
    report.total_count += take;
  }
  report.unique_count = static_cast<std::int64_t>(distinct.size());
  report.diversity =
      static_cast<double>(report.unique_count) / static_cast<double>(report.total_count);
  return report;
}

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;

  // Lentz continued fraction for the incomplete beta.
  auto betacf = [](double a, double b, double x) {
    constexpr double kFpMin = 1e-300;
    constexpr double kEps = 3e-16;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int mi = 1; mi <= 300; ++mi) {
      const double m2 = 2.0 * mi;
      double aa = mi * (b - mi) * x / ((qam + m2) * (a + m2));
      d = 1.0 + aa * d;
      if (std::abs(d) < kFpMin) d = kFpMin;
      c = 1.0 + aa / c;
      if (std::abs(c) < kFpMin) c = kFpMin;
      d = 1.0 / d;
      h *= d * c;
      aa = -(a + mi) * (qab + mi) * x / ((a + m2) * (qap + m2));
      d = 1.0 + aa * d;
      if (std::abs(d) < kFpMin) d = kFpMin;
      c = 1.0 + aa / c;
      if (std::abs(c) < kFpMin) c = kFpMin;
      d = 1.0 / d;
      const double del = d * c;
      h *= del;
      if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
  };

  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log(1.0 - x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betacf(a, b, x) / a;
  }
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

TTestResult welch_ttest(const std::vector<double>& sample_a,
                        const std::vector<double>& sample_b) {
  const std::size_t na = sample_a.size();
  const std::size_t nb = sample_b.size();
  if (na < 2 || nb < 2) {
    throw ValidationError("welch_ttest: each sample needs at least 2 values");
  }
  auto mean_of = [](const std::vector<double>& s) {
    double sum = 0.0;
    for (const double v : s) sum += v;
    return sum / static_cast<double>(s.size());
  };
  auto var_of = [](const std::vector<double>& s, double mean) {
    double acc = 0.0;
    for (const double v : s) acc += (v - mean) * (v - mean);
    return acc / static_cast<double>(s.size() - 1);
  };
  const double ma = mean_of(sample_a);
  const double mb = mean_of(sample_b);
  const double va = var_of(sample_a, ma);
  const double vb = var_of(sample_b, mb);
  if (va == 0.0 && vb == 0.0) {
    throw ValidationError("welch_ttest: both samples have zero variance");
  }

  const double qa = va / static_cast<double>(na);
  const double qb = vb / static_cast<double>(nb);
  const double se2 = qa + qb;
  TTestResult result;
  result.t_statistic = (ma - mb) / std::sqrt(se2);
  result.degrees_of_freedom =
      se2 * se2 / (qa * qa / static_cast<double>(na - 1) +
                   qb * qb / static_cast<double>(nb - 1));
  const double t2 = result.t_statistic * result.t_statistic;
  const double df = result.degrees_of_freedom;
  result.p_value = incomplete_beta(df / 2.0, 0.5, df / (df + t2));
  result.two_sided = true;
  if (!std::isfinite(result.t_statistic) || !std::isfinite(result.p_value)) {
    throw NumericError("welch_ttest produced non-finite results");
  }
  return result;
}

}  // namespace prototopic
