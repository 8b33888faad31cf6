#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "prototopic/corpus.hpp"
#include "prototopic/eval.hpp"
#include "prototopic/protonet.hpp"

namespace prototopic {

inline constexpr const char* kToolkitVersion = "0.1.0";

inline constexpr const char* kPreprocessedFile = "preprocessed.jsonl";
inline constexpr const char* kEmbeddingsFile = "embeddings.emb1";
inline constexpr const char* kLabelsFile = "labels.jsonl";
inline constexpr const char* kHeadFile = "head.protohead";
inline constexpr const char* kTraceFile = "trace.jsonl";
inline constexpr const char* kTopicsFile = "topics.json";
inline constexpr const char* kEvalFile = "eval.json";
inline constexpr const char* kManifestFile = "manifest.json";

struct EmbeddingSourceConfig {
  enum class Kind { Hash, File };
  Kind kind = Kind::Hash;
  std::filesystem::path path;   // file mode
  int dim = 128;                // hash mode
  std::uint64_t seed = 1;       // hash mode
};

struct KmeansConfig {
  std::uint64_t seed = 1;
  int max_iter = 300;
  double tol = 1e-6;
};

struct EvalConfig {
  int coherence_top_n = 10;
  int window_size = 110;
  int diversity_top_n = 25;
};

struct PipelineConfig {
  std::filesystem::path corpus_path;
  CorpusFormat corpus_format = CorpusFormat::Jsonl;
  std::optional<std::filesystem::path> stopword_path;
  EmbeddingSourceConfig embedding;
  bool normalize = true;
  int num_topics = 0;
  KmeansConfig kmeans;
  TrainConfig train;
  int keywords_top_n = 25;
  EvalConfig eval;
  std::filesystem::path output_dir = "out";
  int workers = 0;
};

// Command-line values that win over the config file.
struct ConfigOverrides {
  std::optional<std::string> corpus_path;
  std::optional<std::string> corpus_format;
  std::optional<std::string> stopword_path;
  std::optional<std::string> embed_source;
  std::optional<std::string> embed_path;
  std::optional<int> embed_dim;
  std::optional<std::uint64_t> embed_seed;
  std::optional<bool> normalize;
  std::optional<int> num_topics;
  std::optional<std::uint64_t> kmeans_seed;
  std::optional<int> kmeans_max_iter;
  std::optional<double> kmeans_tol;
  std::optional<int> n_way;
  std::optional<int> k_shot;
  std::optional<int> q_query;
  std::optional<int> episodes_per_epoch;
  std::optional<int> epochs;
  std::optional<double> learning_rate;
  std::optional<std::uint64_t> train_seed;
  std::optional<int> output_dim;
  std::optional<std::string> activation;
  std::optional<int> keywords_top_n;
  std::optional<int> coherence_top_n;
  std::optional<int> window_size;
  std::optional<int> diversity_top_n;
  std::optional<std::string> output_dir;
  std::optional<int> workers;
};

// Parses the config file (if given), applies overrides, validates every
// constraint before anything runs.
PipelineConfig load_config(const std::optional<std::filesystem::path>& config_path,
                           const ConfigOverrides& overrides);

enum class Stage { Preprocess, Embed, Cluster, Train, Topics, Eval };

Stage stage_from_name(const std::string& name);
std::string stage_name(Stage stage);

// Runs one stage against the configured output directory; returns the
// artifact files it wrote. Missing stage inputs raise MissingInputError
// naming the file and the stage that produces it.
std::vector<std::filesystem::path> run_stage(Stage stage, const PipelineConfig& config);

// All stages in order; writes a manifest with artifact digests.
std::vector<std::filesystem::path> run_pipeline(const PipelineConfig& config);

// Markdown table (one row per run found in dir or its immediate
// subdirectories, sorted by topic count).
std::string report_table(const std::filesystem::path& artifact_dir);

// Reads one-number-per-line files and runs Welch's t-test.
TTestResult ttest_files(const std::filesystem::path& file_a,
                        const std::filesystem::path& file_b);

}  // namespace prototopic
