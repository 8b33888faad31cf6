#include "prototopic/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>

#include "json.hpp"
#include "prototopic/clustering.hpp"
#include "prototopic/embedding.hpp"
#include "prototopic/errors.hpp"
#include "prototopic/kernels.hpp"
#include "prototopic/text_io.hpp"
#include "prototopic/topics.hpp"

namespace prototopic {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ValidationError("config: unknown key \"" + key + "\" in " + where);
    }
  }
}

Activation activation_from_name(const std::string& name) {
  if (name == "identity") return Activation::Identity;
  if (name == "tanh") return Activation::Tanh;
  throw ValidationError("config: activation must be \"identity\" or \"tanh\", got \"" +
                        name + "\"");
}

CorpusFormat format_from_name(const std::string& name) {
  if (name == "jsonl") return CorpusFormat::Jsonl;
  if (name == "tsv") return CorpusFormat::Tsv;
  throw ValidationError("config: corpus format must be \"jsonl\" or \"tsv\", got \"" +
                        name + "\"");
}

PipelineConfig config_from_json(const json& root) {
  reject_unknown_keys(root,
                      {"corpus", "stopwords", "embedding", "normalize", "num_topics",
                       "kmeans", "train", "keywords", "eval", "output_dir", "workers"},
                      "top level");
  PipelineConfig cfg;
  if (root.contains("corpus")) {
    const auto& c = root.at("corpus");
    reject_unknown_keys(c, {"path", "format"}, "corpus");
    if (c.contains("path")) cfg.corpus_path = c.at("path").get<std::string>();
    if (c.contains("format")) {
      cfg.corpus_format = format_from_name(c.at("format").get<std::string>());
    }
  }
  if (root.contains("stopwords")) {
    cfg.stopword_path = fs::path(root.at("stopwords").get<std::string>());
  }
  if (root.contains("embedding")) {
    const auto& e = root.at("embedding");
    reject_unknown_keys(e, {"source", "path", "dim", "seed"}, "embedding");
    const std::string source = e.value("source", "hash");
    if (source == "hash") {
      cfg.embedding.kind = EmbeddingSourceConfig::Kind::Hash;
    } else if (source == "file") {
      cfg.embedding.kind = EmbeddingSourceConfig::Kind::File;
    } else {
      throw ValidationError("config: embedding source must be \"hash\" or \"file\"");
    }
    if (e.contains("path")) cfg.embedding.path = e.at("path").get<std::string>();
    if (e.contains("dim")) cfg.embedding.dim = e.at("dim").get<int>();
    if (e.contains("seed")) cfg.embedding.seed = e.at("seed").get<std::uint64_t>();
  }
  if (root.contains("normalize")) cfg.normalize = root.at("normalize").get<bool>();
  if (root.contains("num_topics")) cfg.num_topics = root.at("num_topics").get<int>();
  if (root.contains("kmeans")) {
    const auto& k = root.at("kmeans");
    reject_unknown_keys(k, {"seed", "max_iter", "tol"}, "kmeans");
    if (k.contains("seed")) cfg.kmeans.seed = k.at("seed").get<std::uint64_t>();
    if (k.contains("max_iter")) cfg.kmeans.max_iter = k.at("max_iter").get<int>();
    if (k.contains("tol")) cfg.kmeans.tol = k.at("tol").get<double>();
  }
  if (root.contains("train")) {
    const auto& t = root.at("train");
    reject_unknown_keys(t,
                        {"n_way", "k_shot", "q_query", "episodes_per_epoch", "epochs",
                         "learning_rate", "adam_beta1", "adam_beta2", "adam_eps",
                         "seed", "output_dim", "activation"},
                        "train");
    if (t.contains("n_way")) cfg.train.n_way = t.at("n_way").get<int>();
    if (t.contains("k_shot")) cfg.train.k_shot = t.at("k_shot").get<int>();
    if (t.contains("q_query")) cfg.train.q_query = t.at("q_query").get<int>();
    if (t.contains("episodes_per_epoch")) {
      cfg.train.episodes_per_epoch = t.at("episodes_per_epoch").get<int>();
    }
    if (t.contains("epochs")) cfg.train.epochs = t.at("epochs").get<int>();
    if (t.contains("learning_rate")) {
      cfg.train.learning_rate = t.at("learning_rate").get<double>();
    }
    if (t.contains("adam_beta1")) cfg.train.adam_beta1 = t.at("adam_beta1").get<double>();
    if (t.contains("adam_beta2")) cfg.train.adam_beta2 = t.at("adam_beta2").get<double>();
    if (t.contains("adam_eps")) cfg.train.adam_eps = t.at("adam_eps").get<double>();
    if (t.contains("seed")) cfg.train.seed = t.at("seed").get<std::uint64_t>();
    if (t.contains("output_dim")) cfg.train.output_dim = t.at("output_dim").get<int>();
    if (t.contains("activation")) {
      cfg.train.activation = activation_from_name(t.at("activation").get<std::string>());
    }
  }
  if (root.contains("keywords")) {
    const auto& k = root.at("keywords");
    reject_unknown_keys(k, {"top_n"}, "keywords");
    if (k.contains("top_n")) cfg.keywords_top_n = k.at("top_n").get<int>();
  }
  if (root.contains("eval")) {
    const auto& e = root.at("eval");
    reject_unknown_keys(e, {"coherence_top_n", "window_size", "diversity_top_n"}, "eval");
    if (e.contains("coherence_top_n")) {
      cfg.eval.coherence_top_n = e.at("coherence_top_n").get<int>();
    }
    if (e.contains("window_size")) cfg.eval.window_size = e.at("window_size").get<int>();
    if (e.contains("diversity_top_n")) {
      cfg.eval.diversity_top_n = e.at("diversity_top_n").get<int>();
    }
  }
  if (root.contains("output_dir")) {
    cfg.output_dir = fs::path(root.at("output_dir").get<std::string>());
  }
  if (root.contains("workers")) cfg.workers = root.at("workers").get<int>();
  return cfg;
}

void apply_overrides(PipelineConfig& cfg, const ConfigOverrides& ov) {
  if (ov.corpus_path) cfg.corpus_path = *ov.corpus_path;
  if (ov.corpus_format) cfg.corpus_format = format_from_name(*ov.corpus_format);
  if (ov.stopword_path) cfg.stopword_path = fs::path(*ov.stopword_path);
  if (ov.embed_source) {
    if (*ov.embed_source == "hash") {
      cfg.embedding.kind = EmbeddingSourceConfig::Kind::Hash;
    } else if (*ov.embed_source == "file") {
      cfg.embedding.kind = EmbeddingSourceConfig::Kind::File;
    } else {
      throw ValidationError("embedding source must be \"hash\" or \"file\"");
    }
  }
  if (ov.embed_path) cfg.embedding.path = *ov.embed_path;
  if (ov.embed_dim) cfg.embedding.dim = *ov.embed_dim;
  if (ov.embed_seed) cfg.embedding.seed = *ov.embed_seed;
  if (ov.normalize) cfg.normalize = *ov.normalize;
  if (ov.num_topics) cfg.num_topics = *ov.num_topics;
  if (ov.kmeans_seed) cfg.kmeans.seed = *ov.kmeans_seed;
  if (ov.kmeans_max_iter) cfg.kmeans.max_iter = *ov.kmeans_max_iter;
  if (ov.kmeans_tol) cfg.kmeans.tol = *ov.kmeans_tol;
  if (ov.n_way) cfg.train.n_way = *ov.n_way;
  if (ov.k_shot) cfg.train.k_shot = *ov.k_shot;
  if (ov.q_query) cfg.train.q_query = *ov.q_query;
  if (ov.episodes_per_epoch) cfg.train.episodes_per_epoch = *ov.episodes_per_epoch;
  if (ov.epochs) cfg.train.epochs = *ov.epochs;
  if (ov.learning_rate) cfg.train.learning_rate = *ov.learning_rate;
  if (ov.train_seed) cfg.train.seed = *ov.train_seed;
  if (ov.output_dim) cfg.train.output_dim = *ov.output_dim;
  if (ov.activation) cfg.train.activation = activation_from_name(*ov.activation);
  if (ov.keywords_top_n) cfg.keywords_top_n = *ov.keywords_top_n;
  if (ov.coherence_top_n) cfg.eval.coherence_top_n = *ov.coherence_top_n;
  if (ov.window_size) cfg.eval.window_size = *ov.window_size;
  if (ov.diversity_top_n) cfg.eval.diversity_top_n = *ov.diversity_top_n;
  if (ov.output_dir) cfg.output_dir = fs::path(*ov.output_dir);
  if (ov.workers) cfg.workers = *ov.workers;
}

void validate_config(const PipelineConfig& cfg) {
  if (cfg.corpus_path.empty()) throw ValidationError("config: corpus path is required");
  if (cfg.num_topics < 1) throw ValidationError("config: num_topics must be >= 1");
  if (cfg.num_topics < cfg.train.n_way) {
    throw ValidationError("config: num_topics (" + std::to_string(cfg.num_topics) +
                          ") must be >= train.n_way (" +
                          std::to_string(cfg.train.n_way) + ")");
  }
  if (cfg.embedding.kind == EmbeddingSourceConfig::Kind::File &&
      cfg.embedding.path.empty()) {
    throw ValidationError("config: embedding.path is required for source \"file\"");
  }
  if (cfg.embedding.kind == EmbeddingSourceConfig::Kind::Hash && cfg.embedding.dim < 2) {
    throw ValidationError("config: embedding.dim must be >= 2");
  }
  if (cfg.train.n_way < 2) throw ValidationError("config: train.n_way must be >= 2");
  if (cfg.train.k_shot < 1 || cfg.train.q_query < 1) {
    throw ValidationError("config: train.k_shot and train.q_query must be >= 1");
  }
  if (cfg.train.learning_rate <= 0.0) {
    throw ValidationError("config: train.learning_rate must be > 0");
  }
  if (cfg.train.epochs < 1 || cfg.train.episodes_per_epoch < 1) {
    throw ValidationError("config: train.epochs and train.episodes_per_epoch must be >= 1");
  }
  if (cfg.train.output_dim < 1) throw ValidationError("config: train.output_dim must be >= 1");
  if (cfg.kmeans.max_iter < 1) throw ValidationError("config: kmeans.max_iter must be >= 1");
  if (cfg.keywords_top_n < 1) throw ValidationError("config: keywords.top_n must be >= 1");
  if (cfg.eval.coherence_top_n < 1 || cfg.eval.diversity_top_n < 1) {
    throw ValidationError("config: eval top_n values must be >= 1");
  }
  if (cfg.eval.window_size < 1) throw ValidationError("config: eval.window_size must be >= 1");
  if (cfg.workers < 0) throw ValidationError("config: workers must be >= 0");
}

json config_snapshot(const PipelineConfig& cfg) {
  json root;
  root["corpus"] = {{"path", cfg.corpus_path.string()},
                    {"format", cfg.corpus_format == CorpusFormat::Jsonl ? "jsonl" : "tsv"}};
  if (cfg.stopword_path) root["stopwords"] = cfg.stopword_path->string();
  if (cfg.embedding.kind == EmbeddingSourceConfig::Kind::Hash) {
    root["embedding"] = {{"source", "hash"},
                         {"dim", cfg.embedding.dim},
                         {"seed", cfg.embedding.seed}};
  } else {
    root["embedding"] = {{"source", "file"}, {"path", cfg.embedding.path.string()}};
  }
  root["normalize"] = cfg.normalize;
  root["num_topics"] = cfg.num_topics;
  root["kmeans"] = {{"seed", cfg.kmeans.seed},
                    {"max_iter", cfg.kmeans.max_iter},
                    {"tol", cfg.kmeans.tol}};
  root["train"] = {{"n_way", cfg.train.n_way},
                   {"k_shot", cfg.train.k_shot},
                   {"q_query", cfg.train.q_query},
                   {"episodes_per_epoch", cfg.train.episodes_per_epoch},
                   {"epochs", cfg.train.epochs},
                   {"learning_rate", cfg.train.learning_rate},
                   {"adam_beta1", cfg.train.adam_beta1},
                   {"adam_beta2", cfg.train.adam_beta2},
                   {"adam_eps", cfg.train.adam_eps},
                   {"seed", cfg.train.seed},
                   {"output_dim", cfg.train.output_dim},
                   {"activation", cfg.train.activation == Activation::Tanh ? "tanh"
                                                                           : "identity"}};
  root["keywords"] = {{"top_n", cfg.keywords_top_n}};
  root["eval"] = {{"coherence_top_n", cfg.eval.coherence_top_n},
                  {"window_size", cfg.eval.window_size},
                  {"diversity_top_n", cfg.eval.diversity_top_n}};
  root["output_dir"] = cfg.output_dir.string();
  root["workers"] = cfg.workers;
  return root;
}

fs::path artifact_path(const PipelineConfig& cfg, const char* name) {
  return cfg.output_dir / name;
}

void require_artifact(const PipelineConfig& cfg, const char* name,
                      const std::string& producing_stage) {
  const fs::path p = artifact_path(cfg, name);
  if (!fs::exists(p)) {
    throw MissingInputError("missing input " + p.string() + "; run the \"" +
                            producing_stage + "\" stage to produce it");
  }
}

Corpus load_preprocessed(const PipelineConfig& cfg) {
  const fs::path p = artifact_path(cfg, kPreprocessedFile);
  const auto lines = split_lines(read_file(p));
  Corpus corpus;
  corpus.documents.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    json obj;
    try {
      obj = json::parse(lines[i]);
    } catch (const json::parse_error& e) {
      throw ValidationError(p.string() + " line " + std::to_string(i + 1) +
                            ": invalid json: " + e.what());
    }
    Document doc;
    try {
      doc.id = obj.at("id").get<std::string>();
      doc.tokens = obj.at("tokens").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
      throw ValidationError(p.string() + " line " + std::to_string(i + 1) +
                            ": unexpected schema: " + e.what());
    }
    corpus.documents.push_back(std::move(doc));
  }
  corpus.vocabulary = build_vocabulary(corpus.documents);
  return corpus;
}

std::vector<int> load_labels_for(const PipelineConfig& cfg,
                                 const EmbeddingMatrix& matrix) {
  const fs::path p = artifact_path(cfg, kLabelsFile);
  const auto lines = split_lines(read_file(p));
  std::map<std::string, int> by_id;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    json obj;
    try {
      obj = json::parse(lines[i]);
      by_id.emplace(obj.at("id").get<std::string>(), obj.at("label").get<int>());
    } catch (const json::exception& e) {
      throw ValidationError(p.string() + " line " + std::to_string(i + 1) +
                            ": invalid label record: " + e.what());
    }
  }
  std::vector<int> labels;
  labels.reserve(matrix.rows());
  for (const auto& id : matrix.doc_ids) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw ValidationError(p.string() + ": no label for document \"" + id + "\"");
    }
    labels.push_back(it->second);
  }
  return labels;
}

std::vector<fs::path> stage_preprocess(const PipelineConfig& cfg) {
  if (!fs::exists(cfg.corpus_path)) {
    throw MissingInputError("corpus file not found: " + cfg.corpus_path.string());
  }
  std::unordered_set<std::string> stopwords;
  if (cfg.stopword_path) {
    if (!fs::exists(*cfg.stopword_path)) {
      throw MissingInputError("stopword file not found: " + cfg.stopword_path->string());
    }
    stopwords = load_stopwords(*cfg.stopword_path);
  }
  const Corpus raw = ingest(cfg.corpus_path, cfg.corpus_format);
  const Corpus prepared = preprocess(raw, stopwords);

  std::string out;
  for (const auto& doc : prepared.documents) {
    json line;
    line["id"] = doc.id;
    line["tokens"] = doc.tokens;
    out += line.dump();
    out += '\n';
  }
  const fs::path p = artifact_path(cfg, kPreprocessedFile);
  write_file(p, out);
  return {p};
}

std::vector<fs::path> stage_embed(const PipelineConfig& cfg) {
  require_artifact(cfg, kPreprocessedFile, "preprocess");
  const Corpus corpus = load_preprocessed(cfg);

  EmbeddingMatrix matrix;
  if (cfg.embedding.kind == EmbeddingSourceConfig::Kind::Hash) {
    matrix = hash_embed(corpus, cfg.embedding.dim, cfg.embedding.seed);
  } else {
    if (!fs::exists(cfg.embedding.path)) {
      throw MissingInputError("embedding file not found: " + cfg.embedding.path.string());
    }
    matrix = load_embeddings(cfg.embedding.path);
    // Align rows to corpus document order.
    std::map<std::string, std::size_t> row_of;
    for (std::size_t i = 0; i < matrix.rows(); ++i) row_of.emplace(matrix.doc_ids[i], i);
    if (matrix.rows() != corpus.documents.size()) {
      throw ValidationError("embedding file covers " + std::to_string(matrix.rows()) +
                            " documents, corpus has " +
                            std::to_string(corpus.documents.size()));
    }
    EmbeddingMatrix aligned;
    aligned.dim = matrix.dim;
    aligned.normalized = matrix.normalized;
    aligned.values.resize(matrix.values.size());
    for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
      const auto it = row_of.find(corpus.documents[i].id);
      if (it == row_of.end()) {
        throw ValidationError("embedding file has no row for document \"" +
                              corpus.documents[i].id + "\"");
      }
      aligned.doc_ids.push_back(corpus.documents[i].id);
      std::copy(matrix.row(it->second).begin(), matrix.row(it->second).end(),
                aligned.values.begin() + static_cast<std::ptrdiff_t>(i) * matrix.dim);
    }
    matrix = std::move(aligned);
    if (cfg.normalize) matrix = l2_normalize(matrix);
  }
  const fs::path p = artifact_path(cfg, kEmbeddingsFile);
  save_embeddings(matrix, p);
  return {p};
}

std::vector<fs::path> stage_cluster(const PipelineConfig& cfg) {
  require_artifact(cfg, kEmbeddingsFile, "embed");
  const EmbeddingMatrix matrix = load_embeddings(artifact_path(cfg, kEmbeddingsFile));
  const ClusterModel model = kmeans_fit(matrix, cfg.num_topics, cfg.kmeans.seed,
                                        cfg.kmeans.max_iter, cfg.kmeans.tol);
  std::string out;
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    json line;
    line["id"] = matrix.doc_ids[i];
    line["label"] = model.labels[i];
    out += line.dump();
    out += '\n';
  }
  const fs::path p = artifact_path(cfg, kLabelsFile);
  write_file(p, out);
  std::fprintf(stderr, "cluster: k=%d inertia=%s iterations=%d\n", model.k,
               format_double(model.inertia).c_str(), model.iterations_run);
  return {p};
}

std::vector<fs::path> stage_train(const PipelineConfig& cfg) {
  require_artifact(cfg, kEmbeddingsFile, "embed");
  require_artifact(cfg, kLabelsFile, "cluster");
  const EmbeddingMatrix matrix = load_embeddings(artifact_path(cfg, kEmbeddingsFile));
  const std::vector<int> labels = load_labels_for(cfg, matrix);
  const auto [head, trace] = train(matrix, labels, cfg.train);

  const fs::path head_path = artifact_path(cfg, kHeadFile);
  save_head(head, head_path);
  std::string out;
  for (const auto& rec : trace.records) {
    json line;
    line["epoch"] = rec.epoch;
    line["episode"] = rec.episode;
    line["loss"] = rec.loss;
    line["accuracy"] = rec.accuracy;
    out += line.dump();
    out += '\n';
  }
  const fs::path trace_path = artifact_path(cfg, kTraceFile);
  write_file(trace_path, out);
  return {head_path, trace_path};
}

std::vector<fs::path> stage_topics(const PipelineConfig& cfg) {
  require_artifact(cfg, kPreprocessedFile, "preprocess");
  require_artifact(cfg, kEmbeddingsFile, "embed");
  require_artifact(cfg, kLabelsFile, "cluster");
  require_artifact(cfg, kHeadFile, "train");
  const Corpus corpus = load_preprocessed(cfg);
  const EmbeddingMatrix matrix = load_embeddings(artifact_path(cfg, kEmbeddingsFile));
  const std::vector<int> labels = load_labels_for(cfg, matrix);
  const ProjectionHead head = load_head(artifact_path(cfg, kHeadFile));

  const TopicModel model = build_topic_model(head, matrix, labels, corpus,
                                             cfg.num_topics, cfg.keywords_top_n);
  for (const auto& notice : model.notices) {
    std::fprintf(stderr, "topics: %s\n", notice.c_str());
  }
  const fs::path p = artifact_path(cfg, kTopicsFile);
  save_topic_model(model, p);
  return {p};
}

std::vector<fs::path> stage_eval(const PipelineConfig& cfg) {
  require_artifact(cfg, kPreprocessedFile, "preprocess");
  require_artifact(cfg, kTopicsFile, "topics");
  const Corpus corpus = load_preprocessed(cfg);
  const TopicModel model = load_topic_model(artifact_path(cfg, kTopicsFile));

  std::map<int, std::vector<std::string>> topic_words;
  for (const int id : model.topic_ids) {
    const auto& kws = model.keywords.at(id);
    const int take = std::min<int>(cfg.eval.coherence_top_n,
                                   static_cast<int>(kws.size()));
    auto& words = topic_words[id];
    for (int i = 0; i < take; ++i) words.push_back(kws[i].term);
  }
  const CoherenceReport coherence = coherence_cv(corpus, topic_words,
                                                 cfg.eval.window_size,
                                                 cfg.eval.coherence_top_n);
  for (const auto& notice : coherence.notices) {
    std::fprintf(stderr, "eval: %s\n", notice.c_str());
  }
  const DiversityReport diversity = topic_diversity(model, cfg.eval.diversity_top_n);

  json out;
  out["coherence"]["mean"] = coherence.mean;
  out["coherence"]["window_size"] = coherence.window_size;
  out["coherence"]["top_n_words"] = coherence.top_n_words;
  json per_topic = json::object();
  for (const auto& [id, score] : coherence.per_topic) {
    per_topic[std::to_string(id)] = score;
  }
  out["coherence"]["per_topic"] = std::move(per_topic);
  out["diversity"] = {{"diversity", diversity.diversity},
                      {"unique_count", diversity.unique_count},
                      {"total_count", diversity.total_count},
                      {"top_n", diversity.top_n}};
  out["num_topics"] = static_cast<int>(model.topic_ids.size());
  const fs::path p = artifact_path(cfg, kEvalFile);
  write_file(p, out.dump(2) + "\n");
  return {p};
}

}  // namespace

PipelineConfig load_config(const std::optional<fs::path>& config_path,
                           const ConfigOverrides& overrides) {
  PipelineConfig cfg;
  if (config_path) {
    if (!fs::exists(*config_path)) {
      throw MissingInputError("config file not found: " + config_path->string());
    }
    json root;
    try {
      root = json::parse(read_file(*config_path));
    } catch (const json::parse_error& e) {
      throw ValidationError(config_path->string() + ": invalid json: " + e.what());
    }
    cfg = config_from_json(root);
    // Relative paths in the config resolve against the config file.
    const fs::path base = config_path->parent_path();
    auto resolve = [&base](fs::path& p) {
      if (!p.empty() && p.is_relative()) p = base / p;
    };
    resolve(cfg.corpus_path);
    if (cfg.stopword_path) resolve(*cfg.stopword_path);
    resolve(cfg.embedding.path);
  }
  apply_overrides(cfg, overrides);
  validate_config(cfg);
  return cfg;
}

Stage stage_from_name(const std::string& name) {
  if (name == "preprocess") return Stage::Preprocess;
  if (name == "embed") return Stage::Embed;
  if (name == "cluster") return Stage::Cluster;
  if (name == "train") return Stage::Train;
  if (name == "topics") return Stage::Topics;
  if (name == "eval") return Stage::Eval;
  throw ValidationError("unknown stage: " + name);
}

std::string stage_name(Stage stage) {
  switch (stage) {
    case Stage::Preprocess: return "preprocess";
    case Stage::Embed: return "embed";
    case Stage::Cluster: return "cluster";
    case Stage::Train: return "train";
    case Stage::Topics: return "topics";
    case Stage::Eval: return "eval";
  }
  return "?";
}

std::vector<fs::path> run_stage(Stage stage, const PipelineConfig& config) {
  kernels::set_workers(config.workers);
  fs::create_directories(config.output_dir);
  switch (stage) {
    case Stage::Preprocess: return stage_preprocess(config);
    case Stage::Embed: return stage_embed(config);
    case Stage::Cluster: return stage_cluster(config);
    case Stage::Train: return stage_train(config);
    case Stage::Topics: return stage_topics(config);
    case Stage::Eval: return stage_eval(config);
  }
  throw ValidationError("unknown stage");
}

std::vector<fs::path> run_pipeline(const PipelineConfig& config) {
  const Stage order[] = {Stage::Preprocess, Stage::Embed, Stage::Cluster,
                         Stage::Train,      Stage::Topics, Stage::Eval};
  std::vector<fs::path> artifacts;
  json stages = json::array();
  for (const Stage stage : order) {
    const auto start = std::chrono::steady_clock::now();
    const auto written = run_stage(stage, config);
    const auto end = std::chrono::steady_clock::now();
    const double ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(end - start)
            .count();
    stages.push_back({{"name", stage_name(stage)}, {"ms", ms}});
    std::fprintf(stderr, "%s: done in %.1f ms\n", stage_name(stage).c_str(), ms);
    artifacts.insert(artifacts.end(), written.begin(), written.end());
  }

  json manifest;
  manifest["version"] = kToolkitVersion;
  manifest["config"] = config_snapshot(config);
  manifest["stages"] = std::move(stages);
  json files = json::array();
  for (const auto& p : artifacts) {
    files.push_back({{"file", p.filename().string()}, {"digest", file_digest(p)}});
  }
  manifest["artifacts"] = std::move(files);
  const fs::path manifest_path = config.output_dir / kManifestFile;
  write_file(manifest_path, manifest.dump(2) + "\n");
  artifacts.push_back(manifest_path);
  return artifacts;
}

std::string report_table(const fs::path& artifact_dir) {
  std::vector<fs::path> eval_files;
  if (fs::exists(artifact_dir / kEvalFile)) {
    eval_files.push_back(artifact_dir / kEvalFile);
  } else if (fs::is_directory(artifact_dir)) {
    std::vector<fs::path> subdirs;
    for (const auto& entry : fs::directory_iterator(artifact_dir)) {
      if (entry.is_directory() && fs::exists(entry.path() / kEvalFile)) {
        subdirs.push_back(entry.path() / kEvalFile);
      }
    }
    std::sort(subdirs.begin(), subdirs.end());
    eval_files = std::move(subdirs);
  }
  if (eval_files.empty()) {
    throw MissingInputError("no " + std::string(kEvalFile) + " found under " +
                            artifact_dir.string());
  }

  struct Row {
    int topics;
    double coherence;
    double diversity;
  };
  std::vector<Row> rows;
  for (const auto& p : eval_files) {
    json obj;
    try {
      obj = json::parse(read_file(p));
      rows.push_back({obj.at("num_topics").get<int>(),
                      obj.at("coherence").at("mean").get<double>(),
                      obj.at("diversity").at("diversity").get<double>()});
    } catch (const json::exception& e) {
      throw ValidationError(p.string() + ": cannot read eval report: " + e.what());
    }
  }
  std::sort(rows.begin(), rows.end(),
            [](const Row& a, const Row& b) { return a.topics < b.topics; });

  std::string out;
  out += "| topics | coherence | diversity |\n";
  out += "|-------:|----------:|----------:|\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "| %6d | %9.4f | %8.1f%% |\n", r.topics,
                  r.coherence, r.diversity * 100.0);
    out += buf;
  }
  return out;
}

TTestResult ttest_files(const fs::path& file_a, const fs::path& file_b) {
  auto load = [](const fs::path& p) {
    if (!fs::exists(p)) throw MissingInputError("sample file not found: " + p.string());
    std::vector<double> values;
    const auto lines = split_lines(read_file(p));
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      const auto v = parse_double(lines[i]);
      if (!v) {
        throw ValidationError(p.string() + " line " + std::to_string(i + 1) +
                              ": not a number: \"" + lines[i] + "\"");
      }
      values.push_back(*v);
    }
    return values;
  };
  return welch_ttest(load(file_a), load(file_b));
}

}  // namespace prototopic
