#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "prototopic/errors.hpp"
#include "prototopic/pipeline.hpp"
#include "prototopic/text_io.hpp"

namespace {

using prototopic::ConfigOverrides;

struct CliState {
  std::optional<std::string> config_path;
  ConfigOverrides overrides;
};

void add_override_options(CLI::App& app, CliState& state) {
  app.add_option("--config", state.config_path, "pipeline config file (json)");
  app.add_option("--corpus", state.overrides.corpus_path, "corpus file path");
  app.add_option("--format", state.overrides.corpus_format, "corpus format: jsonl|tsv");
  app.add_option("--stopwords", state.overrides.stopword_path, "stopword file path");
  app.add_option("--embed-source", state.overrides.embed_source,
                 "embedding source: hash|file");
  app.add_option("--embed-path", state.overrides.embed_path, "emb1 embedding file");
  app.add_option("--embed-dim", state.overrides.embed_dim, "hash embedding dimension");
  app.add_option("--embed-seed", state.overrides.embed_seed, "hash embedding seed");
  app.add_option("--normalize", state.overrides.normalize,
                 "L2-normalize file embeddings (true|false)");
  app.add_option("--num-topics", state.overrides.num_topics, "number of topics K");
  app.add_option("--kmeans-seed", state.overrides.kmeans_seed, "k-means seed");
  app.add_option("--kmeans-max-iter", state.overrides.kmeans_max_iter,
                 "k-means iteration cap");
  app.add_option("--kmeans-tol", state.overrides.kmeans_tol,
                 "k-means displacement tolerance");
  app.add_option("--n-way", state.overrides.n_way, "episode classes");
  app.add_option("--k-shot", state.overrides.k_shot, "support examples per class");
  app.add_option("--q-query", state.overrides.q_query, "query examples per class");
  app.add_option("--episodes-per-epoch", state.overrides.episodes_per_epoch,
                 "episodes per epoch");
  app.add_option("--epochs", state.overrides.epochs, "training epochs");
  app.add_option("--lr", state.overrides.learning_rate, "Adam learning rate");
  app.add_option("--train-seed", state.overrides.train_seed, "training seed");
  app.add_option("--proj-dim", state.overrides.output_dim, "projection head output dim");
  app.add_option("--activation", state.overrides.activation,
                 "head activation: identity|tanh");
  app.add_option("--top-n", state.overrides.keywords_top_n, "stored keywords per topic");
  app.add_option("--coherence-top-n", state.overrides.coherence_top_n,
                 "keywords scored for coherence");
  app.add_option("--window-size", state.overrides.window_size,
                 "coherence sliding window size");
  app.add_option("--diversity-top-n", state.overrides.diversity_top_n,
                 "keywords pooled for diversity");
  app.add_option("--out", state.overrides.output_dir, "output directory");
  app.add_option("--workers", state.overrides.workers,
                 "worker threads (0 = all cores, 1 = serial)");
}

prototopic::PipelineConfig resolve_config(const CliState& state) {
  std::optional<std::filesystem::path> path;
  if (state.config_path) path = *state.config_path;
  return prototopic::load_config(path, state.overrides);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"few-shot topic modeling with prototypical networks"};
  app.require_subcommand(1);
  app.fallthrough();

  CliState state;
  add_override_options(app, state);

  const char* stage_names[] = {"preprocess", "embed", "cluster",
                               "train",      "topics", "eval"};
  const char* stage_help[] = {
      "tokenize the corpus and build the vocabulary",
      "produce document embeddings (hash or emb1 file)",
      "k-means pseudo-labels from the embeddings",
      "train the projection head episodically",
      "prototypes, topic assignment, c-TF-IDF keywords",
      "coherence and diversity for the topic model"};
  for (int i = 0; i < 6; ++i) {
    app.add_subcommand(stage_names[i], stage_help[i]);
  }
  app.add_subcommand("pipeline", "run every stage in order and write a manifest");

  auto* report_cmd = app.add_subcommand("report", "summarize eval results as a table");
  std::string report_dir;
  report_cmd->add_option("dir", report_dir, "directory of runs")->required();

  auto* ttest_cmd =
      app.add_subcommand("ttest", "Welch's t-test over two sample files");
  std::string ttest_a, ttest_b;
  ttest_cmd->add_option("sample_a", ttest_a, "one number per line")->required();
  ttest_cmd->add_option("sample_b", ttest_b, "one number per line")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const auto* sub = app.get_subcommands().at(0);
    const std::string name = sub->get_name();
    if (name == "report") {
      std::fputs(prototopic::report_table(report_dir).c_str(), stdout);
      return 0;
    }
    if (name == "ttest") {
      const auto result = prototopic::ttest_files(ttest_a, ttest_b);
      nlohmann::json out = {{"t", result.t_statistic},
                            {"df", result.degrees_of_freedom},
                            {"p", result.p_value}};
      std::printf("%s\n", out.dump().c_str());
      return 0;
    }

    const auto config = resolve_config(state);
    if (name == "pipeline") {
      const auto artifacts = prototopic::run_pipeline(config);
      for (const auto& p : artifacts) std::printf("%s\n", p.string().c_str());
      return 0;
    }
    const auto artifacts =
        prototopic::run_stage(prototopic::stage_from_name(name), config);
    for (const auto& p : artifacts) std::printf("%s\n", p.string().c_str());
    return 0;
  } catch (const prototopic::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const prototopic::MissingInputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const prototopic::NumericError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
