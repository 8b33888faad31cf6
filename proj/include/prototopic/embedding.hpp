#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "prototopic/corpus.hpp"

namespace prototopic {

struct EmbeddingMatrix {
  std::vector<std::string> doc_ids;
  int dim = 0;
  std::vector<double> values;  // rows * dim, row-major
  bool normalized = false;

  std::size_t rows() const { return doc_ids.size(); }
  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * static_cast<std::size_t>(dim),
            static_cast<std::size_t>(dim)};
  }
  double* row_data(std::size_t i) {
    return values.data() + i * static_cast<std::size_t>(dim);
  }
};

// EMB1 text format:
//   emb1 <count> <dim>
//   "<doc_id>" <v1> ... <vdim>
// Values are shortest round-trip decimals; doc ids may not contain '"'.
EmbeddingMatrix load_embeddings(const std::filesystem::path& path);
void save_embeddings(const EmbeddingMatrix& matrix, const std::filesystem::path& path);

// Signed feature hashing over each document's tokens, L2-normalized rows.
// Every document must have at least one token.
EmbeddingMatrix hash_embed(const Corpus& corpus, int dim, std::uint64_t seed);

// Scales every row to unit Euclidean norm; zero rows are an error.
EmbeddingMatrix l2_normalize(const EmbeddingMatrix& matrix);

}  // namespace prototopic
