#include "prototopic/embedding.hpp"

#include <cmath>
#include <sstream>
#include <unordered_set>

#include "prototopic/errors.hpp"
#include "prototopic/kernels.hpp"
#include "prototopic/text_io.hpp"

namespace prototopic {

namespace {

void check_finite(const EmbeddingMatrix& m, const std::string& what) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (const double v : m.row(i)) {
      if (!std::isfinite(v)) {
        throw NumericError(what + ": non-finite value in row for doc \"" +
                           m.doc_ids[i] + "\"");
      }
    }
  }
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (start <= line.size()) {
    const auto sp = line.find(' ', start);
    if (sp == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, sp - start));
    start = sp + 1;
  }
  return fields;
}

}  // namespace

EmbeddingMatrix load_embeddings(const std::filesystem::path& path) {
  const auto lines = split_lines(read_file(path));
  if (lines.empty()) throw ValidationError(path.string() + ": missing emb1 header");

  std::istringstream header(lines[0]);
  std::string magic;
  long long count = -1, dim = -1;
  header >> magic >> count >> dim;
  if (magic != "emb1" || header.fail() || count < 0 || dim <= 0) {
    throw ValidationError(path.string() + ": malformed header \"" + lines[0] + "\"");
  }
  if (static_cast<long long>(lines.size()) - 1 != count) {
    throw ValidationError(path.string() + ": header declares " +
                          std::to_string(count) + " rows, file has " +
                          std::to_string(lines.size() - 1));
  }

  EmbeddingMatrix m;
  m.dim = static_cast<int>(dim);
  m.doc_ids.reserve(static_cast<std::size_t>(count));
  m.values.reserve(static_cast<std::size_t>(count * dim));
  std::unordered_set<std::string> seen;
  for (long long r = 0; r < count; ++r) {
    const std::string& line = lines[static_cast<std::size_t>(r) + 1];
    const std::string where = path.string() + " row " + std::to_string(r + 1);
    if (line.size() < 2 || line[0] != '"') {
      throw ValidationError(where + ": expected quoted doc id");
    }
    const auto close = line.find('"', 1);
    if (close == std::string::npos) {
      throw ValidationError(where + ": unterminated doc id quote");
    }
    std::string id = line.substr(1, close - 1);
    if (!seen.insert(id).second) {
      throw ValidationError(where + ": duplicate doc id \"" + id + "\"");
    }
    if (close + 1 >= line.size() || line[close + 1] != ' ') {
      throw ValidationError(where + ": expected values after doc id");
    }
    const auto fields = split_fields(line.substr(close + 2));
    if (static_cast<long long>(fields.size()) != dim) {
      throw ValidationError(where + ": expected " + std::to_string(dim) +
                            " values, got " + std::to_string(fields.size()));
    }
    for (const auto& f : fields) {
      const auto v = parse_double(f);
      if (!v) throw ValidationError(where + ": non-numeric value \"" + f + "\"");
      m.values.push_back(*v);
    }
    m.doc_ids.push_back(std::move(id));
  }
  return m;
}

void save_embeddings(const EmbeddingMatrix& matrix, const std::filesystem::path& path) {
  std::string out;
  out += "emb1 " + std::to_string(matrix.rows()) + " " + std::to_string(matrix.dim) + "\n";
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    if (matrix.doc_ids[i].find('"') != std::string::npos) {
      throw ValidationError("doc id contains a quote character: " + matrix.doc_ids[i]);
    }
    out += '"';
    out += matrix.doc_ids[i];
    out += '"';
    for (const double v : matrix.row(i)) {
      out += ' ';
      out += format_double(v);
    }
    out += '\n';
  }
  write_file(path, out);
}

EmbeddingMatrix hash_embed(const Corpus& corpus, int dim, std::uint64_t seed) {
  if (dim < 2) throw ValidationError("hash embedding dim must be >= 2");
  for (const auto& doc : corpus.documents) {
    if (doc.tokens.empty()) {
      throw ValidationError("cannot hash-embed document with zero tokens: \"" +
                            doc.id + "\"");
    }
  }
  EmbeddingMatrix m;
  m.dim = dim;
  m.doc_ids.reserve(corpus.documents.size());
  std::vector<std::vector<std::string>> token_lists;
  token_lists.reserve(corpus.documents.size());
  for (const auto& doc : corpus.documents) {
    m.doc_ids.push_back(doc.id);
    token_lists.push_back(doc.tokens);
  }
  m.values.assign(m.rows() * static_cast<std::size_t>(dim), 0.0);
  kernels::hash_rows(token_lists, dim, seed, m.values.data());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double norm2 = 0.0;
    for (const double v : m.row(i)) norm2 += v * v;
    if (norm2 == 0.0) {
      throw NumericError("hash embedding cancelled to a zero vector for doc \"" +
                         m.doc_ids[i] + "\"; change dim or seed");
    }
  }
  m.normalized = true;
  return m;
}

EmbeddingMatrix l2_normalize(const EmbeddingMatrix& matrix) {
  check_finite(matrix, "l2_normalize");
  EmbeddingMatrix out = matrix;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    double norm2 = 0.0;
    for (const double v : out.row(i)) norm2 += v * v;
    if (norm2 == 0.0) {
      throw ValidationError("cannot normalize zero row for doc \"" +
                            out.doc_ids[i] + "\"");
    }
    const double inv = 1.0 / std::sqrt(norm2);
    double* row = out.row_data(i);
    for (int d = 0; d < out.dim; ++d) row[d] *= inv;
  }
  out.normalized = true;
  return out;
}

}  // namespace prototopic
