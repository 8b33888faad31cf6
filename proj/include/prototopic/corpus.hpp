#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace prototopic {

struct Document {
  std::string id;
  std::string raw_text;
  std::vector<std::string> tokens;  // lowercase [a-z]+, stopwords removed
};

// Terms sorted lexicographically; term_index maps term -> position.
struct Vocabulary {
  std::vector<std::string> terms;
  std::unordered_map<std::string, int> term_index;
  std::vector<std::int64_t> doc_frequency;     // documents containing the term
  std::vector<std::int64_t> corpus_frequency;  // total occurrences

  bool contains(const std::string& term) const {
    return term_index.find(term) != term_index.end();
  }
};

struct Corpus {
  std::vector<Document> documents;
  Vocabulary vocabulary;
};

enum class CorpusFormat { Jsonl, Tsv };

// Reads one Document per record, tokens left empty, file order preserved.
// Malformed records and duplicate ids raise ValidationError naming the line
// or the id.
Corpus ingest(const std::filesystem::path& path, CorpusFormat format);

// Replaces every non [a-zA-Z] byte with a space, lowercases, splits on
// whitespace, drops stopwords. Rebuilds the vocabulary from the result.
// Documents that end up with no tokens are kept.
Corpus preprocess(const Corpus& corpus,
                  const std::unordered_set<std::string>& stopwords);

// One lowercase word per line; blank lines ignored.
std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path);

// Tokenizes one text the way preprocess does.
std::vector<std::string> tokenize(const std::string& text,
                                  const std::unordered_set<std::string>& stopwords);

// Rebuilds vocabulary counts from the documents' token lists.
Vocabulary build_vocabulary(const std::vector<Document>& documents);

}  // namespace prototopic
