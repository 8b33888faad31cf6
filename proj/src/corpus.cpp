#include "prototopic/corpus.hpp"

#include <omp.h>

#include <algorithm>
#include <map>

#include "json.hpp"
#include "prototopic/errors.hpp"
#include "prototopic/kernels.hpp"
#include "prototopic/text_io.hpp"

namespace prototopic {

namespace {

void check_unique_ids(const std::vector<Document>& docs) {
  std::unordered_set<std::string> seen;
  for (const auto& d : docs) {
    if (!seen.insert(d.id).second) {
      throw ValidationError("duplicate document id: \"" + d.id + "\"");
    }
  }
}

Document parse_jsonl_record(const std::string& line, std::size_t line_no) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("line " + std::to_string(line_no) +
                          ": invalid json: " + e.what());
  }
  if (!obj.is_object() || obj.size() != 2 || !obj.contains("id") ||
      !obj.contains("text")) {
    throw ValidationError("line " + std::to_string(line_no) +
                          ": record must have exactly fields \"id\" and \"text\"");
  }
  if (!obj["id"].is_string() || !obj["text"].is_string()) {
    throw ValidationError("line " + std::to_string(line_no) +
                          ": \"id\" and \"text\" must be strings");
  }
  Document doc;
  doc.id = obj["id"].get<std::string>();
  doc.raw_text = obj["text"].get<std::string>();
  return doc;
}

Document parse_tsv_record(const std::string& line, std::size_t line_no) {
  const auto tab = line.find('\t');
  if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
    throw ValidationError("line " + std::to_string(line_no) +
                          ": expected exactly two tab-separated columns");
  }
  Document doc;
  doc.id = line.substr(0, tab);
  doc.raw_text = line.substr(tab + 1);
  if (doc.id.empty()) {
    throw ValidationError("line " + std::to_string(line_no) + ": empty id column");
  }
  return doc;
}

}  // namespace

Corpus ingest(const std::filesystem::path& path, CorpusFormat format) {
  const auto lines = split_lines(read_file(path));
  Corpus corpus;
  corpus.documents.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    corpus.documents.push_back(format == CorpusFormat::Jsonl
                                   ? parse_jsonl_record(lines[i], line_no)
                                   : parse_tsv_record(lines[i], line_no));
  }
  check_unique_ids(corpus.documents);
  return corpus;
}

std::vector<std::string> tokenize(const std::string& text,
                                  const std::unordered_set<std::string>& stopwords) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      if (stopwords.find(current) == stopwords.end()) tokens.push_back(current);
      current.clear();
    }
  };
  for (const char c : text) {
    if (c >= 'a' && c <= 'z') {
      current.push_back(c);
    } else if (c >= 'A' && c <= 'Z') {
      current.push_back(static_cast<char>(c - 'A' + 'a'));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

Vocabulary build_vocabulary(const std::vector<Document>& documents) {
  std::map<std::string, std::pair<std::int64_t, std::int64_t>> counts;  // doc, corpus
  std::unordered_set<std::string> in_doc;
  for (const auto& doc : documents) {
    in_doc.clear();
    for (const auto& tok : doc.tokens) {
      auto& entry = counts[tok];
      ++entry.second;
      if (in_doc.insert(tok).second) ++entry.first;
    }
  }
  Vocabulary vocab;
  vocab.terms.reserve(counts.size());
  vocab.doc_frequency.reserve(counts.size());
  vocab.corpus_frequency.reserve(counts.size());
  for (const auto& [term, cnt] : counts) {
    vocab.term_index.emplace(term, static_cast<int>(vocab.terms.size()));
    vocab.terms.push_back(term);
    vocab.doc_frequency.push_back(cnt.first);
    vocab.corpus_frequency.push_back(cnt.second);
  }
  return vocab;
}

Corpus preprocess(const Corpus& corpus,
                  const std::unordered_set<std::string>& stopwords) {
  for (const auto& w : stopwords) {
    if (w.empty() ||
        !std::all_of(w.begin(), w.end(), [](char c) { return c >= 'a' && c <= 'z'; })) {
      throw ValidationError("stopword entries must be lowercase a-z: \"" + w + "\"");
    }
  }
  Corpus out;
  out.documents.resize(corpus.documents.size());
  const int n = static_cast<int>(corpus.documents.size());
  const int threads = kernels::workers();
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads > 0 ? threads : omp_get_max_threads()) if (threads != 1)
  for (int i = 0; i < n; ++i) {
    const auto& src = corpus.documents[i];
    out.documents[i] =
        Document{src.id, src.raw_text, tokenize(src.raw_text, stopwords)};
  }
  out.vocabulary = build_vocabulary(out.documents);
  return out;
}

std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::unordered_set<std::string> words;
  const auto lines = split_lines(read_file(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& w = lines[i];
    if (w.empty()) continue;
    if (!std::all_of(w.begin(), w.end(), [](char c) { return c >= 'a' && c <= 'z'; })) {
      throw ValidationError(path.string() + " line " + std::to_string(i + 1) +
                            ": stopwords must be lowercase a-z, got \"" + w + "\"");
    }
    words.insert(w);
  }
  return words;
}

}  // namespace prototopic
