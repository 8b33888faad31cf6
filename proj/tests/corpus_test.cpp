#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <unistd.h>

#include <filesystem>
#include <map>
#include <string>

#include "doctest.h"
#include "prototopic/corpus.hpp"
#include "prototopic/errors.hpp"
#include "prototopic/rng.hpp"
#include "prototopic/text_io.hpp"

using namespace prototopic;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("corpus_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  fs::path file(const std::string& name, const std::string& content) const {
    const fs::path p = path / name;
    write_file(p, content);
    return p;
  }
};

}  // namespace

TEST_CASE("ingest jsonl: two valid records in file order") {
  TempDir tmp;
  const auto p = tmp.file("c.jsonl",
                          "{\"id\": \"d1\", \"text\": \"Alpha beta.\"}\n"
                          "{\"id\": \"d2\", \"text\": \"Gamma\"}\n");
  const Corpus c = ingest(p, CorpusFormat::Jsonl);
  REQUIRE(c.documents.size() == 2);
  CHECK(c.documents[0].id == "d1");
  CHECK(c.documents[0].raw_text == "Alpha beta.");
  CHECK(c.documents[0].tokens.empty());
  CHECK(c.documents[1].id == "d2");
}

TEST_CASE("ingest: empty file gives empty corpus") {
  TempDir tmp;
  const Corpus c = ingest(tmp.file("e.jsonl", ""), CorpusFormat::Jsonl);
  CHECK(c.documents.empty());
}

TEST_CASE("ingest: duplicate id error names the id") {
  TempDir tmp;
  const auto p = tmp.file("dup.jsonl",
                          "{\"id\": \"d1\", \"text\": \"a\"}\n"
                          "{\"id\": \"d2\", \"text\": \"b\"}\n"
                          "{\"id\": \"d1\", \"text\": \"c\"}\n");
  CHECK_THROWS_WITH_AS(ingest(p, CorpusFormat::Jsonl), doctest::Contains("d1"),
                       ValidationError);
}

TEST_CASE("ingest jsonl: malformed record names the line") {
  TempDir tmp;
  const auto p = tmp.file("bad.jsonl",
                          "{\"id\": \"d1\", \"text\": \"a\"}\n"
                          "{not json\n");
  CHECK_THROWS_WITH_AS(ingest(p, CorpusFormat::Jsonl), doctest::Contains("line 2"),
                       ValidationError);
}

TEST_CASE("ingest jsonl: extra or missing fields rejected") {
  TempDir tmp;
  CHECK_THROWS_AS(ingest(tmp.file("x.jsonl", "{\"id\": \"a\"}\n"), CorpusFormat::Jsonl),
                  ValidationError);
  CHECK_THROWS_AS(
      ingest(tmp.file("y.jsonl", "{\"id\": \"a\", \"text\": \"t\", \"z\": 1}\n"),
             CorpusFormat::Jsonl),
      ValidationError);
  CHECK_THROWS_AS(
      ingest(tmp.file("z.jsonl", "{\"id\": 3, \"text\": \"t\"}\n"), CorpusFormat::Jsonl),
      ValidationError);
}

TEST_CASE("ingest tsv: basic parse and column errors") {
  TempDir tmp;
  const Corpus c =
      ingest(tmp.file("c.tsv", "d1\tAlpha beta.\nd2\tGamma\n"), CorpusFormat::Tsv);
  REQUIRE(c.documents.size() == 2);
  CHECK(c.documents[1].raw_text == "Gamma");

  CHECK_THROWS_WITH_AS(ingest(tmp.file("one.tsv", "no-tab-here\n"), CorpusFormat::Tsv),
                       doctest::Contains("line 1"), ValidationError);
  CHECK_THROWS_AS(ingest(tmp.file("three.tsv", "a\tb\tc\n"), CorpusFormat::Tsv),
                  ValidationError);
}

TEST_CASE("preprocess: digits and punctuation become separators") {
  Corpus c;
  c.documents.push_back({"d1", "Treatment with 50mg Aspirin, 2021.", {}});
  const Corpus out = preprocess(c, {"with"});
  CHECK(out.documents[0].tokens ==
        std::vector<std::string>{"treatment", "mg", "aspirin"});
}

TEST_CASE("preprocess: stopwords case-folded away") {
  Corpus c;
  c.documents.push_back({"d1", "THE the The", {}});
  const Corpus out = preprocess(c, {"the"});
  CHECK(out.documents[0].tokens.empty());
}

TEST_CASE("preprocess: vocabulary doc frequencies") {
  Corpus c;
  c.documents.push_back({"a", "cancer trial", {}});
  c.documents.push_back({"b", "cancer drug", {}});
  const Corpus out = preprocess(c, {});
  const auto& v = out.vocabulary;
  REQUIRE(v.terms.size() == 3);
  CHECK(v.doc_frequency[v.term_index.at("cancer")] == 2);
  CHECK(v.doc_frequency[v.term_index.at("trial")] == 1);
  CHECK(v.doc_frequency[v.term_index.at("drug")] == 1);
}

TEST_CASE("preprocess: non-ascii letters are removed") {
  Corpus c;
  c.documents.push_back({"d1", "caf\xc3\xa9 na\xc3\xafve", {}});
  const Corpus out = preprocess(c, {});
  CHECK(out.documents[0].tokens == std::vector<std::string>{"caf", "na", "ve"});
}

TEST_CASE("preprocess: idempotent on its own output") {
  Corpus c;
  c.documents.push_back({"d1", "The 50mg dose, twice daily!", {}});
  c.documents.push_back({"d2", "REsulTs: 12 of 34 patients improved.", {}});
  const std::unordered_set<std::string> sw = {"the", "of"};
  const Corpus once = preprocess(c, sw);
  Corpus again_in;
  for (const auto& d : once.documents) {
    std::string joined;
    for (const auto& t : d.tokens) {
      if (!joined.empty()) joined += ' ';
      joined += t;
    }
    again_in.documents.push_back({d.id, joined, {}});
  }
  const Corpus twice = preprocess(again_in, sw);
  for (std::size_t i = 0; i < once.documents.size(); ++i) {
    CHECK(once.documents[i].tokens == twice.documents[i].tokens);
  }
}

TEST_CASE("preprocess: token count bounded by whitespace split of cleaned text") {
  Rng rng(5);
  const std::string alphabet = "abcXYZ 019,.!-\xc3\xa9";
  for (int trial = 0; trial < 50; ++trial) {
    std::string text;
    const int len = static_cast<int>(rng.bounded(60));
    for (int i = 0; i < len; ++i) text += alphabet[rng.bounded(alphabet.size())];
    Corpus c;
    c.documents.push_back({"d", text, {}});
    const Corpus out = preprocess(c, {"abc"});

    // Oracle: clean, then count whitespace-separated runs.
    std::string cleaned;
    for (const char ch : text) {
      cleaned += ((ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z')) ? ch : ' ';
    }
    int runs = 0;
    bool in_run = false;
    for (const char ch : cleaned) {
      if (ch != ' ' && !in_run) ++runs;
      in_run = ch != ' ';
    }
    CHECK(out.documents[0].tokens.size() <= static_cast<std::size_t>(runs));
  }
}

TEST_CASE("vocabulary counts match a brute-force recount") {
  Rng rng(7);
  const std::vector<std::string> pool = {"aa", "bb", "cc", "dd", "ee", "ff"};
  Corpus c;
  for (int d = 0; d < 20; ++d) {
    std::string text;
    const int len = 1 + static_cast<int>(rng.bounded(15));
    for (int i = 0; i < len; ++i) {
      text += pool[rng.bounded(pool.size())];
      text += ' ';
    }
    c.documents.push_back({"d" + std::to_string(d), text, {}});
  }
  const Corpus out = preprocess(c, {"ff"});

  std::map<std::string, std::int64_t> doc_freq, corpus_freq;
  for (const auto& doc : out.documents) {
    std::map<std::string, int> local;
    for (const auto& t : doc.tokens) ++local[t];
    for (const auto& [t, n] : local) {
      doc_freq[t] += 1;
      corpus_freq[t] += n;
    }
  }
  const auto& v = out.vocabulary;
  REQUIRE(v.terms.size() == doc_freq.size());
  for (const auto& [t, df] : doc_freq) {
    REQUIRE(v.contains(t));
    const int idx = v.term_index.at(t);
    CHECK(v.doc_frequency[idx] == df);
    CHECK(v.corpus_frequency[idx] == corpus_freq[t]);
    CHECK(v.corpus_frequency[idx] >= v.doc_frequency[idx]);
    CHECK(v.doc_frequency[idx] >= 1);
  }
  CHECK(!v.contains("ff"));
}

TEST_CASE("load_stopwords: strict lowercase, blank lines skipped") {
  TempDir tmp;
  const auto sw = load_stopwords(tmp.file("s.txt", "the\n\nand\nof\n"));
  CHECK(sw.size() == 3);
  CHECK(sw.count("and") == 1);
  CHECK_THROWS_WITH_AS(load_stopwords(tmp.file("bad.txt", "the\nAnd\n")),
                       doctest::Contains("line 2"), ValidationError);
}

TEST_CASE("empty documents are retained but contribute no vocabulary") {
  Corpus c;
  c.documents.push_back({"d1", "1234 5678", {}});
  c.documents.push_back({"d2", "word", {}});
  const Corpus out = preprocess(c, {});
  REQUIRE(out.documents.size() == 2);
  CHECK(out.documents[0].tokens.empty());
  CHECK(out.vocabulary.terms == std::vector<std::string>{"word"});
}
