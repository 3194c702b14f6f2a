// Exercises the shared library through its C header only.
#include <cstdlib>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "eae/eae.h"
#include "json.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string Fixture(const char* name) {
  return (fs::path(EAE_FIXTURE_DIR) / name).string();
}

json TakeJson(char* s) {
  REQUIRE(s != nullptr);
  json j = json::parse(s);
  eae_string_free(s);
  return j;
}

eae_corpus* LoadMini() {
  eae_corpus* c = nullptr;
  REQUIRE(eae_corpus_load(Fixture("mini.jsonl").c_str(), "jsonl", nullptr, &c) ==
          EAE_OK);
  return c;
}

fs::path Scratch(const char* tag) {
  const fs::path dir = fs::temp_directory_path() /
                       (std::string("eae-capi-") + tag + "-" +
                        std::to_string(std::rand()));
  fs::remove_all(dir);
  return dir;
}

TEST_SUITE("capi") {

TEST_CASE("version and status names") {
  CHECK(std::string(eae_version()).size() > 0);
  CHECK(std::string(eae_status_name(EAE_ERR_TRANSPORT)) == "transport");
  eae_string_free(nullptr);
  eae_corpus_free(nullptr);
}

TEST_CASE("errors set the thread's message") {
  eae_corpus* c = nullptr;
  CHECK(eae_corpus_load("/no/such/file.jsonl", "jsonl", nullptr, &c) == EAE_ERR_IO);
  CHECK(c == nullptr);
  CHECK(std::string(eae_last_error()).find("file.jsonl") != std::string::npos);
  CHECK(eae_corpus_load(nullptr, "jsonl", nullptr, &c) == EAE_ERR_INVALID_ARGUMENT);
  CHECK(eae_corpus_load(Fixture("mini.jsonl").c_str(), "xml", nullptr, &c) ==
        EAE_ERR_INVALID_ARGUMENT);
  char* out = nullptr;
  CHECK(eae_iaa_from_counts("{oops", &out) == EAE_ERR_PARSE);
  REQUIRE(eae_iaa_from_counts(R"({"hasAgent": {"tp": 0, "fn": 0, "fp": 0}})",
                              &out) == EAE_OK);
  CHECK(TakeJson(out)["relations"][0]["f1"].is_null());
}

TEST_CASE("corpus statistics") {
  eae_corpus* c = LoadMini();
  CHECK(eae_corpus_size(c) == 8);
  char* stats = nullptr;
  REQUIRE(eae_corpus_stats_json(c, &stats) == EAE_OK);
  const json j = TakeJson(stats);
  CHECK(j["relations_total"] == 14);
  CHECK(j["events"] == 8);
  eae_corpus_free(c);
}

TEST_CASE("dataset build, write and load") {
  eae_corpus* c = LoadMini();
  eae_templates* t = nullptr;
  REQUIRE(eae_templates_default(&t) == EAE_OK);
  eae_dataset* d = nullptr;
  REQUIRE(eae_dataset_build(c, t, R"({"seed": 3})", &d) == EAE_OK);
  const std::size_t train = eae_dataset_size(d, "train");
  const std::size_t test = eae_dataset_size(d, "test");
  CHECK(train + test == eae_dataset_size(d, nullptr));
  CHECK(train > 0);
  CHECK(test > 0);

  char* stats = nullptr;
  REQUIRE(eae_dataset_stats_json(d, &stats) == EAE_OK);
  const json j = TakeJson(stats);
  for (const auto& row : j["relations"]) {
    CHECK(row["train_positive"].get<int>() % 4 == 0);
  }
  CHECK(j["relations"][1]["relations_recovered"] == 6.0);

  const fs::path dir = Scratch("ds");
  const std::string path = (dir / "d.jsonl").string();
  REQUIRE(eae_dataset_write(d, path.c_str()) == EAE_OK);
  eae_dataset* back = nullptr;
  REQUIRE(eae_dataset_load(path.c_str(), &back) == EAE_OK);
  CHECK(eae_dataset_size(back, nullptr) == eae_dataset_size(d, nullptr));

  eae_dataset* bad = nullptr;
  CHECK(eae_dataset_build(c, t, R"({"train_fraction": 2})", &bad) == EAE_ERR_CONFIG);
  eae_dataset_free(back);
  eae_dataset_free(d);
  eae_templates_free(t);
  eae_corpus_free(c);
  fs::remove_all(dir);
}

TEST_CASE("oracle evaluation is perfect") {
  eae_corpus* c = LoadMini();
  eae_templates* t = nullptr;
  REQUIRE(eae_templates_default(&t) == EAE_OK);
  eae_dataset* d = nullptr;
  REQUIRE(eae_dataset_build(c, t, nullptr, &d) == EAE_OK);
  eae_model* oracle = nullptr;
  REQUIRE(eae_model_oracle(c, &oracle) == EAE_OK);
  char* report = nullptr;
  REQUIRE(eae_evaluate_nli(oracle, d, "test", &report) == EAE_OK);
  const json j = TakeJson(report);
  CHECK(j["average_f1"] == 1.0);
  CHECK(j["accuracy"] == 1.0);
  double p = 0;
  CHECK(eae_model_score(oracle, "a", "b", &p) == EAE_ERR_UNSUPPORTED);
  eae_model_free(oracle);
  eae_dataset_free(d);
  eae_templates_free(t);
  eae_corpus_free(c);
}

TEST_CASE("agreement from counts and corpora") {
  char* out = nullptr;
  REQUIRE(eae_iaa_from_counts(
              R"({"hasAgent": {"tp": 37, "fn": 10, "fp": 10},
                  "hasLocation": {"tp": 29, "fn": 2, "fp": 2},
                  "hasDate": {"tp": 43, "fn": 2, "fp": 6}})",
              &out) == EAE_OK);
  const json j = TakeJson(out);
  CHECK(j["micro_f1"].get<double>() == doctest::Approx(0.872));
  CHECK(j["macro_kappa"].is_null());

  eae_corpus* a = LoadMini();
  eae_corpus* b = nullptr;
  REQUIRE(eae_corpus_load(Fixture("mini_b.jsonl").c_str(), "jsonl", nullptr, &b) ==
          EAE_OK);
  REQUIRE(eae_iaa_from_corpora(a, b, &out) == EAE_OK);
  const json k = TakeJson(out);
  CHECK(k["overall"]["tp"] == 13);
  CHECK_FALSE(k["macro_kappa"].is_null());
  eae_corpus_free(a);
  eae_corpus_free(b);
}

TEST_CASE("end-to-end extraction with the oracle") {
  eae_corpus* c = LoadMini();
  eae_templates* t = nullptr;
  REQUIRE(eae_templates_default(&t) == EAE_OK);
  eae_model* oracle = nullptr;
  REQUIRE(eae_model_oracle(c, &oracle) == EAE_OK);
  eae_provider* gold = nullptr;
  REQUIRE(eae_provider_create("gold", nullptr, c, &gold) == EAE_OK);

  char* graphs = nullptr;
  char* failures = nullptr;
  REQUIRE(eae_extract_corpus(c, gold, oracle, t, &graphs, &failures) == EAE_OK);
  CHECK(TakeJson(failures).empty());
  char* metrics = nullptr;
  REQUIRE(eae_evaluate_graphs(graphs, c, &metrics) == EAE_OK);
  eae_string_free(graphs);
  const json m = TakeJson(metrics);
  CHECK(m["precision"] == 1.0);
  CHECK(m["recall"] == 1.0);
  CHECK(m["f1"] == 1.0);

  eae_provider* none = nullptr;
  CHECK(eae_provider_create("gold", nullptr, nullptr, &none) ==
        EAE_ERR_INVALID_ARGUMENT);
  CHECK(eae_provider_create("psychic", nullptr, c, &none) ==
        EAE_ERR_INVALID_ARGUMENT);
  CHECK(eae_provider_create("remote", R"({"endpoint": "nowhere"})", c, &none) ==
        EAE_ERR_CONFIG);

  eae_provider_free(gold);
  eae_model_free(oracle);
  eae_templates_free(t);
  eae_corpus_free(c);
}

TEST_CASE("documents with a scripted provider") {
  eae_corpus* c = LoadMini();
  eae_templates* t = nullptr;
  REQUIRE(eae_templates_default(&t) == EAE_OK);
  eae_model* oracle = nullptr;
  REQUIRE(eae_model_oracle(c, &oracle) == EAE_OK);
  eae_provider* mock = nullptr;
  REQUIRE(eae_provider_create(
              "mock",
              R"({"وقع انفجار في حلب.": [{"type": "EVENT", "start": 4, "end": 10},
                                         {"type": "GPE", "start": 14, "end": 17}]})",
              nullptr, &mock) == EAE_OK);
  char* graphs = nullptr;
  char* failures = nullptr;
  REQUIRE(eae_extract_document("وقع انفجار في حلب. لا شيء هنا.", "doc", mock,
                               oracle, t, &graphs, &failures) == EAE_OK);
  const std::string lines(graphs);
  eae_string_free(graphs);
  CHECK(TakeJson(failures).empty());
  // One event sentence; the oracle knows none of its pairs.
  const json g = json::parse(lines.substr(0, lines.find('\n')));
  CHECK(g["sentence_id"] == "doc:1");
  CHECK(g["nodes"].size() == 2);
  CHECK(g["edges"].empty());
  CHECK(std::count(lines.begin(), lines.end(), '\n') == 1);
  eae_provider_free(mock);
  eae_model_free(oracle);
  eae_templates_free(t);
  eae_corpus_free(c);
}

TEST_CASE("k-fold training writes checkpoints") {
  eae_corpus* c = LoadMini();
  eae_templates* t = nullptr;
  REQUIRE(eae_templates_default(&t) == EAE_OK);
  eae_dataset* d = nullptr;
  REQUIRE(eae_dataset_build(c, t, nullptr, &d) == EAE_OK);
  const fs::path dir = Scratch("train");
  const char* cfg = R"({"train": {"folds": 2, "epochs": 1, "learning_rate": 0.001,
      "encoder": {"layers": 1, "dim": 16, "heads": 2, "ffn_dim": 32,
                  "vocab_buckets": 512}}, "loss": {"w_neg": 0.5}})";
  char* report = nullptr;
  REQUIRE(eae_train_kfold(d, cfg, dir.string().c_str(), nullptr, nullptr,
                          &report) == EAE_OK);
  const json r = TakeJson(report);
  CHECK(r["folds"].size() == 2);
  CHECK(r["train"]["epochs"] == 1);
  CHECK(fs::exists(dir / "fold_0" / "weights.bin"));
  CHECK(fs::exists(dir / "fold_1" / "config.json"));
  if (!r["best_fold"].is_null()) {
    eae_model* m = nullptr;
    REQUIRE(eae_model_load((dir / "best").string().c_str(), &m) == EAE_OK);
    double p = -1;
    REQUIRE(eae_model_score(m, "وقع انفجار", "انفجار", &p) == EAE_OK);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    char* eval = nullptr;
    REQUIRE(eae_evaluate_nli(m, d, "test", &eval) == EAE_OK);
    CHECK(TakeJson(eval)["per_relation"].size() >= 1);
    eae_model_free(m);
  }
  char* nope = nullptr;
  CHECK(eae_train_kfold(d, R"({"train": {"encoder": {"identifier": "UBC-NLP/ARBERTv2"}}})",
                        nullptr, nullptr, nullptr, &nope) == EAE_ERR_UNSUPPORTED);
  eae_dataset_free(d);
  eae_templates_free(t);
  eae_corpus_free(c);
  fs::remove_all(dir);
}

}  // TEST_SUITE

}  // namespace
