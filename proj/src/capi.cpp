#include "eae/eae.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include "builtin_data.hpp"
#include "corpus.hpp"
#include "error.hpp"
#include "evaluator.hpp"
#include "iaa.hpp"
#include "json.hpp"
#include "ner.hpp"
#include "nli/classifier.hpp"
#include "nli/trainer.hpp"
#include "pairgen.hpp"
#include "pipeline.hpp"
#include "report.hpp"
#include "templates.hpp"

#ifndef EAE_VERSION_STRING
#define EAE_VERSION_STRING "0.0.0"
#endif

struct eae_corpus {
  eae::Corpus corpus;
};

struct eae_templates {
  eae::TemplateRegistry registry;
};

struct eae_dataset {
  eae::NliDataset dataset;
};

struct eae_model {
  std::shared_ptr<const eae::nli::EntailmentScorer> scorer;
  std::shared_ptr<const eae::nli::NliModel> nli;  // null for the oracle
  double threshold = 0.5;
};

struct eae_provider {
  std::unique_ptr<eae::NerProvider> provider;
};

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

thread_local std::string g_last_error;

eae_status FromCode(eae::ErrorCode code) {
  switch (code) {
    case eae::ErrorCode::kInvalidArgument: return EAE_ERR_INVALID_ARGUMENT;
    case eae::ErrorCode::kIo: return EAE_ERR_IO;
    case eae::ErrorCode::kParse: return EAE_ERR_PARSE;
    case eae::ErrorCode::kValidation: return EAE_ERR_VALIDATION;
    case eae::ErrorCode::kUndefinedMetric: return EAE_ERR_UNDEFINED_METRIC;
    case eae::ErrorCode::kTransport: return EAE_ERR_TRANSPORT;
    case eae::ErrorCode::kProtocol: return EAE_ERR_PROTOCOL;
    case eae::ErrorCode::kConfig: return EAE_ERR_CONFIG;
    case eae::ErrorCode::kUnsupported: return EAE_ERR_UNSUPPORTED;
  }
  return EAE_ERR_INTERNAL;
}

// Runs `fn`, translating exceptions into a status and the thread's message.
template <typename Fn>
eae_status Guard(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return EAE_OK;
  } catch (const eae::Error& e) {
    g_last_error = e.what();
    return FromCode(e.code());
  } catch (const json::exception& e) {
    g_last_error = std::string("JSON: ") + e.what();
    return EAE_ERR_PARSE;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return EAE_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return EAE_ERR_INTERNAL;
  }
}

void Require(bool ok, const char* what) {
  if (!ok) throw eae::Error(eae::ErrorCode::kInvalidArgument, what);
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

json ParseOptionalJson(const char* text, const char* what) {
  if (text == nullptr || *text == '\0') return json::object();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw eae::Error(eae::ErrorCode::kParse,
                     std::string(what) + ": " + e.what());
  }
}

std::ofstream OpenOut(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw eae::Error(eae::ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

std::optional<eae::Phase> SplitArg(const char* split) {
  if (split == nullptr || *split == '\0') return std::nullopt;
  return eae::ParsePhase(split);
}

std::vector<eae::NliPair> Select(const eae::NliDataset& d, const char* split) {
  auto phase = SplitArg(split);
  return phase ? d.Split(*phase) : d.pairs;
}

std::string GraphsJsonl(const eae::DocumentResult& r) {
  std::ostringstream out;
  eae::WriteGraphs(r.graphs, out);
  return out.str();
}

std::string FailuresJson(const eae::DocumentResult& r) {
  json list = json::array();
  for (const auto& f : r.failures) {
    list.push_back({{"sentence_id", f.sentence_id}, {"message", f.message}});
  }
  return list.dump();
}

eae::ExtractionOptions Options(const eae_model* m) {
  eae::ExtractionOptions o;
  o.threshold = m->threshold;
  return o;
}

}  // namespace

extern "C" {

const char* eae_version(void) { return EAE_VERSION_STRING; }

const char* eae_last_error(void) { return g_last_error.c_str(); }

const char* eae_status_name(eae_status status) {
  switch (status) {
    case EAE_OK: return "ok";
    case EAE_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case EAE_ERR_IO: return "io";
    case EAE_ERR_PARSE: return "parse";
    case EAE_ERR_VALIDATION: return "validation";
    case EAE_ERR_UNDEFINED_METRIC: return "undefined_metric";
    case EAE_ERR_TRANSPORT: return "transport";
    case EAE_ERR_PROTOCOL: return "protocol";
    case EAE_ERR_CONFIG: return "config";
    case EAE_ERR_UNSUPPORTED: return "unsupported";
    case EAE_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

void eae_string_free(char* s) { std::free(s); }

eae_status eae_presets_json(char** out_json) {
  return Guard([&] {
    Require(out_json != nullptr, "out_json is null");
    *out_json = Dup(std::string(eae::builtin::kPresetsJson));
  });
}

eae_status eae_file_sha256(const char* path, char** out_hex) {
  return Guard([&] {
    Require(path != nullptr && out_hex != nullptr, "null argument");
    *out_hex = Dup(eae::report::Sha256File(path));
  });
}

// ---- corpus ----

eae_status eae_corpus_load(const char* path, const char* format,
                           const char* relations_path, eae_corpus** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    const auto fmt =
        eae::ParseCorpusFormat(format != nullptr ? format : "jsonl");
    std::optional<fs::path> rel;
    if (relations_path != nullptr && *relations_path != '\0') {
      rel = relations_path;
    }
    *out = new eae_corpus{eae::LoadCorpusFile(path, fmt, rel)};
  });
}

eae_status eae_corpus_write(const eae_corpus* corpus, const char* path) {
  return Guard([&] {
    Require(corpus != nullptr && path != nullptr, "null argument");
    auto out = OpenOut(path);
    eae::WriteCorpus(corpus->corpus, out);
  });
}

eae_status eae_corpus_stats_json(const eae_corpus* corpus, char** out_json) {
  return Guard([&] {
    Require(corpus != nullptr && out_json != nullptr, "null argument");
    auto j = eae::report::ToJson(eae::ComputeStats(corpus->corpus));
    j["name"] = corpus->corpus.metadata().name;
    *out_json = Dup(j.dump());
  });
}

size_t eae_corpus_size(const eae_corpus* corpus) {
  return corpus == nullptr ? 0 : corpus->corpus.sentences().size();
}

void eae_corpus_free(eae_corpus* corpus) { delete corpus; }

// ---- templates ----

eae_status eae_templates_default(eae_templates** out) {
  return Guard([&] {
    Require(out != nullptr, "out is null");
    *out = new eae_templates{eae::TemplateRegistry::Default()};
  });
}

eae_status eae_templates_load(const char* path, eae_templates** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    *out = new eae_templates{eae::TemplateRegistry::LoadFile(path)};
  });
}

eae_status eae_templates_with_test(const eae_templates* templates,
                                   const char* index, eae_templates** out) {
  return Guard([&] {
    Require(templates != nullptr && index != nullptr && out != nullptr,
            "null argument");
    *out = new eae_templates{templates->registry.WithTestTemplate(index)};
  });
}

void eae_templates_free(eae_templates* templates) { delete templates; }

// ---- dataset ----

eae_status eae_dataset_build(const eae_corpus* corpus,
                             const eae_templates* templates,
                             const char* split_json, eae_dataset** out) {
  return Guard([&] {
    Require(corpus != nullptr && templates != nullptr && out != nullptr,
            "null argument");
    const json j = ParseOptionalJson(split_json, "split config");
    eae::SplitConfig cfg;
    cfg.train_fraction = j.value("train_fraction", cfg.train_fraction);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.test_only = j.value("test_only", cfg.test_only);
    if (!(cfg.train_fraction >= 0.0 && cfg.train_fraction <= 1.0)) {
      throw eae::Error(eae::ErrorCode::kConfig,
                       "train_fraction must lie in [0, 1]");
    }
    *out = new eae_dataset{
        eae::BuildNliDataset(corpus->corpus, cfg, templates->registry)};
  });
}

eae_status eae_dataset_load(const char* path, eae_dataset** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    *out = new eae_dataset{eae::ReadDatasetFile(path)};
  });
}

eae_status eae_dataset_write(const eae_dataset* dataset, const char* path) {
  return Guard([&] {
    Require(dataset != nullptr && path != nullptr, "null argument");
    auto out = OpenOut(path);
    eae::WriteDataset(dataset->dataset, out);
  });
}

eae_status eae_dataset_stats_json(const eae_dataset* dataset,
                                  char** out_json) {
  return Guard([&] {
    Require(dataset != nullptr && out_json != nullptr, "null argument");
    *out_json = Dup(eae::report::ToJson(dataset->dataset.Stats()).dump());
  });
}

size_t eae_dataset_size(const eae_dataset* dataset, const char* split) {
  if (dataset == nullptr) return 0;
  try {
    return Select(dataset->dataset, split).size();
  } catch (...) {
    return 0;
  }
}

void eae_dataset_free(eae_dataset* dataset) { delete dataset; }

// ---- models ----

eae_status eae_train_kfold(const eae_dataset* dataset, const char* config_json,
                           const char* out_dir, eae_log_fn log, void* log_user,
                           char** out_report_json) {
  return Guard([&] {
    Require(dataset != nullptr && out_report_json != nullptr, "null argument");
    const json cfg = ParseOptionalJson(config_json, "train config");
    eae::nli::TrainConfig train;
    eae::nli::LossConfig loss;
    if (cfg.contains("train")) eae::nli::from_json(cfg.at("train"), train);
    if (cfg.contains("loss")) loss = cfg.at("loss").get<eae::nli::LossConfig>();

    const auto pairs = dataset->dataset.Split(eae::Phase::kTrain);
    if (pairs.empty()) {
      throw eae::Error(eae::ErrorCode::kInvalidArgument,
                       "dataset has no train split");
    }
    eae::nli::LogFn sink;
    if (log != nullptr) {
      sink = [log, log_user](std::string_view msg) {
        log(std::string(msg).c_str(), log_user);
      };
    }
    auto result = eae::nli::TrainKFold(pairs, train, loss, sink);

    eae::report::ordered_json report;
    report["train"] = json(train);
    report["loss"] = json(loss);
    report["folds"] = eae::report::ordered_json::array();
    for (const auto& f : result.folds) {
      report["folds"].push_back(eae::report::ToJson(f));
    }
    report["best_fold"] = result.best_fold
                              ? eae::report::ordered_json(*result.best_fold)
                              : eae::report::ordered_json(nullptr);
    report["mean_validation_f1"] =
        result.mean_validation_f1
            ? eae::report::ordered_json(*result.mean_validation_f1)
            : eae::report::ordered_json(nullptr);

    if (out_dir != nullptr && *out_dir != '\0') {
      const fs::path dir(out_dir);
      for (std::size_t k = 0; k < result.models.size(); ++k) {
        result.models[k].set_threshold(train.threshold);
        result.models[k].Save(dir / ("fold_" + std::to_string(k)));
      }
      if (result.best_fold) {
        result.models[*result.best_fold].Save(dir / "best");
      }
    }
    *out_report_json = Dup(report.dump());
  });
}

eae_status eae_model_load(const char* dir, eae_model** out) {
  return Guard([&] {
    Require(dir != nullptr && out != nullptr, "null argument");
    auto model =
        std::make_shared<const eae::nli::NliModel>(eae::nli::NliModel::Load(dir));
    const double threshold = model->threshold();
    *out = new eae_model{model, model, threshold};
  });
}

eae_status eae_model_oracle(const eae_corpus* gold, eae_model** out) {
  return Guard([&] {
    Require(gold != nullptr && out != nullptr, "null argument");
    auto oracle = std::make_shared<const eae::OracleScorer>(
        gold->corpus.sentences());
    *out = new eae_model{oracle, nullptr, 0.5};
  });
}

eae_status eae_model_set_threshold(eae_model* model, double threshold) {
  return Guard([&] {
    Require(model != nullptr, "model is null");
    Require(threshold >= 0.0 && threshold <= 1.01 + 1e-12,
            "threshold outside [0, 1.01]");
    model->threshold = threshold;
  });
}

eae_status eae_model_score(const eae_model* model, const char* premise,
                           const char* hypothesis, double* out_prob) {
  return Guard([&] {
    Require(model != nullptr && premise != nullptr && hypothesis != nullptr &&
                out_prob != nullptr,
            "null argument");
    if (!model->nli) {
      throw eae::Error(eae::ErrorCode::kUnsupported,
                       "the oracle scores annotated pairs only");
    }
    *out_prob = model->nli->Predict(premise, hypothesis);
  });
}

void eae_model_free(eae_model* model) { delete model; }

// ---- evaluation ----

eae_status eae_evaluate_nli(const eae_model* model, const eae_dataset* dataset,
                            const char* split, char** out_json) {
  return Guard([&] {
    Require(model != nullptr && dataset != nullptr && out_json != nullptr,
            "null argument");
    const auto pairs = Select(dataset->dataset, split);
    if (pairs.empty()) {
      throw eae::Error(eae::ErrorCode::kInvalidArgument,
                       "no pairs in the requested split");
    }
    const auto predicted =
        eae::nli::PredictLabels(*model->scorer, pairs, model->threshold);
    std::vector<eae::Label> gold;
    std::vector<eae::Relation> relations;
    for (const auto& p : pairs) {
      gold.push_back(p.label);
      relations.push_back(p.relation);
    }
    auto j = eae::report::ToJson(eae::EvaluateNli(predicted, gold));
    j["pairs"] = pairs.size();
    j["threshold"] = model->threshold;
    j["per_relation"] = eae::report::ordered_json::array();
    for (const auto& m : eae::EvaluatePerRelation(predicted, gold, relations)) {
      j["per_relation"].push_back(eae::report::ToJson(m));
    }
    *out_json = Dup(j.dump());
  });
}

eae_status eae_evaluate_graphs(const char* graphs_jsonl, const eae_corpus* gold,
                               char** out_json) {
  return Guard([&] {
    Require(graphs_jsonl != nullptr && gold != nullptr && out_json != nullptr,
            "null argument");
    std::istringstream in(graphs_jsonl);
    const auto graphs = eae::ReadGraphs(in, "graphs");
    *out_json = Dup(eae::report::ToJson(
                        eae::EvaluateEae(graphs, gold->corpus.sentences()))
                        .dump());
  });
}

eae_status eae_iaa_from_counts(const char* counts_json, char** out_json) {
  return Guard([&] {
    Require(counts_json != nullptr && out_json != nullptr, "null argument");
    const json j = ParseOptionalJson(counts_json, "IAA counts");
    *out_json =
        Dup(eae::report::ToJson(eae::report::IaaFromCountsJson(j)).dump());
  });
}

eae_status eae_iaa_from_corpora(const eae_corpus* a, const eae_corpus* b,
                                char** out_json) {
  return Guard([&] {
    Require(a != nullptr && b != nullptr && out_json != nullptr,
            "null argument");
    *out_json =
        Dup(eae::report::ToJson(eae::BuildIaaReport(a->corpus, b->corpus))
                .dump());
  });
}

// ---- extraction ----

eae_status eae_provider_create(const char* kind, const char* config_json,
                               const eae_corpus* gold, eae_provider** out) {
  return Guard([&] {
    Require(kind != nullptr && out != nullptr, "null argument");
    const std::string k(kind);
    const json cfg = ParseOptionalJson(config_json, "provider config");
    std::unique_ptr<eae::NerProvider> p;
    if (k == "gold") {
      Require(gold != nullptr, "gold provider needs a corpus");
      p = std::make_unique<eae::GoldNerProvider>(gold->corpus);
    } else if (k == "mock") {
      std::map<std::string, std::vector<eae::EntityMention>, std::less<>> script;
      for (const auto& [text, mentions] : cfg.items()) {
        auto parsed = eae::ParseNerResponse(json{{"entities", mentions}}.dump());
        script.emplace(text, std::move(parsed));
      }
      p = std::make_unique<eae::MockNerProvider>(std::move(script));
    } else if (k == "remote") {
      auto rc = eae::RemoteNerConfig::FromEnvironment();
      rc.endpoint = cfg.value("endpoint", rc.endpoint);
      rc.token = cfg.value("token", rc.token);
      rc.timeout = std::chrono::milliseconds(
          cfg.value("timeout_ms", static_cast<long>(rc.timeout.count())));
      rc.max_attempts = cfg.value("max_attempts", rc.max_attempts);
      rc.backoff = std::chrono::milliseconds(
          cfg.value("backoff_ms", static_cast<long>(rc.backoff.count())));
      p = std::make_unique<eae::RemoteNerProvider>(std::move(rc));
    } else {
      throw eae::Error(eae::ErrorCode::kInvalidArgument,
                       "unknown provider kind '" + k + "'");
    }
    *out = new eae_provider{std::move(p)};
  });
}

void eae_provider_free(eae_provider* provider) { delete provider; }

eae_status eae_extract_corpus(const eae_corpus* corpus, eae_provider* provider,
                              const eae_model* model,
                              const eae_templates* templates,
                              char** out_graphs_jsonl,
                              char** out_failures_json) {
  return Guard([&] {
    Require(corpus != nullptr && provider != nullptr && model != nullptr &&
                templates != nullptr && out_graphs_jsonl != nullptr,
            "null argument");
    const auto r = eae::ExtractCorpus(corpus->corpus, *provider->provider,
                                      *model->scorer, templates->registry,
                                      Options(model));
    std::string graphs = GraphsJsonl(r);
    std::string failures = FailuresJson(r);
    *out_graphs_jsonl = Dup(graphs);
    if (out_failures_json != nullptr) *out_failures_json = Dup(failures);
  });
}

eae_status eae_extract_document(const char* text, const char* document_id,
                                eae_provider* provider, const eae_model* model,
                                const eae_templates* templates,
                                char** out_graphs_jsonl,
                                char** out_failures_json) {
  return Guard([&] {
    Require(text != nullptr && provider != nullptr && model != nullptr &&
                templates != nullptr && out_graphs_jsonl != nullptr,
            "null argument");
    const auto r = eae::ProcessDocument(
        text, document_id != nullptr ? document_id : "doc", *provider->provider,
        *model->scorer, templates->registry, Options(model));
    std::string graphs = GraphsJsonl(r);
    std::string failures = FailuresJson(r);
    *out_graphs_jsonl = Dup(graphs);
    if (out_failures_json != nullptr) *out_failures_json = Dup(failures);
  });
}

}  // extern "C"
