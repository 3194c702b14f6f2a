// Command-line front end. Talks to the library only through eae/eae.h.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eae/eae.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

class CliError : public std::runtime_error {
 public:
  CliError(const std::string& what, int exit_code = 1)
      : std::runtime_error(what), exit_code_(exit_code) {}
  int exit_code() const { return exit_code_; }

 private:
  int exit_code_;
};

void Check(eae_status s, const std::string& context) {
  if (s != EAE_OK) {
    throw CliError(context + ": " + eae_status_name(s) + ": " +
                       eae_last_error(),
                   2);
  }
}

std::string Take(char* s) {
  std::string out = s != nullptr ? s : "";
  eae_string_free(s);
  return out;
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Corpus = std::unique_ptr<eae_corpus, Deleter<eae_corpus, eae_corpus_free>>;
using Templates =
    std::unique_ptr<eae_templates, Deleter<eae_templates, eae_templates_free>>;
using Dataset =
    std::unique_ptr<eae_dataset, Deleter<eae_dataset, eae_dataset_free>>;
using Model = std::unique_ptr<eae_model, Deleter<eae_model, eae_model_free>>;
using Provider =
    std::unique_ptr<eae_provider, Deleter<eae_provider, eae_provider_free>>;

// ---- options ----

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string output_dir = "eae-out";

  std::string corpus;
  std::string format = "jsonl";
  std::string relations;
  std::string corpus_b;
  std::string templates;
  std::optional<double> train_fraction;
  bool test_only = false;

  std::string dataset;
  std::string preset;
  std::string base;
  std::string encoder;
  std::optional<int> folds;
  std::optional<int> epochs;

  std::string model;
  bool oracle = false;
  std::string split = "test";
  std::string test_template;
  std::optional<double> threshold;
  std::string plot;

  std::string counts;

  std::string text;
  std::string provider = "gold";
  std::string provider_config;
  std::string document_id = "doc";
};

// Resolved run configuration, recorded verbatim in the manifest.
struct Run {
  std::string subcommand;
  std::vector<std::string> argv;
  ordered_json config;
  ordered_json inputs = ordered_json::object();
  std::vector<std::string> outputs;
};

json LoadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw CliError(path + ": " + e.what());
  }
}

json Presets() {
  char* raw = nullptr;
  Check(eae_presets_json(&raw), "presets");
  return json::parse(Take(raw));
}

void RequireFile(const std::string& path, const std::string& what) {
  if (path.empty()) throw CliError(what + " is required");
  if (!fs::exists(path)) throw CliError(what + " not found: " + path);
}

std::string Sha256(const std::string& path) {
  char* hex = nullptr;
  Check(eae_file_sha256(path.c_str(), &hex), "hash " + path);
  return Take(hex);
}

void RecordInput(Run& run, const std::string& path) {
  if (!path.empty()) run.inputs[path] = Sha256(path);
}

// Preset, then --config, then flags. A manifest passed to --config replays
// its recorded configuration.
ordered_json ResolveConfig(const Options& o, const std::string& preset_name) {
  ordered_json cfg = {
      {"preset", nullptr},
      {"seed", 42},
      {"split", {{"train_fraction", 0.7}, {"test_only", false}}},
      {"train", ordered_json::object()},
      {"loss", ordered_json::object()},
      {"test_template", "t2"},
      {"threshold", nullptr}};
  if (!preset_name.empty()) {
    const json presets = Presets();
    if (!presets.contains(preset_name)) {
      throw CliError("unknown preset '" + preset_name + "'");
    }
    json p = presets.at(preset_name);
    std::string base = p.value("base", "");
    if (!o.base.empty()) base = o.base;
    if (!base.empty()) {
      if (!presets.contains(base)) throw CliError("unknown base preset " + base);
      json merged = presets.at(base);
      merged.update(p);
      p = merged;
      cfg["base"] = base;
    }
    cfg["preset"] = preset_name;
    if (p.contains("train")) cfg["train"].update(ordered_json(p["train"]));
    if (p.contains("loss")) cfg["loss"].update(ordered_json(p["loss"]));
    if (p.contains("encoder")) cfg["train"]["encoder"] = p["encoder"];
    if (p.contains("runs")) cfg["runs"] = p["runs"];
    if (p.contains("test_templates")) cfg["test_templates"] = p["test_templates"];
  }
  if (!o.config_path.empty()) {
    json file = LoadJsonFile(o.config_path);
    if (file.contains("manifest_version")) file = file.at("config");
    cfg.update(ordered_json(file), true);
  }
  if (o.seed) cfg["seed"] = *o.seed;
  if (o.train_fraction) cfg["split"]["train_fraction"] = *o.train_fraction;
  if (o.test_only) cfg["split"]["test_only"] = true;
  if (!o.encoder.empty()) cfg["train"]["encoder"]["identifier"] = o.encoder;
  if (o.folds) cfg["train"]["folds"] = *o.folds;
  if (o.epochs) cfg["train"]["epochs"] = *o.epochs;
  if (!o.test_template.empty()) cfg["test_template"] = o.test_template;
  if (o.threshold) cfg["threshold"] = *o.threshold;
  if (!o.templates.empty()) cfg["templates"] = o.templates;

  // One root seed drives the split and training.
  cfg["split"]["seed"] = cfg["seed"];
  cfg["train"]["seed"] = cfg["seed"];
  if (!cfg["threshold"].is_null()) cfg["train"]["threshold"] = cfg["threshold"];
  return cfg;
}

void WriteText(Run& run, const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError("cannot write " + path.string());
  out << text;
  run.outputs.push_back(path.filename().string());
}

void WriteJson(Run& run, const fs::path& path, const ordered_json& j) {
  WriteText(run, path, j.dump(2) + "\n");
}

void WriteManifest(const Options& o, Run& run) {
  ordered_json m;
  m["manifest_version"] = 1;
  m["tool"] = "eae";
  m["version"] = eae_version();
  m["subcommand"] = run.subcommand;
  m["argv"] = run.argv;
  m["config"] = run.config;
  m["inputs"] = run.inputs;
  std::sort(run.outputs.begin(), run.outputs.end());
  m["outputs"] = run.outputs;
  const fs::path path = fs::path(o.output_dir) / "manifest.json";
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << m.dump(2) << "\n";
}

// ---- formatting ----

std::string Pct(const json& v) {
  if (v.is_null()) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v.get<double>() * 100.0);
  return buf;
}

std::string Pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string Lpad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

void PrintDatasetStats(const json& stats) {
  std::cout << Pad("relation", 14) << Lpad("train+", 9) << Lpad("train-", 9)
            << Lpad("test+", 8) << Lpad("test-", 8) << Lpad("relations", 11)
            << "\n";
  for (const auto& r : stats.at("relations")) {
    char rec[32];
    std::snprintf(rec, sizeof rec, "%.2f",
                  r.at("relations_recovered").get<double>());
    std::cout << Pad(r.at("relation"), 14)
              << Lpad(std::to_string(r.at("train_positive").get<long>()), 9)
              << Lpad(std::to_string(r.at("train_negative").get<long>()), 9)
              << Lpad(std::to_string(r.at("test_positive").get<long>()), 8)
              << Lpad(std::to_string(r.at("test_negative").get<long>()), 8)
              << Lpad(rec, 11) << "\n";
  }
  const auto& t = stats.at("total");
  std::cout << Pad("total", 14)
            << Lpad(std::to_string(t.at("train_positive").get<long>()), 9)
            << Lpad(std::to_string(t.at("train_negative").get<long>()), 9)
            << Lpad(std::to_string(t.at("test_positive").get<long>()), 8)
            << Lpad(std::to_string(t.at("test_negative").get<long>()), 8)
            << "\n";
}

void PrintClassRow(const std::string& name, const json& m) {
  std::cout << Pad(name, 14) << Lpad(Pct(m.at("precision")), 9)
            << Lpad(Pct(m.at("recall")), 9) << Lpad(Pct(m.at("f1")), 9)
            << Lpad(std::to_string(m.at("support").get<long>()), 9) << "\n";
}

void PrintNliReport(const json& r) {
  std::cout << Pad("class", 14) << Lpad("P", 9) << Lpad("R", 9)
            << Lpad("F1", 9) << Lpad("support", 9) << "\n";
  PrintClassRow("Positive", r.at("positive"));
  PrintClassRow("Negative", r.at("negative"));
  std::cout << Pad("Average", 14) << Lpad("", 18)
            << Lpad(Pct(r.at("average_f1")), 9) << "\n";
  std::cout << "accuracy " << Pct(r.at("accuracy")) << "\n\n";
  std::cout << Pad("relation", 14) << Lpad("P", 9) << Lpad("R", 9)
            << Lpad("F1", 9) << Lpad("support", 9) << "\n";
  for (const auto& m : r.at("per_relation")) PrintClassRow(m.at("name"), m);
  for (const auto& w : r.at("warnings")) {
    std::cerr << "warning: " << w.get<std::string>() << "\n";
  }
}

void PrintIaa(const json& r) {
  std::cout << Pad("relation", 14) << Lpad("TP", 6) << Lpad("FN", 6)
            << Lpad("FP", 6) << Lpad("TN", 7) << Lpad("kappa", 9)
            << Lpad("F1", 9) << "\n";
  for (const auto& row : r.at("relations")) {
    std::cout << Pad(row.at("relation"), 14)
              << Lpad(std::to_string(row.at("tp").get<long>()), 6)
              << Lpad(std::to_string(row.at("fn").get<long>()), 6)
              << Lpad(std::to_string(row.at("fp").get<long>()), 6)
              << Lpad(row.at("tn").is_null()
                          ? "-"
                          : std::to_string(row.at("tn").get<long>()),
                      7)
              << Lpad(Pct(row.at("kappa")), 9) << Lpad(Pct(row.at("f1")), 9)
              << "\n";
  }
  std::cout << "macro kappa " << Pct(r.at("macro_kappa")) << "\n"
            << "micro F1    " << Pct(r.at("micro_f1")) << "\n";
}

// Horizontal bars for every F1 in an evaluation report.
std::string RenderSvg(const json& report, const std::string& title) {
  std::vector<std::pair<std::string, double>> bars;
  auto add = [&](const std::string& name, const json& v) {
    if (!v.is_null()) bars.emplace_back(name, v.get<double>());
  };
  add("Positive", report.at("positive").at("f1"));
  add("Negative", report.at("negative").at("f1"));
  add("Average", report.at("average_f1"));
  for (const auto& m : report.at("per_relation")) {
    add(m.at("name").get<std::string>(), m.at("f1"));
  }
  const int row = 28, left = 110, width = 360;
  const int height = 50 + row * static_cast<int>(bars.size());
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
      << left + width + 70 << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<text x=\"10\" y=\"20\" font-size=\"14\">" << title << "</text>\n";
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const int y = 35 + row * static_cast<int>(i);
    const int w = static_cast<int>(std::lround(bars[i].second * width));
    char label[32];
    std::snprintf(label, sizeof label, "%.2f", bars[i].second * 100.0);
    svg << "<text x=\"10\" y=\"" << y + 15 << "\">" << bars[i].first
        << "</text>\n"
        << "<rect x=\"" << left << "\" y=\"" << y << "\" width=\"" << w
        << "\" height=\"20\" fill=\"#4878a8\"/>\n"
        << "<text x=\"" << left + w + 5 << "\" y=\"" << y + 15 << "\">"
        << label << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

// ---- shared loading ----

Corpus LoadCorpus(Run& run, const std::string& path, const Options& o) {
  RequireFile(path, "corpus");
  if (!o.relations.empty()) RequireFile(o.relations, "relation sidecar");
  eae_corpus* c = nullptr;
  Check(eae_corpus_load(path.c_str(), o.format.c_str(),
                        o.relations.empty() ? nullptr : o.relations.c_str(), &c),
        "load corpus");
  RecordInput(run, path);
  RecordInput(run, o.relations);
  return Corpus(c);
}

Templates LoadTemplates(Run& run, const ordered_json& cfg) {
  eae_templates* t = nullptr;
  if (cfg.contains("templates") && !cfg["templates"].is_null()) {
    const std::string path = cfg["templates"];
    RequireFile(path, "templates");
    Check(eae_templates_load(path.c_str(), &t), "load templates");
    RecordInput(run, path);
  } else {
    Check(eae_templates_default(&t), "templates");
  }
  Templates base(t);
  const std::string index = cfg.value("test_template", "t2");
  eae_templates* selected = nullptr;
  Check(eae_templates_with_test(base.get(), index.c_str(), &selected),
        "select test template");
  return Templates(selected);
}

Dataset BuildDataset(const eae_corpus* corpus, const eae_templates* templates,
                     const ordered_json& cfg) {
  eae_dataset* d = nullptr;
  Check(eae_dataset_build(corpus, templates, cfg["split"].dump().c_str(), &d),
        "build dataset");
  return Dataset(d);
}

Dataset LoadDataset(Run& run, const std::string& path) {
  RequireFile(path, "dataset");
  eae_dataset* d = nullptr;
  Check(eae_dataset_load(path.c_str(), &d), "load dataset");
  RecordInput(run, path);
  return Dataset(d);
}

Model LoadModel(Run& run, const Options& o, const eae_corpus* gold) {
  eae_model* m = nullptr;
  if (o.oracle) {
    if (gold == nullptr) throw CliError("--oracle needs --corpus for gold labels");
    Check(eae_model_oracle(gold, &m), "oracle model");
  } else {
    RequireFile(o.model, "model checkpoint");
    Check(eae_model_load(o.model.c_str(), &m), "load model " + o.model);
    for (const char* f : {"config.json", "weights.bin"}) {
      RecordInput(run, (fs::path(o.model) / f).string());
    }
  }
  Model model(m);
  if (o.threshold) {
    Check(eae_model_set_threshold(model.get(), *o.threshold), "threshold");
  }
  return model;
}

json Evaluate(const eae_model* model, const eae_dataset* dataset,
              const std::string& split) {
  char* out = nullptr;
  Check(eae_evaluate_nli(model, dataset, split.empty() ? nullptr : split.c_str(),
                         &out),
        "evaluate");
  return json::parse(Take(out));
}

void Log(const char* message, void*) { std::cerr << message << "\n"; }

json Train(const eae_dataset* dataset, const ordered_json& cfg,
           const fs::path& dir) {
  const ordered_json run_cfg = {{"train", cfg["train"]}, {"loss", cfg["loss"]}};
  char* report = nullptr;
  Check(eae_train_kfold(dataset, run_cfg.dump().c_str(), dir.string().c_str(),
                        Log, nullptr, &report),
        "train");
  return json::parse(Take(report));
}

Model LoadBest(const json& report, const fs::path& dir) {
  if (report.at("best_fold").is_null()) {
    throw CliError("no fold produced a usable model (every fold was skipped)");
  }
  eae_model* m = nullptr;
  Check(eae_model_load((dir / "best").string().c_str(), &m), "load best model");
  return Model(m);
}

// ---- subcommands ----

void CmdStats(const Options& o, Run& run) {
  run.config = ResolveConfig(o, "");
  Corpus corpus = LoadCorpus(run, o.corpus, o);
  char* stats = nullptr;
  Check(eae_corpus_stats_json(corpus.get(), &stats), "stats");
  const auto j = ordered_json::parse(Take(stats));
  std::cout << j.dump(2) << "\n";
  WriteJson(run, fs::path(o.output_dir) / "corpus_stats.json", j);
}

void CmdPairgen(const Options& o, Run& run) {
  run.config = ResolveConfig(o, "");
  Corpus corpus = LoadCorpus(run, o.corpus, o);
  Templates templates = LoadTemplates(run, run.config);
  Dataset dataset = BuildDataset(corpus.get(), templates.get(), run.config);
  char* stats = nullptr;
  Check(eae_dataset_stats_json(dataset.get(), &stats), "stats");
  const auto j = ordered_json::parse(Take(stats));

  const fs::path out = fs::path(o.output_dir) / "dataset.jsonl";
  fs::create_directories(out.parent_path());
  Check(eae_dataset_write(dataset.get(), out.string().c_str()), "write dataset");
  run.outputs.push_back(out.filename().string());
  WriteJson(run, fs::path(o.output_dir) / "dataset_stats.json", j);
  PrintDatasetStats(j);
}

// Dataset from --dataset, or built from --corpus under the run's split.
Dataset DatasetFor(const Options& o, Run& run, const eae_corpus* corpus,
                   const eae_templates* templates) {
  if (!o.dataset.empty()) return LoadDataset(run, o.dataset);
  if (corpus == nullptr) throw CliError("--dataset or --corpus is required");
  return BuildDataset(corpus, templates, run.config);
}

void CmdTrain(const Options& o, Run& run) {
  const std::string preset = o.preset.empty() ? "desk" : o.preset;
  run.config = ResolveConfig(o, preset);
  const fs::path out(o.output_dir);

  Corpus corpus;
  if (!o.corpus.empty()) corpus = LoadCorpus(run, o.corpus, o);
  Templates templates = LoadTemplates(run, run.config);
  Dataset dataset = DatasetFor(o, run, corpus.get(), templates.get());
  if (eae_dataset_size(dataset.get(), "train") == 0) {
    throw CliError("dataset has no train split");
  }
  const bool has_test = eae_dataset_size(dataset.get(), "test") > 0;

  ordered_json summary = ordered_json::array();
  if (run.config.contains("runs")) {
    for (const auto& r : run.config["runs"]) {
      ordered_json cfg = run.config;
      cfg["loss"].update(r.at("loss"));
      const std::string name = r.at("name");
      std::cerr << "== run " << name << "\n";
      const json report = Train(dataset.get(), cfg, out / name);
      WriteJson(run, out / name / "train_report.json", report);
      ordered_json row = {{"run", name},
                          {"loss", cfg["loss"]},
                          {"best_fold", report["best_fold"]},
                          {"mean_validation_f1", report["mean_validation_f1"]}};
      if (has_test) {
        Model best = LoadBest(report, out / name);
        const json eval = Evaluate(best.get(), dataset.get(), "test");
        WriteJson(run, out / name / "test_metrics.json", eval);
        row["test_average_f1"] = eval["average_f1"];
      }
      summary.push_back(row);
    }
  } else {
    const json report = Train(dataset.get(), run.config, out);
    WriteJson(run, out / "train_report.json", report);
    if (run.config.contains("test_templates")) {
      if (!corpus) {
        throw CliError("preset " + preset +
                       " rebuilds test splits and needs --corpus");
      }
      Model best = LoadBest(report, out);
      for (const auto& idx : run.config["test_templates"]) {
        ordered_json cfg = run.config;
        cfg["test_template"] = idx;
        Templates t = LoadTemplates(run, cfg);
        Dataset d = BuildDataset(corpus.get(), t.get(), cfg);
        const json eval = Evaluate(best.get(), d.get(), "test");
        const std::string name = idx.get<std::string>();
        WriteJson(run, out / ("test_metrics_" + name + ".json"), eval);
        summary.push_back(
            {{"test_template", name}, {"test_average_f1", eval["average_f1"]}});
      }
    } else {
      ordered_json row = {{"best_fold", report["best_fold"]},
                          {"mean_validation_f1", report["mean_validation_f1"]}};
      if (has_test) {
        Model best = LoadBest(report, out);
        const json eval = Evaluate(best.get(), dataset.get(), "test");
        WriteJson(run, out / "test_metrics.json", eval);
        row["test_average_f1"] = eval["average_f1"];
        PrintNliReport(eval);
      }
      summary.push_back(row);
    }
  }
  WriteJson(run, out / "summary.json", summary);
  std::cout << summary.dump(2) << "\n";
}

void CmdEval(const Options& o, Run& run) {
  run.config = ResolveConfig(o, "");
  Corpus corpus;
  if (!o.corpus.empty()) corpus = LoadCorpus(run, o.corpus, o);
  Templates templates = LoadTemplates(run, run.config);
  Dataset dataset = DatasetFor(o, run, corpus.get(), templates.get());
  Model model = LoadModel(run, o, corpus.get());
  json report = Evaluate(model.get(), dataset.get(), o.split == "all" ? "" : o.split);
  WriteJson(run, fs::path(o.output_dir) / "eval.json", report);
  PrintNliReport(report);
  if (!o.plot.empty()) {
    const fs::path plot = o.plot;
    fs::create_directories(fs::absolute(plot).parent_path());
    std::ofstream svg(plot, std::ios::binary);
    if (!svg) throw CliError("cannot write " + o.plot);
    svg << RenderSvg(report, "F1 (" + o.split + " split)");
  }
}

void CmdIaa(const Options& o, Run& run) {
  run.config = ResolveConfig(o, "");
  char* out = nullptr;
  if (!o.counts.empty()) {
    RequireFile(o.counts, "counts file");
    const json counts = LoadJsonFile(o.counts);
    RecordInput(run, o.counts);
    Check(eae_iaa_from_counts(counts.dump().c_str(), &out), "iaa");
  } else {
    if (o.corpus.empty() || o.corpus_b.empty()) {
      throw CliError("iaa needs --counts or both --a and --b");
    }
    Corpus a = LoadCorpus(run, o.corpus, o);
    Corpus b = LoadCorpus(run, o.corpus_b, o);
    Check(eae_iaa_from_corpora(a.get(), b.get(), &out), "iaa");
  }
  const auto report = ordered_json::parse(Take(out));
  WriteJson(run, fs::path(o.output_dir) / "iaa.json", report);
  PrintIaa(report);
}

void CmdExtract(const Options& o, Run& run) {
  run.config = ResolveConfig(o, "");
  Corpus corpus;
  if (!o.corpus.empty()) corpus = LoadCorpus(run, o.corpus, o);
  std::string document;
  if (!o.text.empty()) {
    RequireFile(o.text, "text");
    std::ifstream in(o.text, std::ios::binary);
    document.assign(std::istreambuf_iterator<char>(in), {});
    RecordInput(run, o.text);
  } else if (!corpus) {
    throw CliError("extract needs --corpus or --text");
  }
  Templates templates = LoadTemplates(run, run.config);
  Model model = LoadModel(run, o, corpus.get());

  std::string provider_cfg;
  if (!o.provider_config.empty()) {
    RequireFile(o.provider_config, "provider config");
    provider_cfg = LoadJsonFile(o.provider_config).dump();
    RecordInput(run, o.provider_config);
  }
  run.config["provider"] = o.provider;
  eae_provider* p = nullptr;
  Check(eae_provider_create(o.provider.c_str(),
                            provider_cfg.empty() ? nullptr : provider_cfg.c_str(),
                            corpus.get(), &p),
        "provider");
  Provider provider(p);

  char* graphs = nullptr;
  char* failures = nullptr;
  if (!document.empty()) {
    Check(eae_extract_document(document.c_str(), o.document_id.c_str(),
                               provider.get(), model.get(), templates.get(),
                               &graphs, &failures),
          "extract");
  } else {
    Check(eae_extract_corpus(corpus.get(), provider.get(), model.get(),
                             templates.get(), &graphs, &failures),
          "extract");
  }
  const std::string graphs_jsonl = Take(graphs);
  const auto failure_list = ordered_json::parse(Take(failures));
  const fs::path out(o.output_dir);
  WriteText(run, out / "graphs.jsonl", graphs_jsonl);
  WriteJson(run, out / "failures.json", failure_list);
  for (const auto& f : failure_list) {
    std::cerr << "sentence " << f["sentence_id"].get<std::string>()
              << " failed: " << f["message"].get<std::string>() << "\n";
  }
  if (corpus && document.empty()) {
    char* metrics = nullptr;
    Check(eae_evaluate_graphs(graphs_jsonl.c_str(), corpus.get(), &metrics),
          "evaluate graphs");
    const auto m = ordered_json::parse(Take(metrics));
    WriteJson(run, out / "extraction_metrics.json", m);
    std::cout << "P " << Pct(m["precision"]) << "  R " << Pct(m["recall"])
              << "  F1 " << Pct(m["f1"]) << "\n";
  } else {
    std::cout << graphs_jsonl;
  }
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Event-argument extraction as entailment"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(eae_version()));
  app.add_option("--config", o.config_path,
                 "JSON run configuration or a previous manifest.json");
  app.add_option("--seed", o.seed, "root seed for splitting and training");
  app.add_option("--output-dir", o.output_dir, "directory for run outputs");

  auto corpus_opts = [&](CLI::App* cmd) {
    cmd->add_option("--corpus", o.corpus, "annotated corpus");
    cmd->add_option("--format", o.format, "corpus format: jsonl or bio")
        ->check(CLI::IsMember({"jsonl", "json", "bio", "conll"}));
    cmd->add_option("--relations", o.relations, "relation sidecar for bio");
  };
  auto template_opts = [&](CLI::App* cmd) {
    cmd->add_option("--templates", o.templates, "template file (JSON)");
    cmd->add_option("--test-template", o.test_template, "t1..t4");
    cmd->add_option("--train-fraction", o.train_fraction);
    cmd->add_flag("--test-only", o.test_only,
                  "put every sentence in the test split");
  };
  auto model_opts = [&](CLI::App* cmd) {
    cmd->add_option("--model", o.model, "checkpoint directory");
    cmd->add_flag("--oracle", o.oracle, "score gold triples of --corpus as 1");
    cmd->add_option("--threshold", o.threshold, "decision threshold");
  };

  auto* stats = app.add_subcommand("stats", "corpus statistics");
  corpus_opts(stats);

  auto* pairgen = app.add_subcommand("pairgen", "build the NLI dataset");
  corpus_opts(pairgen);
  template_opts(pairgen);

  auto* train = app.add_subcommand("train", "k-fold training");
  corpus_opts(train);
  template_opts(train);
  train->add_option("--dataset", o.dataset, "dataset.jsonl from pairgen");
  train->add_option("--preset", o.preset,
                    "paper, desk, ablate-loss or ablate-template");
  train->add_option("--base", o.base, "base preset for ablations");
  train->add_option("--encoder", o.encoder, "encoder identifier");
  train->add_option("--folds", o.folds);
  train->add_option("--epochs", o.epochs);
  train->add_option("--threshold", o.threshold);

  auto* eval = app.add_subcommand("eval", "evaluate a model on NLI pairs");
  corpus_opts(eval);
  template_opts(eval);
  model_opts(eval);
  eval->add_option("--dataset", o.dataset);
  eval->add_option("--split", o.split, "train, test or all")
      ->check(CLI::IsMember({"train", "test", "all"}));
  eval->add_option("--plot", o.plot, "write an SVG bar chart of F1 scores");

  auto* iaa = app.add_subcommand("iaa", "inter-annotator agreement");
  iaa->add_option("--counts", o.counts, "JSON of tp/fn/fp[/tn] per relation");
  iaa->add_option("--a", o.corpus, "annotator A corpus");
  iaa->add_option("--b", o.corpus_b, "annotator B corpus");
  iaa->add_option("--format", o.format);

  auto* extract = app.add_subcommand("extract", "text to event-argument graphs");
  corpus_opts(extract);
  template_opts(extract);
  model_opts(extract);
  extract->add_option("--text", o.text, "raw document to segment and process");
  extract->add_option("--document-id", o.document_id);
  extract->add_option("--provider", o.provider, "gold, mock or remote")
      ->check(CLI::IsMember({"gold", "mock", "remote"}));
  extract->add_option("--provider-config", o.provider_config, "JSON file");

  CLI11_PARSE(app, argc, argv);

  Run run;
  run.argv.assign(argv + 1, argv + argc);
  try {
    CLI::App* cmd = app.get_subcommands().front();
    run.subcommand = cmd->get_name();
    if (cmd == stats) CmdStats(o, run);
    else if (cmd == pairgen) CmdPairgen(o, run);
    else if (cmd == train) CmdTrain(o, run);
    else if (cmd == eval) CmdEval(o, run);
    else if (cmd == iaa) CmdIaa(o, run);
    else if (cmd == extract) CmdExtract(o, run);
    WriteManifest(o, run);
  } catch (const CliError& e) {
    std::cerr << "eae " << run.subcommand << ": " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "eae " << run.subcommand << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}
