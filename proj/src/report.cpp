#include "report.hpp"

#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "error.hpp"

namespace eae::report {

namespace {

ordered_json Opt(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json ToJson(const AgreementCounts& c) {
  return {{"tp", c.tp}, {"fn", c.fn}, {"fp", c.fp}};
}

std::size_t Cell(const DatasetStats& s, Phase p, Relation r, Label l) {
  auto it = s.find({p, r, l});
  return it == s.end() ? 0 : it->second;
}

}  // namespace

ordered_json ToJson(const CorpusStats& s) {
  ordered_json j;
  j["sentences"] = s.sentences;
  j["entities"] = s.entities;
  j["events"] = s.events;
  j["relations"] = ordered_json::object();
  for (const auto& [r, n] : s.relations) j["relations"][ToString(r)] = n;
  j["relations_total"] = s.relations_total;
  j["events_with_arguments"] = s.events_with_arguments;
  j["events_without_arguments"] = s.events_without_arguments;
  j["events_with_two_or_more_arguments"] = s.events_with_two_or_more_arguments;
  j["events_with_multiple_agents"] = s.events_with_multiple_agents;
  j["agent_relations_in_multi_agent_events"] =
      s.agent_relations_in_multi_agent_events;
  return j;
}

ordered_json ToJson(const DatasetStats& s, std::size_t train_templates) {
  ordered_json rows = ordered_json::array();
  std::size_t tp = 0, tn = 0, sp = 0, sn = 0;
  for (Relation r : kAllRelations) {
    const auto train_pos = Cell(s, Phase::kTrain, r, Label::kPositive);
    const auto train_neg = Cell(s, Phase::kTrain, r, Label::kNegative);
    const auto test_pos = Cell(s, Phase::kTest, r, Label::kPositive);
    const auto test_neg = Cell(s, Phase::kTest, r, Label::kNegative);
    tp += train_pos;
    tn += train_neg;
    sp += test_pos;
    sn += test_neg;
    rows.push_back(
        {{"relation", ToString(r)},
         {"train_positive", train_pos},
         {"train_negative", train_neg},
         {"test_positive", test_pos},
         {"test_negative", test_neg},
         {"relations_recovered",
          static_cast<double>(train_pos) / static_cast<double>(train_templates) +
              static_cast<double>(test_pos)}});
  }
  return {{"relations", rows},
          {"total",
           {{"train_positive", tp},
            {"train_negative", tn},
            {"test_positive", sp},
            {"test_negative", sn},
            {"pairs", tp + tn + sp + sn}}}};
}

ordered_json ToJson(const ClassMetrics& m) {
  return {{"name", m.name},         {"support", m.support},
          {"predicted", m.predicted}, {"tp", m.tp},
          {"precision", Opt(m.precision)}, {"recall", Opt(m.recall)},
          {"f1", Opt(m.f1)}};
}

ordered_json ToJson(const NliMetrics& m) {
  return {{"positive", ToJson(m.positive)},
          {"negative", ToJson(m.negative)},
          {"average_f1", Opt(m.average)},
          {"accuracy", m.accuracy},
          {"warnings", m.warnings}};
}

ordered_json ToJson(const IaaReport& r) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : r.rows) {
    rows.push_back(
        {{"relation", ToString(row.relation)},
         {"tp", row.counts.tp},
         {"fn", row.counts.fn},
         {"fp", row.counts.fp},
         {"tn", row.tn ? ordered_json(*row.tn) : ordered_json(nullptr)},
         {"kappa", Opt(row.kappa)},
         {"f1", Opt(row.f1)}});
  }
  return {{"relations", rows},
          {"overall", ToJson(r.overall)},
          {"macro_kappa", Opt(r.macro_kappa)},
          {"micro_f1", Opt(r.micro_f1)}};
}

ordered_json ToJson(const ExtractionMetrics& m) {
  return {{"counts", ToJson(m.counts)},
          {"precision", Opt(m.precision)},
          {"recall", Opt(m.recall)},
          {"f1", Opt(m.f1)}};
}

ordered_json ToJson(const nli::EpochMetrics& m) {
  return {{"epoch", m.epoch},
          {"wce", m.wce},
          {"nce", m.nce},
          {"total", m.total},
          {"validation_f1", Opt(m.validation_f1)},
          {"validation_accuracy", Opt(m.validation_accuracy)}};
}

ordered_json ToJson(const nli::FoldReport& f) {
  ordered_json epochs = ordered_json::array();
  for (const auto& e : f.epochs) epochs.push_back(ToJson(e));
  return {{"fold", f.fold},
          {"train_pairs", f.train_pairs},
          {"validation_pairs", f.validation_pairs},
          {"validation_sentences", f.validation_sentences},
          {"skipped", f.skipped},
          {"warning", f.warning},
          {"epochs", epochs},
          {"validation",
           f.validation ? ToJson(*f.validation) : ordered_json(nullptr)}};
}

IaaReport IaaFromCountsJson(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kParse, "IAA counts must be a JSON object");
  }
  std::map<Relation, AgreementCounts> counts;
  std::map<Relation, std::size_t> tns;
  for (const auto& [name, row] : j.items()) {
    const Relation r = RelationFromString(name);
    try {
      counts[r] = {row.at("tp").get<std::size_t>(),
                   row.at("fn").get<std::size_t>(),
                   row.at("fp").get<std::size_t>()};
      if (row.contains("tn")) tns[r] = row.at("tn").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse,
                  "IAA counts for " + name + ": " + e.what());
    }
  }
  return BuildIaaReport(counts, tns);
}

std::string Sha256File(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(
      EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kIo, "SHA-256 unavailable");
  }
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

}  // namespace eae::report
