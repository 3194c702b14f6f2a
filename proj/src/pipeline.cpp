#include "pipeline.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "error.hpp"
#include "json.hpp"
#include "utf8.hpp"

namespace eae {

using nlohmann::json;
using nlohmann::ordered_json;

AnnotatedSentence RecognizeEntities(std::string_view text,
                                    std::string_view sentence_id,
                                    NerProvider& provider) {
  AnnotatedSentence s;
  s.id = std::string(sentence_id);
  s.text = utf8::NormalizeWhitespace(text);
  if (s.text.empty()) return s;

  s.entities = provider.Recognize(s.text, sentence_id);
  const std::size_t length = utf8::Length(s.text);
  std::size_t k = 0;
  for (auto& e : s.entities) {
    ++k;
    e.sentence_id = s.id;
    if (e.id.empty()) e.id = s.id + ":T" + std::to_string(k);
    if (e.surface.empty() && e.start < e.end && e.end <= length) {
      e.surface = utf8::Substr(s.text, e.start, e.end);
    }
  }
  auto issues = ValidateSentences(std::span<const AnnotatedSentence>(&s, 1));
  if (!issues.empty()) {
    std::string msg = std::string(provider.kind()) +
                      " NER provider returned invalid mentions:";
    for (const auto& i : issues) msg += "\n  " + i;
    throw Error(ErrorCode::kProtocol, msg);
  }
  return s;
}

std::vector<Candidate> CandidatePairs(const AnnotatedSentence& sentence) {
  std::vector<Candidate> out;
  for (const auto& event : sentence.entities) {
    if (!event.IsEvent()) continue;
    for (const auto& entity : sentence.entities) {
      auto relation = RelationForEntityType(entity.type);
      if (!relation) continue;
      out.push_back({&event, &entity, *relation});
    }
  }
  return out;
}

OracleScorer::OracleScorer(std::span<const AnnotatedSentence> gold) {
  for (const auto& s : gold) {
    for (const auto& r : s.relations) {
      gold_.emplace(s.id, r.event_id, r.relation, r.argument_id);
    }
  }
}

std::vector<double> OracleScorer::Score(
    std::span<const nli::PairQuery> queries) const {
  std::vector<double> out;
  out.reserve(queries.size());
  for (const auto& q : queries) {
    const bool hit =
        gold_.contains({q.sentence_id, q.event_id, q.relation, q.entity_id});
    out.push_back(hit ? 1.0 : 0.0);
  }
  return out;
}

EventArgumentGraph ExtractArguments(const AnnotatedSentence& sentence,
                                    const nli::EntailmentScorer& scorer,
                                    const TemplateRegistry& templates,
                                    const ExtractionOptions& options) {
  EventArgumentGraph graph;
  graph.sentence_id = sentence.id;
  graph.text = sentence.text;
  graph.nodes = sentence.entities;

  const auto candidates = CandidatePairs(sentence);
  std::vector<nli::PairQuery> queries;
  queries.reserve(candidates.size());
  for (const auto& c : candidates) {
    const auto test = templates.For(c.relation, Phase::kTest);
    const Hypothesis h = Instantiate(test.front(), *c.event, *c.entity);
    queries.push_back({sentence.text, h.text, sentence.id, c.event->id,
                       c.entity->id, c.relation});
  }

  const std::size_t batch = std::max<std::size_t>(1, options.batch_size);
  std::vector<double> scores;
  scores.reserve(queries.size());
  for (std::size_t i = 0; i < queries.size(); i += batch) {
    const std::size_t n = std::min(batch, queries.size() - i);
    auto part = scorer.Score(std::span(queries).subspan(i, n));
    if (part.size() != n) {
      throw Error(ErrorCode::kProtocol, "scorer returned " +
                                            std::to_string(part.size()) +
                                            " scores for " + std::to_string(n) +
                                            " queries");
    }
    scores.insert(scores.end(), part.begin(), part.end());
  }

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (scores[i] >= options.threshold) {
      graph.edges.push_back({candidates[i].event->id, candidates[i].relation,
                             candidates[i].entity->id, scores[i]});
    }
  }
  std::sort(graph.edges.begin(), graph.edges.end(),
            [](const GraphEdge& a, const GraphEdge& b) {
              return a.triple() < b.triple();
            });
  return graph;
}

namespace {

bool IsTerminal(char32_t cp) {
  return cp == U'.' || cp == U'!' || cp == U'?' || cp == U'؟' ||
         cp == U'۔';
}

}  // namespace

std::vector<std::string> SplitSentences(std::string_view document) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    std::string s = utf8::NormalizeWhitespace(current);
    if (!s.empty()) out.push_back(std::move(s));
    current.clear();
  };
  std::size_t pos = 0;
  while (pos < document.size()) {
    const char32_t cp = utf8::Next(document, pos);
    if (cp == U'\n' || cp == U'\r') {
      flush();
      continue;
    }
    utf8::Append(current, cp);
    if (IsTerminal(cp)) {
      // Keep runs like "?!" or "..." together.
      std::size_t peek = pos;
      while (peek < document.size()) {
        std::size_t next = peek;
        const char32_t c = utf8::Next(document, next);
        if (!IsTerminal(c)) break;
        utf8::Append(current, c);
        peek = next;
      }
      pos = peek;
      flush();
    }
  }
  flush();
  return out;
}

namespace {

void ProcessOne(std::string_view text, const std::string& id,
                NerProvider& provider, const nli::EntailmentScorer& scorer,
                const TemplateRegistry& templates,
                const ExtractionOptions& options, DocumentResult& result) {
  try {
    AnnotatedSentence s = RecognizeEntities(text, id, provider);
    if (!s.HasEvent()) return;
    result.graphs.push_back(ExtractArguments(s, scorer, templates, options));
  } catch (const std::exception& e) {
    result.failures.push_back({id, e.what()});
  }
}

}  // namespace

DocumentResult ProcessDocument(std::string_view document,
                               std::string_view document_id,
                               NerProvider& provider,
                               const nli::EntailmentScorer& scorer,
                               const TemplateRegistry& templates,
                               const ExtractionOptions& options) {
  DocumentResult result;
  const auto sentences = SplitSentences(document);
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const std::string id =
        std::string(document_id) + ":" + std::to_string(i + 1);
    ProcessOne(sentences[i], id, provider, scorer, templates, options, result);
  }
  return result;
}

DocumentResult ExtractCorpus(const Corpus& corpus, NerProvider& provider,
                             const nli::EntailmentScorer& scorer,
                             const TemplateRegistry& templates,
                             const ExtractionOptions& options) {
  DocumentResult result;
  for (const auto& s : corpus.sentences()) {
    ProcessOne(s.text, s.id, provider, scorer, templates, options, result);
  }
  return result;
}

void WriteGraphs(std::span<const EventArgumentGraph> graphs, std::ostream& out) {
  for (const auto& g : graphs) {
    ordered_json rec;
    rec["sentence_id"] = g.sentence_id;
    rec["text"] = g.text;
    rec["nodes"] = ordered_json::array();
    for (const auto& n : g.nodes) {
      rec["nodes"].push_back({{"id", n.id},
                              {"type", n.type},
                              {"start", n.start},
                              {"end", n.end},
                              {"surface", n.surface}});
    }
    rec["edges"] = ordered_json::array();
    for (const auto& e : g.edges) {
      rec["edges"].push_back({{"event_id", e.event_id},
                              {"relation", ToString(e.relation)},
                              {"argument_id", e.argument_id},
                              {"confidence", e.confidence}});
    }
    out << rec.dump() << '\n';
  }
}

std::vector<EventArgumentGraph> ReadGraphs(std::istream& in,
                                           const std::string& source_name) {
  std::vector<EventArgumentGraph> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (utf8::NormalizeWhitespace(line).empty()) continue;
    const std::string where = source_name + ":" + std::to_string(line_no);
    try {
      const json rec = json::parse(line);
      EventArgumentGraph g;
      g.sentence_id = rec.at("sentence_id").get<std::string>();
      g.text = rec.value("text", "");
      for (const auto& n : rec.at("nodes")) {
        EntityMention m;
        m.id = n.at("id").get<std::string>();
        m.sentence_id = g.sentence_id;
        m.type = n.at("type").get<std::string>();
        m.start = n.at("start").get<std::size_t>();
        m.end = n.at("end").get<std::size_t>();
        m.surface = n.value("surface", "");
        g.nodes.push_back(std::move(m));
      }
      for (const auto& e : rec.at("edges")) {
        auto relation = ParseRelation(e.at("relation").get<std::string>());
        if (!relation) throw ParseError(where, "unknown relation");
        g.edges.push_back({e.at("event_id").get<std::string>(), *relation,
                           e.at("argument_id").get<std::string>(),
                           e.at("confidence").get<double>()});
      }
      out.push_back(std::move(g));
    } catch (const json::exception& e) {
      throw ParseError(where, e.what());
    }
  }
  return out;
}

}  // namespace eae
