#include "corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "error.hpp"
#include "json.hpp"
#include "utf8.hpp"

namespace eae {

using nlohmann::json;
using nlohmann::ordered_json;

std::string ToString(const RelationTriple& triple) {
  return "(" + triple.event_id + ", " + std::string(ToString(triple.relation)) +
         ", " + triple.argument_id + ")";
}

const EntityMention* AnnotatedSentence::FindEntity(
    std::string_view entity_id) const {
  for (const auto& e : entities) {
    if (e.id == entity_id) return &e;
  }
  return nullptr;
}

bool AnnotatedSentence::HasEvent() const {
  return std::any_of(entities.begin(), entities.end(),
                     [](const EntityMention& e) { return e.IsEvent(); });
}

bool AnnotatedSentence::HasRelation(const RelationTriple& triple) const {
  return std::find(relations.begin(), relations.end(), triple) !=
         relations.end();
}

std::vector<std::string> ValidateSentences(
    std::span<const AnnotatedSentence> sentences) {
  std::vector<std::string> issues;
  std::unordered_set<std::string> sentence_ids;
  std::unordered_map<std::string, std::string> entity_owner;

  for (const auto& s : sentences) {
    const std::string where = "sentence '" + s.id + "'";
    if (s.id.empty()) issues.push_back("sentence with empty sentence_id");
    if (!sentence_ids.insert(s.id).second) {
      issues.push_back("duplicate sentence_id '" + s.id + "'");
    }
    std::size_t length = 0;
    try {
      length = utf8::Length(s.text);
      if (!utf8::IsWhitespaceNormalized(s.text)) {
        issues.push_back(where + ": text is not whitespace-normalized");
      }
    } catch (const Error& e) {
      issues.push_back(where + ": " + e.what());
      continue;
    }

    std::set<std::tuple<std::size_t, std::size_t, std::string>> spans;
    for (const auto& e : s.entities) {
      const std::string ent = where + " entity '" + e.id + "'";
      if (e.id.empty()) issues.push_back(where + ": entity with empty id");
      auto [it, fresh] = entity_owner.emplace(e.id, s.id);
      if (!fresh) {
        issues.push_back(ent + ": id already used in sentence '" + it->second +
                         "'");
      }
      if (e.sentence_id != s.id) {
        issues.push_back(ent + ": sentence_id '" + e.sentence_id +
                         "' does not match its sentence");
      }
      if (!IsCorpusEntityType(e.type)) {
        issues.push_back(ent + ": unknown entity type '" + e.type + "'");
      }
      if (e.start >= e.end || e.end > length) {
        issues.push_back(ent + ": span [" + std::to_string(e.start) + "," +
                         std::to_string(e.end) + ") outside sentence of length " +
                         std::to_string(length));
        continue;
      }
      if (utf8::Substr(s.text, e.start, e.end) != e.surface) {
        issues.push_back(ent + ": surface '" + e.surface +
                         "' does not match the text at its span");
      }
      if (!spans.emplace(e.start, e.end, e.type).second) {
        issues.push_back(ent + ": duplicate mention (same span and type)");
      }
    }

    std::set<RelationTriple> seen;
    for (const auto& r : s.relations) {
      const std::string rel = where + " relation " + ToString(r);
      const EntityMention* event = s.FindEntity(r.event_id);
      const EntityMention* arg = s.FindEntity(r.argument_id);
      if (event == nullptr) {
        issues.push_back(rel + ": event id not found in the sentence");
      } else if (!event->IsEvent()) {
        issues.push_back(rel + ": event id has type " + event->type);
      }
      if (arg == nullptr) {
        issues.push_back(rel + ": argument id not found in the sentence");
      } else if (!IsCompatible(r.relation, arg->type)) {
        issues.push_back(rel + ": argument type " + arg->type +
                         " is not compatible with " +
                         std::string(ToString(r.relation)));
      }
      if (!seen.insert(r).second) {
        issues.push_back(rel + ": duplicate triple");
      }
    }
  }
  return issues;
}

Corpus::Corpus(CorpusMetadata metadata, std::vector<AnnotatedSentence> sentences)
    : metadata_(std::move(metadata)), sentences_(std::move(sentences)) {
  auto issues = ValidateSentences(sentences_);
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

const AnnotatedSentence* Corpus::FindSentence(std::string_view id) const {
  for (const auto& s : sentences_) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

std::size_t Corpus::relation_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences_) n += s.relations.size();
  return n;
}

CorpusFormat ParseCorpusFormat(std::string_view name) {
  if (name == "jsonl" || name == "json") return CorpusFormat::kJsonLines;
  if (name == "bio" || name == "conll") return CorpusFormat::kBio;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown corpus format '" + std::string(name) + "'");
}

namespace {

template <typename T>
T Field(const json& obj, const char* key, const std::string& locator) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(locator, std::string("missing field '") + key + "'");
  }
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ParseError(locator, std::string("field '") + key +
                                  "' has the wrong type");
  }
}

AnnotatedSentence ParseSentenceRecord(const json& rec,
                                      const std::string& locator) {
  AnnotatedSentence s;
  s.id = Field<std::string>(rec, "sentence_id", locator);
  s.text = Field<std::string>(rec, "text", locator);

  if (auto it = rec.find("entities"); it != rec.end()) {
    if (!it->is_array()) throw ParseError(locator, "'entities' must be a list");
    for (const auto& e : *it) {
      EntityMention m;
      m.id = Field<std::string>(e, "id", locator);
      m.type = Field<std::string>(e, "type", locator);
      m.start = Field<std::size_t>(e, "start", locator);
      m.end = Field<std::size_t>(e, "end", locator);
      m.sentence_id = s.id;
      if (auto sf = e.find("surface"); sf != e.end() && sf->is_string()) {
        m.surface = sf->get<std::string>();
      } else {
        try {
          m.surface = utf8::Substr(s.text, m.start, m.end);
        } catch (const Error&) {
          // Left empty; validation reports the bad span.
        }
      }
      s.entities.push_back(std::move(m));
    }
  }
  if (auto it = rec.find("relations"); it != rec.end()) {
    if (!it->is_array()) {
      throw ParseError(locator, "'relations' must be a list");
    }
    for (const auto& r : *it) {
      RelationTriple t;
      t.event_id = Field<std::string>(r, "event_id", locator);
      const auto name = Field<std::string>(r, "relation", locator);
      auto rel = ParseRelation(name);
      if (!rel) throw ParseError(locator, "unknown relation '" + name + "'");
      t.relation = *rel;
      t.argument_id = Field<std::string>(r, "argument_id", locator);
      s.relations.push_back(std::move(t));
    }
  }
  return s;
}

Corpus LoadJsonLines(std::istream& in, const std::string& source_name) {
  CorpusMetadata metadata;
  metadata.name = source_name;
  std::vector<AnnotatedSentence> sentences;
  std::string line;
  std::size_t line_no = 0;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string locator = source_name + ":" + std::to_string(line_no);
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(locator, std::string("malformed record: ") + e.what());
    }
    if (!rec.is_object()) throw ParseError(locator, "record is not an object");
    if (auto it = rec.find("corpus"); it != rec.end()) {
      if (!header_allowed) {
        throw ParseError(locator, "corpus header must be the first record");
      }
      metadata.name = it->value("name", source_name);
      metadata.source = it->value("source", "");
      metadata.domains = it->value("domains", std::vector<std::string>{});
      header_allowed = false;
      continue;
    }
    header_allowed = false;
    sentences.push_back(ParseSentenceRecord(rec, locator));
  }
  return Corpus(std::move(metadata), std::move(sentences));
}

std::vector<std::string> SplitWhitespace(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream iss(s);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

struct OpenMention {
  std::string type;
  std::string id;
  std::size_t first_token;
  std::size_t last_token;
};

// Nested BIO: each token line is `token<TAB>tag tag ...`; a B tag may carry
// an entity id as `B-TYPE@id`. `# sentence_id = X` names the next sentence.
std::vector<AnnotatedSentence> ParseBio(std::istream& in,
                                        const std::string& source_name) {
  std::vector<AnnotatedSentence> sentences;
  std::vector<std::string> tokens;
  std::vector<OpenMention> open;
  std::vector<OpenMention> closed;
  std::string pending_id;
  std::size_t line_no = 0;

  auto flush = [&]() {
    closed.insert(closed.end(), open.begin(), open.end());
    open.clear();
    if (tokens.empty()) {
      closed.clear();
      return;
    }
    AnnotatedSentence s;
    s.id = pending_id.empty() ? "s" + std::to_string(sentences.size() + 1)
                              : pending_id;
    std::vector<std::size_t> token_start;
    std::size_t offset = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i > 0) {
        s.text += ' ';
        ++offset;
      }
      token_start.push_back(offset);
      s.text += tokens[i];
      offset += utf8::Length(tokens[i]);
    }
    std::sort(closed.begin(), closed.end(),
              [](const OpenMention& a, const OpenMention& b) {
                return std::tie(a.first_token, b.last_token) <
                       std::tie(b.first_token, a.last_token);
              });
    std::size_t auto_id = 0;
    for (const auto& m : closed) {
      EntityMention e;
      e.id = m.id.empty() ? s.id + ":T" + std::to_string(++auto_id) : m.id;
      e.sentence_id = s.id;
      e.type = m.type;
      e.start = token_start[m.first_token];
      e.end = token_start[m.last_token] + utf8::Length(tokens[m.last_token]);
      e.surface = utf8::Substr(s.text, e.start, e.end);
      s.entities.push_back(std::move(e));
    }
    sentences.push_back(std::move(s));
    tokens.clear();
    closed.clear();
    pending_id.clear();
  };

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string locator = source_name + ":" + std::to_string(line_no);
    if (line.find_first_not_of(" \t") == std::string::npos) {
      flush();
      continue;
    }
    if (line.rfind("#", 0) == 0) {
      const auto pos = line.find("sentence_id");
      if (pos != std::string::npos) {
        const auto eq = line.find('=', pos);
        if (eq == std::string::npos) {
          throw ParseError(locator, "sentence_id comment without '='");
        }
        if (!tokens.empty()) flush();
        pending_id = utf8::NormalizeWhitespace(line.substr(eq + 1));
      }
      continue;
    }
    const auto tab = line.find('\t');
    const std::string token =
        tab == std::string::npos ? line : line.substr(0, tab);
    const auto tags = tab == std::string::npos
                          ? std::vector<std::string>{}
                          : SplitWhitespace(line.substr(tab + 1));
    if (SplitWhitespace(token).size() != 1) {
      throw ParseError(locator, "token column must be a single token");
    }
    const std::size_t index = tokens.size();
    tokens.push_back(token);

    std::vector<OpenMention> still_open;
    std::vector<bool> continued(open.size(), false);
    std::vector<OpenMention> started;
    for (const auto& tag : tags) {
      if (tag == "O") continue;
      if (tag.size() < 3 || tag[1] != '-' || (tag[0] != 'B' && tag[0] != 'I')) {
        throw ParseError(locator, "malformed tag '" + tag + "'");
      }
      std::string type = tag.substr(2);
      std::string id;
      if (auto at = type.find('@'); at != std::string::npos) {
        id = type.substr(at + 1);
        type = type.substr(0, at);
      }
      if (tag[0] == 'B') {
        started.push_back({type, id, index, index});
        continue;
      }
      // I-TYPE continues the innermost open mention of that type.
      bool matched = false;
      for (std::size_t k = open.size(); k-- > 0;) {
        if (!continued[k] && open[k].type == type) {
          continued[k] = true;
          open[k].last_token = index;
          matched = true;
          break;
        }
      }
      if (!matched) {
        throw ParseError(locator, "I-" + type + " without an open mention");
      }
    }
    for (std::size_t k = 0; k < open.size(); ++k) {
      (continued[k] ? still_open : closed).push_back(open[k]);
    }
    still_open.insert(still_open.end(), started.begin(), started.end());
    open = std::move(still_open);
  }
  flush();
  return sentences;
}

void AttachSidecarRelations(std::vector<AnnotatedSentence>& sentences,
                            std::istream& in, const std::string& source_name) {
  std::unordered_map<std::string, AnnotatedSentence*> by_id;
  for (auto& s : sentences) by_id[s.id] = &s;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos ||
        line.rfind("#", 0) == 0) {
      continue;
    }
    const std::string locator = source_name + ":" + std::to_string(line_no);
    const auto cols = SplitWhitespace(line);
    if (cols.size() != 4) {
      throw ParseError(locator,
                       "expected 4 columns: sentence_id event_id relation "
                       "argument_id");
    }
    auto it = by_id.find(cols[0]);
    if (it == by_id.end()) {
      throw ParseError(locator, "unknown sentence_id '" + cols[0] + "'");
    }
    auto rel = ParseRelation(cols[2]);
    if (!rel) throw ParseError(locator, "unknown relation '" + cols[2] + "'");
    it->second->relations.push_back({cols[1], *rel, cols[3]});
  }
}

}  // namespace

Corpus LoadCorpus(std::istream& in, CorpusFormat format,
                  const std::string& source_name, std::istream* relations) {
  switch (format) {
    case CorpusFormat::kJsonLines:
      return LoadJsonLines(in, source_name);
    case CorpusFormat::kBio: {
      auto sentences = ParseBio(in, source_name);
      if (relations != nullptr) {
        AttachSidecarRelations(sentences, *relations,
                               source_name + ".relations");
      }
      CorpusMetadata metadata;
      metadata.name = source_name;
      return Corpus(std::move(metadata), std::move(sentences));
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unsupported corpus format");
}

Corpus LoadCorpusFile(const std::filesystem::path& path, CorpusFormat format,
                      const std::optional<std::filesystem::path>&
                          relations_path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open corpus '" + path.string() + "'");
  }
  std::ifstream rel_in;
  if (relations_path) {
    rel_in.open(*relations_path);
    if (!rel_in) {
      throw Error(ErrorCode::kIo, "cannot open relation sidecar '" +
                                      relations_path->string() + "'");
    }
  }
  return LoadCorpus(in, format, path.filename().string(),
                    relations_path ? &rel_in : nullptr);
}

void WriteCorpus(const Corpus& corpus, std::ostream& out) {
  ordered_json header;
  header["corpus"]["name"] = corpus.metadata().name;
  header["corpus"]["source"] = corpus.metadata().source;
  header["corpus"]["domains"] = corpus.metadata().domains;
  out << header.dump() << '\n';
  for (const auto& s : corpus.sentences()) {
    ordered_json rec;
    rec["sentence_id"] = s.id;
    rec["text"] = s.text;
    rec["entities"] = ordered_json::array();
    for (const auto& e : s.entities) {
      rec["entities"].push_back({{"id", e.id},
                                 {"type", e.type},
                                 {"start", e.start},
                                 {"end", e.end},
                                 {"surface", e.surface}});
    }
    rec["relations"] = ordered_json::array();
    for (const auto& r : s.relations) {
      rec["relations"].push_back({{"event_id", r.event_id},
                                  {"relation", ToString(r.relation)},
                                  {"argument_id", r.argument_id}});
    }
    out << rec.dump() << '\n';
  }
}

CorpusStats ComputeStats(const Corpus& corpus) {
  CorpusStats stats;
  for (Relation r : kAllRelations) stats.relations[r] = 0;
  for (const auto& s : corpus.sentences()) {
    ++stats.sentences;
    stats.entities += s.entities.size();
    for (const auto& r : s.relations) {
      ++stats.relations[r.relation];
      ++stats.relations_total;
    }
    for (const auto& e : s.entities) {
      if (!e.IsEvent()) continue;
      ++stats.events;
      std::size_t args = 0;
      std::size_t agents = 0;
      for (const auto& r : s.relations) {
        if (r.event_id != e.id) continue;
        ++args;
        if (r.relation == Relation::kHasAgent) ++agents;
      }
      if (args > 0) {
        ++stats.events_with_arguments;
      } else {
        ++stats.events_without_arguments;
      }
      if (args >= 2) ++stats.events_with_two_or_more_arguments;
      if (agents >= 2) {
        ++stats.events_with_multiple_agents;
        stats.agent_relations_in_multi_agent_events += agents;
      }
    }
  }
  return stats;
}

std::vector<AnnotatedSentence> EventSentences(const Corpus& corpus) {
  std::vector<AnnotatedSentence> out;
  for (const auto& s : corpus.sentences()) {
    if (s.HasEvent()) out.push_back(s);
  }
  return out;
}

}  // namespace eae
