#include <set>
#include <sstream>

#include "doctest.h"
#include "error.hpp"
#include "pairgen.hpp"
#include "support.hpp"

namespace eae {
namespace {

using testing::BruteForcePairs;
using testing::Keys;

Corpus TenEventSentences() {
  std::vector<AnnotatedSentence> v;
  for (int i = 0; i < 10; ++i) {
    AnnotatedSentence s;
    s.id = "p" + std::to_string(i);
    s.text = "حدث" + std::to_string(i) + " في مدينة";
    const std::size_t len = 3 + std::to_string(i).size();
    s.entities = {{s.id + ":ev", s.id, s.text.substr(0, s.text.find(' ')), 0,
                   len, "EVENT"},
                  {s.id + ":loc", s.id, "مدينة", len + 4, len + 9, "GPE"}};
    s.relations = {{s.id + ":ev", Relation::kHasLocation, s.id + ":loc"}};
    v.push_back(std::move(s));
  }
  return Corpus({"ten", "", {}}, std::move(v));
}

TEST_SUITE("pairgen") {

TEST_CASE("seventy-thirty split of ten premises") {
  const Corpus c = TenEventSentences();
  const auto split = SplitPremises(c, {});
  CHECK(split.train.size() == 7);
  CHECK(split.test.size() == 3);
  std::set<std::string> ids;
  for (const auto& s : split.train) ids.insert(s.id);
  for (const auto& s : split.test) ids.insert(s.id);
  CHECK(ids.size() == 10);

  const auto again = SplitPremises(c, {});
  CHECK(again.train == split.train);
  // Corpus order inside each split.
  for (std::size_t i = 1; i < split.train.size(); ++i) {
    CHECK(split.train[i - 1].id < split.train[i].id);
  }
}

TEST_CASE("different seeds give different partitions") {
  const Corpus c = testing::SyntheticCorpus(3, 40);
  std::set<std::vector<std::string>> seen;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    std::vector<std::string> ids;
    for (const auto& s : SplitPremises(c, {0.7, seed, false}).train) {
      ids.push_back(s.id);
    }
    seen.insert(ids);
  }
  CHECK(seen.size() > 1);
}

TEST_CASE("test-only split") {
  const Corpus c = TenEventSentences();
  const auto split = SplitPremises(c, {0.7, 1, true});
  CHECK(split.train.empty());
  CHECK(split.test.size() == 10);
}

TEST_CASE("generation equals brute-force enumeration") {
  const auto reg = TemplateRegistry::Default();
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    const Corpus c = testing::SyntheticCorpus(seed, 30);
    for (Phase phase : {Phase::kTrain, Phase::kTest}) {
      auto pos = GeneratePositivePairs(c.sentences(), phase, reg);
      auto neg = GenerateNegativePairs(c.sentences(), phase, reg);
      for (const auto& p : pos) CHECK(p.label == Label::kPositive);
      for (const auto& p : neg) CHECK(p.label == Label::kNegative);
      pos.insert(pos.end(), neg.begin(), neg.end());
      CHECK(Keys(pos) == BruteForcePairs(c.sentences(), phase, reg));
    }
  }
}

TEST_CASE("every gold relation yields one positive per template") {
  const auto reg = TemplateRegistry::Default();
  const Corpus c = LoadCorpusFile(testing::FixturePath("mini.jsonl"),
                                  CorpusFormat::kJsonLines);
  CHECK(GeneratePositivePairs(c.sentences(), Phase::kTrain, reg).size() ==
        4 * c.relation_count());
  CHECK(GeneratePositivePairs(c.sentences(), Phase::kTest, reg).size() ==
        c.relation_count());
}

TEST_CASE("premise is the sentence and metadata is carried") {
  const auto reg = TemplateRegistry::Default();
  const Corpus c = LoadCorpusFile(testing::FixturePath("mini.jsonl"),
                                  CorpusFormat::kJsonLines);
  const auto* s = c.FindSentence("s07");
  const auto neg = GenerateNegativePairs({s, 1}, Phase::kTest, reg);
  // MONEY and CURR are outside the schema, and the only GPE is gold.
  CHECK(neg.empty());
  const auto pos = GeneratePositivePairs({s, 1}, Phase::kTest, reg);
  REQUIRE(pos.size() == 1);
  CHECK(pos[0].premise == s->text);
  CHECK(pos[0].hypothesis == "مصر مكان حدوث الفيضانات");
  CHECK(pos[0].split == Phase::kTest);
  CHECK(pos[0].relation == Relation::kHasLocation);
}

TEST_CASE("train positives over four plus test positives recovers the gold count") {
  const auto reg = TemplateRegistry::Default();
  const Corpus c = testing::SyntheticCorpus(21, 60);
  const auto stats = ComputeStats(c);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto d = BuildNliDataset(c, {0.7, seed, false}, reg).Stats();
    for (Relation r : kAllRelations) {
      const auto cell = [&](Phase p, Label l) {
        auto it = d.find({p, r, l});
        return it == d.end() ? std::size_t{0} : it->second;
      };
      const std::size_t train_pos = cell(Phase::kTrain, Label::kPositive);
      CHECK(train_pos % 4 == 0);
      CHECK(train_pos / 4 + cell(Phase::kTest, Label::kPositive) ==
            stats.relations.at(r));
    }
  }
}

TEST_CASE("dataset order and round trip") {
  const auto reg = TemplateRegistry::Default();
  const Corpus c = testing::SyntheticCorpus(5, 25);
  const auto d = BuildNliDataset(c, {}, reg);
  // train pos, train neg, test pos, test neg
  int block = 0;
  auto key = [](const NliPair& p) {
    return (p.split == Phase::kTest ? 2 : 0) +
           (p.label == Label::kNegative ? 1 : 0);
  };
  for (const auto& p : d.pairs) {
    CHECK(key(p) >= block);
    block = key(p);
  }
  std::stringstream a;
  WriteDataset(d, a);
  const auto back = ReadDataset(a, "mem");
  CHECK(back.pairs == d.pairs);
  std::stringstream b;
  WriteDataset(BuildNliDataset(c, {}, reg), b);
  CHECK(a.str() == b.str());
}

TEST_CASE("corpus without events gives an empty dataset") {
  AnnotatedSentence s;
  s.id = "n";
  s.text = "زار الرئيس عمان";
  s.entities = {{"n:p", "n", "الرئيس", 4, 10, "OCC"}};
  const Corpus c({"none", "", {}}, {s});
  CHECK(BuildNliDataset(c, {}, TemplateRegistry::Default()).pairs.empty());
  CHECK_THROWS_AS(SplitPremises(c, {}), Error);
}

TEST_CASE("malformed dataset lines are located") {
  std::istringstream in("{\"premise\": 1}\n");
  CHECK_THROWS_AS(ReadDataset(in, "d.jsonl"), ParseError);
}

}  // TEST_SUITE

}  // namespace
}  // namespace eae
