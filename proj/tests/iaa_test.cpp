#include <cmath>

#include "corpus.hpp"
#include "doctest.h"
#include "error.hpp"
#include "iaa.hpp"
#include "support.hpp"

namespace eae {
namespace {

using doctest::Approx;

TEST_SUITE("iaa") {

TEST_CASE("set arithmetic on triples") {
  const std::vector<RelationTriple> a = {{"e1", Relation::kHasAgent, "p1"},
                                         {"e1", Relation::kHasAgent, "p2"},
                                         {"e1", Relation::kHasAgent, "p3"}};
  const std::vector<RelationTriple> b = {{"e1", Relation::kHasAgent, "p1"},
                                         {"e1", Relation::kHasAgent, "p2"},
                                         {"e1", Relation::kHasAgent, "p4"},
                                         {"e1", Relation::kHasAgent, "p4"}};
  const auto c = ConfusionCounts(a, b);
  CHECK(c.at(Relation::kHasAgent) == AgreementCounts{2, 1, 1});
  CHECK(c.at(Relation::kHasDate) == AgreementCounts{0, 0, 0});
  CHECK(F1FromCounts(c.at(Relation::kHasAgent)) == Approx(4.0 / 6.0));
  CHECK_THROWS_AS(F1FromCounts(c.at(Relation::kHasDate)), UndefinedMetricError);
}

TEST_CASE("unknown entity ids are rejected") {
  const std::vector<RelationTriple> a = {{"e1", Relation::kHasAgent, "ghost"}};
  CHECK_THROWS_AS(ConfusionCounts(a, a, {"e1", "p1"}), ValidationError);
}

TEST_CASE("kappa of a chance-level table is zero") {
  const std::vector<std::string> a = {"x", "x", "y", "y"};
  const std::vector<std::string> b = {"x", "y", "x", "y"};
  const auto k = CohenKappa(a, b);
  CHECK(k.observed == Approx(0.5));
  CHECK(k.expected == Approx(0.5));
  CHECK(k.kappa == Approx(0.0));
}

TEST_CASE("kappa by hand") {
  // Po = 4/5, Pe = (3*2 + 2*3) / 25.
  const std::vector<std::string> a = {"1", "1", "1", "0", "0"};
  const std::vector<std::string> b = {"1", "1", "0", "0", "0"};
  CHECK(CohenKappa(a, b).kappa == Approx((0.8 - 0.48) / 0.52).epsilon(1e-12));
  // Counts form: N = 10, Po = 0.8, Pe = (3*3 + 7*7) / 100.
  const auto k = KappaFromCounts({2, 1, 1}, 6);
  CHECK(k.n == 10);
  CHECK(k.kappa == Approx(0.22 / 0.42).epsilon(1e-12));
}

TEST_CASE("kappa preconditions") {
  const std::vector<std::string> one = {"x"};
  const std::vector<std::string> two = {"x", "y"};
  const std::vector<std::string> none;
  CHECK_THROWS_AS(CohenKappa(one, two), Error);
  CHECK_THROWS_AS(CohenKappa(none, none), Error);
  // Both annotators constant: Pe = 1.
  const std::vector<std::string> same = {"x", "x"};
  CHECK_THROWS_AS(CohenKappa(same, same), UndefinedMetricError);
}

TEST_CASE("perfect agreement") {
  const std::vector<std::string> a = {"x", "y", "z", "x"};
  CHECK(CohenKappa(a, a).kappa == Approx(1.0));
}

TEST_CASE("half-up rounding") {
  CHECK(RoundHalfUp(0.125, 2) == Approx(0.13));
  CHECK(RoundHalfUp(0.9355, 2) == Approx(0.94));
  CHECK(RoundHalfUp(82.2333, 2) == Approx(82.23));
  CHECK(RoundHalfUp(-0.125, 2) == Approx(-0.13));
}

TEST_CASE("published agreement counts") {
  const std::map<Relation, AgreementCounts> counts = {
      {Relation::kHasAgent, {37, 10, 10}},
      {Relation::kHasLocation, {29, 2, 2}},
      {Relation::kHasDate, {43, 2, 6}}};
  const auto r = BuildIaaReport(counts, {});
  REQUIRE(r.rows.size() == 3);
  CHECK(*r.rows[0].f1 == Approx(74.0 / 94.0));
  CHECK(*r.rows[1].f1 == Approx(58.0 / 62.0));
  CHECK(*r.rows[2].f1 == Approx(86.0 / 94.0));
  CHECK(r.overall == AgreementCounts{109, 14, 18});
  CHECK(*r.micro_f1 == Approx(218.0 / 250.0));
  CHECK_FALSE(r.macro_kappa.has_value());
  CHECK_FALSE(r.rows[0].kappa.has_value());
}

TEST_CASE("macro kappa is the plain mean of the rows") {
  const std::map<Relation, AgreementCounts> counts = {
      {Relation::kHasAgent, {2, 1, 1}},
      {Relation::kHasLocation, {5, 0, 1}},
      {Relation::kHasDate, {3, 0, 0}}};
  const std::map<Relation, std::size_t> tn = {{Relation::kHasAgent, 6},
                                              {Relation::kHasLocation, 4},
                                              {Relation::kHasDate, 7}};
  const auto r = BuildIaaReport(counts, tn);
  double sum = 0;
  for (const auto& row : r.rows) sum += *row.kappa;
  CHECK(*r.macro_kappa == Approx(sum / 3));
  CHECK(*r.rows[2].kappa == Approx(1.0));
  CHECK(RoundHalfUp((67.85 + 91.70 + 87.15) / 3, 2) == Approx(82.23));
}

TEST_CASE("two annotated corpora") {
  const Corpus a = LoadCorpusFile(testing::FixturePath("mini.jsonl"),
                                  CorpusFormat::kJsonLines);
  const Corpus b = LoadCorpusFile(testing::FixturePath("mini_b.jsonl"),
                                  CorpusFormat::kJsonLines);
  const auto r = BuildIaaReport(a, b);
  CHECK(r.rows[0].counts == AgreementCounts{3, 1, 0});
  CHECK(r.rows[1].counts == AgreementCounts{6, 0, 0});
  CHECK(r.rows[2].counts == AgreementCounts{4, 0, 1});
  // Every location candidate is asserted by both, so chance agreement is 1.
  CHECK_FALSE(r.rows[1].kappa.has_value());
  CHECK(*r.rows[1].f1 == Approx(1.0));
  REQUIRE(r.rows[0].kappa.has_value());
  CHECK(*r.rows[0].kappa < 1.0);
  // Universe per relation is every compatible (event, entity) pair.
  const auto universe = CandidateUniverse(a);
  const std::size_t n = universe.at(Relation::kHasAgent).size();
  CHECK(*r.rows[0].tn == n - 4);
}

TEST_CASE("corpora over different sentences are rejected") {
  const Corpus a = LoadCorpusFile(testing::FixturePath("mini.jsonl"),
                                  CorpusFormat::kJsonLines);
  const Corpus syn = testing::SyntheticCorpus(1, 3);
  CHECK_THROWS_AS(BuildIaaReport(a, syn), ValidationError);
}

}  // TEST_SUITE

}  // namespace
}  // namespace eae
