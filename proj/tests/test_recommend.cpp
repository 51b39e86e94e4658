#include "doctest.h"

#include <random>
#include <set>

#include "oracles.hpp"
#include "scholargraph/algorithms.hpp"
#include "scholargraph/error.hpp"
#include "scholargraph/recommend.hpp"
#include "support.hpp"

using namespace scholargraph;
using sgtest::tiny_graph;

TEST_CASE("same institution researchers") {
  CHECK(same_institution_researchers(tiny_graph(), "A1") ==
        std::vector<AuthorCitations>{{"A2", 35}});
  CHECK(same_institution_researchers(tiny_graph(), "A3") ==
        std::vector<AuthorCitations>{{"A4", 6}, {"A5", 3}});
  Snapshot s = sgtest::tiny_snapshot();
  s.authors.push_back({"A6", "Loner", std::nullopt, 0, 0, std::nullopt});
  CHECK(same_institution_researchers(build_graph(s), "A6").empty());
  CHECK_THROWS_AS(same_institution_researchers(tiny_graph(), "A9"), Error);
}

TEST_CASE("trending subtopics") {
  CHECK(trending_subtopics(tiny_graph(), "A1", 3, 10) == std::vector<LabelCount>{{"embeddings", 2}});
  CHECK(trending_subtopics(tiny_graph(), "A5", 3, 10).empty());
  // Window of five years reaches W5 (2019) but parsing co-occurs with nothing.
  CHECK(trending_subtopics(tiny_graph(), "A5", 5, 10).empty());
  // A wide window lets W2 contribute "neural".
  CHECK(trending_subtopics(tiny_graph(), "A1", 4, 10) ==
        std::vector<LabelCount>{{"embeddings", 2}, {"neural", 1}});
  CHECK_THROWS_AS(trending_subtopics(tiny_graph(), "A1", 0, 10), Error);
  CHECK_THROWS_AS(trending_subtopics(build_graph(Snapshot{}), "A1"), Error);
}

TEST_CASE("recommend collaborators") {
  const auto r = recommend_collaborators(tiny_graph(), "A1", 10);
  REQUIRE(r.size() == 1);
  CHECK(r[0].id == "A3");
  // A1 {graph 1.6, ranking 1.3}; A3 {graph .8, ranking .8, neural .6, embeddings .9}
  CHECK(r[0].score == doctest::Approx(1.6 / 4.4).epsilon(1e-9));
  CHECK(recommend_collaborators(tiny_graph(), "A1", 1).size() == 1);
  Snapshot s = sgtest::tiny_snapshot();
  s.authors.push_back({"A6", "Newcomer", "I1", 0, 0, std::nullopt});
  CHECK(recommend_collaborators(build_graph(s), "A6").empty());
  CHECK_THROWS_AS(recommend_collaborators(tiny_graph(), "A1", 0), Error);
}

TEST_CASE("recommendation properties on random corpora") {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 25; ++round) {
    const auto s = sgtest::random_snapshot(rng, {30, 12, 3, 2, 0.0});
    const auto g = build_graph(s);
    const auto rec = sgtest::oracle::records_of(s);
    for (const auto& a : s.authors) {
      // same_institution symmetry
      for (const auto& other : same_institution_researchers(g, a.id)) {
        const auto back = same_institution_researchers(g, other.author_id);
        CHECK(std::any_of(back.begin(), back.end(),
                          [&](const AuthorCitations& x) { return x.author_id == a.id; }));
      }
      // trending never returns a top-5 focus label
      std::set<std::string> focus;
      for (const auto& f : focus_areas(g, a.id, 5)) focus.insert(f.label);
      for (const auto& t : trending_subtopics(g, a.id)) CHECK(focus.count(t.label) == 0);
      // collaborators: never self or co-author; equals brute force
      const auto co = sgtest::oracle::coauthors(rec, a.id);
      const auto got = recommend_collaborators(g, a.id, 5);
      const auto want = sgtest::oracle::collaborators(rec, a.id, 5);
      for (const auto& x : got) {
        CHECK(x.id != a.id);
        CHECK(co.count(x.id) == 0);
      }
      REQUIRE(got.size() == want.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].score == doctest::Approx(want[i].score).epsilon(1e-9));
        if (i + 1 < want.size() && want[i].score - want[i + 1].score > 1e-9 &&
            (i == 0 || want[i - 1].score - want[i].score > 1e-9)) {
          CHECK(got[i].id == want[i].id);
        }
      }
    }
  }
}
