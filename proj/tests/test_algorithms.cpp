#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "scholargraph/algorithms.hpp"
#include "scholargraph/error.hpp"
#include "support.hpp"

using namespace scholargraph;
using sgtest::tiny_graph;
using V = std::vector<std::string>;

namespace {

V path_ids(const AuthorshipPath& p) {
  V out;
  for (const auto& n : p.nodes) out.push_back(n.value);
  return out;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::NoRoute;
}

}  // namespace

TEST_CASE("shortest authorship path on the fixture") {
  const auto p = shortest_authorship_path(tiny_graph(), "A1", "A3");
  REQUIRE(p);
  CHECK(path_ids(*p) == V{"A1", "W1", "A2", "W2", "A3"});
  CHECK(p->hops() == 4);
  CHECK(p->coauthor_steps() == 2);
  CHECK(p->nodes[1].kind == EntityKind::Work);

  const auto self = shortest_authorship_path(tiny_graph(), "A1", "A1");
  REQUIRE(self);
  CHECK(path_ids(*self) == V{"A1"});
  CHECK(self->hops() == 0);

  CHECK_FALSE(shortest_authorship_path(tiny_graph(), "A1", "A5"));
  CHECK(code_of([] { shortest_authorship_path(tiny_graph(), "A1", "A99"); }) ==
        ErrorCode::NotFound);
}

TEST_CASE("path agrees with the brute-force oracle on the fixture") {
  const auto& s = sgtest::tiny_snapshot();
  const auto bip = sgtest::oracle::bipartite_of(s.works, s.authors);
  for (const auto& a : s.authors) {
    for (const auto& b : s.authors) {
      const auto expected = sgtest::oracle::shortest_path(bip, a.id, b.id);
      const auto got = shortest_authorship_path(tiny_graph(), a.id, b.id);
      REQUIRE(expected.has_value() == got.has_value());
      if (got) CHECK(path_ids(*got) == expected->nodes);
    }
  }
}

TEST_CASE("path symmetry in hop count") {
  std::mt19937_64 rng(4);
  for (int round = 0; round < 20; ++round) {
    const auto s = sgtest::random_snapshot(rng, {15, 10, 2, 2, 0.0});
    const auto g = build_graph(s);
    const auto& a = s.authors[rng() % s.authors.size()].id;
    const auto& b = s.authors[rng() % s.authors.size()].id;
    const auto ab = shortest_authorship_path(g, a, b), ba = shortest_authorship_path(g, b, a);
    REQUIRE(ab.has_value() == ba.has_value());
    if (ab) CHECK(ab->hops() == ba->hops());
  }
}

TEST_CASE("coauthor network") {
  CHECK(coauthor_network(tiny_graph(), "A1") ==
        std::vector<Coauthor>{{"A2", 1, {"W1"}}, {"A4", 1, {"W6"}}});
  CHECK(coauthor_network(tiny_graph(), "A5").empty());
  CHECK(coauthor_network(tiny_graph(), "A4") ==
        std::vector<Coauthor>{{"A1", 1, {"W6"}}, {"A3", 1, {"W3"}}});
  CHECK(code_of([] { coauthor_network(tiny_graph(), "A9"); }) == ErrorCode::NotFound);
}

TEST_CASE("coauthor relation is symmetric with equal counts") {
  std::mt19937_64 rng(8);
  const auto g = build_graph(sgtest::random_snapshot(rng, {40, 12, 2, 2, 0.0}));
  for (const auto& a : g.authors()) {
    for (const auto& c : coauthor_network(g, a.id)) {
      const auto back = coauthor_network(g, c.author_id);
      const auto it = std::find_if(back.begin(), back.end(),
                                   [&](const Coauthor& x) { return x.author_id == a.id; });
      REQUIRE(it != back.end());
      CHECK(it->shared_work_count == c.shared_work_count);
      CHECK(it->shared_works == c.shared_works);
    }
  }
}

TEST_CASE("focus areas") {
  const auto f = focus_areas(tiny_graph(), "A1", 10);
  REQUIRE(f.size() == 2);
  CHECK(f[0].label == "graph");
  CHECK(f[0].score == doctest::Approx(1.6).epsilon(1e-12));
  CHECK(f[1].label == "ranking");
  CHECK(f[1].score == doctest::Approx(1.3).epsilon(1e-12));
  const auto f5 = focus_areas(tiny_graph(), "A5", 10);
  REQUIRE(f5.size() == 1);
  CHECK(f5[0] == LabelScore{"parsing", 0.9});
  CHECK(focus_areas(tiny_graph(), "A1", 1).size() == 1);
  CHECK(code_of([] { focus_areas(tiny_graph(), "A5", 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("focus areas agree with oracle on random corpora") {
  std::mt19937_64 rng(12);
  for (int round = 0; round < 20; ++round) {
    const auto s = sgtest::random_snapshot(rng, {30, 8, 2, 2, 0.0});
    const auto g = build_graph(s);
    const auto rec = sgtest::oracle::records_of(s);
    for (const auto& a : s.authors) {
      const auto got = focus_areas(g, a.id, 3);
      const auto want = sgtest::oracle::focus_areas(rec, a.id, 3);
      REQUIRE(got.size() == want.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].score == doctest::Approx(want[i].score).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("weighted jaccard") {
  CHECK(weighted_jaccard({{"graph", 0.9}, {"ranking", 0.7}}, {{"graph", 0.7}, {"ranking", 0.6}}) ==
        doctest::Approx(0.8125).epsilon(1e-12));
  CHECK(weighted_jaccard({}, {}) == 0.0);
  CHECK(weighted_jaccard({{"a", 0.5}}, {}) == 0.0);
  CHECK(weighted_jaccard({{"a", 0.5}}, {{"a", 0.5}}) == 1.0);
  CHECK(weighted_jaccard({{"b", 0.2}, {"a", 0.4}}, {{"a", 0.4}, {"b", 0.2}}) == 1.0);
}

TEST_CASE("set jaccard") {
  CHECK(set_jaccard({"a", "b"}, {"b", "c"}) == doctest::Approx(1.0 / 3.0));
  CHECK(set_jaccard({}, {}) == 0.0);
  CHECK(set_jaccard({"a", "a"}, {"a"}) == 1.0);
}

TEST_CASE("similar works") {
  const auto s = similar_works(tiny_graph(), "W1", 3);
  REQUIRE(s.size() == 3);
  CHECK(s[0].id == "W6");
  CHECK(s[0].score == doctest::Approx(0.8125).epsilon(1e-12));
  CHECK(similar_works(tiny_graph(), "W5", 3).empty());
  CHECK(code_of([] { similar_works(tiny_graph(), "W1", 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("similar works ranking equals brute force on the fixture") {
  const auto& works = sgtest::tiny_snapshot().works;
  const auto& g = tiny_graph();
  for (const auto& w : works) {
    std::vector<std::pair<double, std::string>> expected;
    for (const auto& x : works) {
      if (x.id == w.id) continue;
      const double sim = sgtest::oracle::work_similarity(w, x);
      if (sim > 0) expected.emplace_back(-sim, x.id);
    }
    std::sort(expected.begin(), expected.end());
    const auto got = similar_works(g, w.id, 10);
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].id == expected[i].second);
      CHECK(got[i].score == doctest::Approx(-expected[i].first).epsilon(1e-12));
    }
  }
}

TEST_CASE("concept-free works fall back to title tokens") {
  Snapshot s;
  s.authors.push_back({"A1", "X", std::nullopt, 0, 0, std::nullopt});
  Work a, b, c;
  a.id = "W1";
  a.title = "Graph Ranking";
  b.id = "W2";
  b.title = "Graph Search";
  c.id = "W3";
  c.title = "Unrelated";
  c.concepts = {{"graph", 1.0}};
  for (Work* w : {&a, &b, &c}) {
    w->publication_year = 2020;
    w->authors = {"A1"};
    s.works.push_back(*w);
  }
  const auto g = build_graph(s);
  CHECK(work_similarity(g, 0, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(work_similarity(g, 0, 2) == 0.0);
  const auto sim = similar_works(g, "W1", 5);
  REQUIRE(sim.size() == 1);
  CHECK(sim[0].id == "W2");
}

TEST_CASE("common connections") {
  CHECK(common_connections(tiny_graph(), "A1", "A3") == V{"A2", "A4"});
  CHECK(common_connections(tiny_graph(), "A1", "A5").empty());
  CHECK(code_of([] { common_connections(tiny_graph(), "A1", "A1"); }) == ErrorCode::SameAuthor);
  CHECK(code_of([] { common_connections(tiny_graph(), "A1", "A0"); }) == ErrorCode::NotFound);
}
