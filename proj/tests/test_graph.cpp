#include "doctest.h"

#include <algorithm>
#include <random>

#include "scholargraph/error.hpp"
#include "scholargraph/graph.hpp"
#include "support.hpp"

using namespace scholargraph;
using sgtest::tiny_graph;

namespace {

std::vector<EntityId> ids(EntityKind k, std::initializer_list<const char*> values) {
  std::vector<EntityId> out;
  for (const char* v : values) out.push_back({k, v});
  return out;
}

void check_rows_sorted_unique(const KnowledgeGraph& g, EntityKind kind,
                              std::span<const NodeIndex> (KnowledgeGraph::*row)(NodeIndex) const) {
  for (NodeIndex i = 0; i < g.count(kind); ++i) {
    const auto r = (g.*row)(i);
    CHECK(std::adjacent_find(r.begin(), r.end(), std::greater_equal<>()) == r.end());
  }
}

// Every edge u->v in `fwd` appears as v->u in `rev` and vice versa.
void check_mirrored(const KnowledgeGraph& g, EntityKind from_kind, EntityKind to_kind,
                    std::span<const NodeIndex> (KnowledgeGraph::*fwd)(NodeIndex) const,
                    std::span<const NodeIndex> (KnowledgeGraph::*rev)(NodeIndex) const) {
  std::size_t forward_edges = 0, reverse_edges = 0;
  for (NodeIndex u = 0; u < g.count(from_kind); ++u) {
    for (NodeIndex v : (g.*fwd)(u)) {
      const auto back = (g.*rev)(v);
      CHECK(std::binary_search(back.begin(), back.end(), u));
      ++forward_edges;
    }
  }
  for (NodeIndex v = 0; v < g.count(to_kind); ++v) reverse_edges += (g.*rev)(v).size();
  CHECK(forward_edges == reverse_edges);
}

void check_invariants(const KnowledgeGraph& g) {
  check_rows_sorted_unique(g, EntityKind::Work, &KnowledgeGraph::work_authors);
  check_rows_sorted_unique(g, EntityKind::Author, &KnowledgeGraph::author_works);
  check_rows_sorted_unique(g, EntityKind::Work, &KnowledgeGraph::cites_out);
  check_rows_sorted_unique(g, EntityKind::Work, &KnowledgeGraph::cites_in);
  check_rows_sorted_unique(g, EntityKind::Work, &KnowledgeGraph::work_concepts);
  check_rows_sorted_unique(g, EntityKind::Institution, &KnowledgeGraph::institution_authors);
  check_rows_sorted_unique(g, EntityKind::Venue, &KnowledgeGraph::venue_works);
  check_mirrored(g, EntityKind::Work, EntityKind::Author, &KnowledgeGraph::work_authors,
                 &KnowledgeGraph::author_works);
  check_mirrored(g, EntityKind::Work, EntityKind::Venue, &KnowledgeGraph::work_venue,
                 &KnowledgeGraph::venue_works);
  check_mirrored(g, EntityKind::Author, EntityKind::Institution,
                 &KnowledgeGraph::author_institution, &KnowledgeGraph::institution_authors);
  check_mirrored(g, EntityKind::Work, EntityKind::Work, &KnowledgeGraph::cites_out,
                 &KnowledgeGraph::cites_in);
  for (NodeIndex a = 0; a < g.count(EntityKind::Author); ++a) {
    CHECK(g.authors()[a].works_count == static_cast<std::int64_t>(g.author_works(a).size()));
  }
  for (NodeIndex c = 0; c < g.concept_labels().size(); ++c) {
    for (NodeIndex w : g.concept_works(c)) {
      const auto cs = g.work_concepts(w);
      CHECK(std::binary_search(cs.begin(), cs.end(), c));
    }
  }
}

}  // namespace

TEST_CASE("tiny graph build stats") {
  const auto& st = tiny_graph().stats();
  CHECK(st.nodes == 15);
  CHECK(st.edges_of(EdgeKind::Authored) == 10);
  CHECK(st.edges_of(EdgeKind::PublishedIn) == 6);
  CHECK(st.edges_of(EdgeKind::AffiliatedWith) == 5);
  // W1->W2, W3->W1, W4->W2, W4->W3, W6->W1
  CHECK(st.edges_of(EdgeKind::Cites) == 5);
  CHECK(st.edges_of(EdgeKind::HasConcept) == 11);
  CHECK(st.dropped_dangling == 0);
  CHECK(st.max_year == 2023);
}

TEST_CASE("author works_count is recomputed from authorship") {
  const auto& g = tiny_graph();
  CHECK(g.authors()[*g.find(EntityKind::Author, "A4")].works_count == 3);
  CHECK(g.authors()[*g.find(EntityKind::Author, "A5")].works_count == 1);
}

TEST_CASE("dangling reference edge is dropped and counted") {
  Snapshot s = sgtest::tiny_snapshot();
  s.works[4].referenced_works.push_back("W99");
  const KnowledgeGraph g = build_graph(s);
  CHECK(g.stats().edges_of(EdgeKind::Cites) == 5);
  CHECK(g.stats().dropped_dangling == 1);
  CHECK(g.to_snapshot().works[4].referenced_works.back() == "W99");
}

TEST_CASE("get_entity") {
  const auto& g = tiny_graph();
  const auto a1 = get_entity(g, {EntityKind::Author, "A1"});
  CHECK(std::get<Author>(a1).display_name == "Alice Müller");
  CHECK_THROWS_AS(get_entity(g, {EntityKind::Work, "W9"}), Error);
  try {
    get_entity(g, {EntityKind::Work, "W9"});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotFound);
  }
}

TEST_CASE("neighbors") {
  const auto& g = tiny_graph();
  CHECK(neighbors(g, {EntityKind::Work, "W1"}, EdgeKind::Cites, Direction::In) ==
        ids(EntityKind::Work, {"W3", "W6"}));
  CHECK(neighbors(g, {EntityKind::Work, "W1"}, EdgeKind::Cites, Direction::Out) ==
        ids(EntityKind::Work, {"W2"}));
  CHECK(neighbors(g, {EntityKind::Author, "A5"}, EdgeKind::Authored, Direction::Out) ==
        ids(EntityKind::Work, {"W5"}));
  CHECK(neighbors(g, {EntityKind::Work, "W5"}, EdgeKind::Cites, Direction::In).empty());
  CHECK(neighbors(g, {EntityKind::Work, "W1"}, EdgeKind::Authored, Direction::In) ==
        ids(EntityKind::Author, {"A1", "A2"}));
  CHECK(neighbors(g, {EntityKind::Institution, "I2"}, EdgeKind::AffiliatedWith, Direction::In) ==
        ids(EntityKind::Author, {"A3", "A4", "A5"}));
  CHECK(neighbors(g, {EntityKind::Venue, "V1"}, EdgeKind::PublishedIn, Direction::In) ==
        ids(EntityKind::Work, {"W2", "W4", "W5"}));
  CHECK_THROWS_AS(neighbors(g, {EntityKind::Work, "W1"}, EdgeKind::HasConcept, Direction::Out),
                  Error);
  CHECK_THROWS_AS(neighbors(g, {EntityKind::Work, "W9"}, EdgeKind::Cites, Direction::In), Error);
}

TEST_CASE("concept postings") {
  const auto& g = tiny_graph();
  CHECK(concept_postings(g, "graph") == std::vector<std::string>{"W1", "W3", "W6"});
  CHECK(concept_postings(g, "embeddings") == std::vector<std::string>{"W3", "W4"});
  CHECK(concept_postings(g, "absent").empty());
}

TEST_CASE("institution aggregates") {
  const auto& g = tiny_graph();
  const auto i1 = *g.find(EntityKind::Institution, "I1");
  const auto i2 = *g.find(EntityKind::Institution, "I2");
  // I1: A1, A2 -> W1, W2, W6
  CHECK(g.institution_works_count(i1) == 3);
  CHECK(g.institution_cited_by_count(i1) == 36);
  // I2: A3, A4, A5 -> W2, W3, W4, W5, W6
  CHECK(g.institution_works_count(i2) == 5);
  CHECK(g.institution_cited_by_count(i2) == 34);
}

TEST_CASE("adjacency invariants on fixture and random graphs") {
  check_invariants(tiny_graph());
  std::mt19937_64 rng(5);
  for (int round = 0; round < 25; ++round) {
    sgtest::CorpusShape shape;
    shape.works = 1 + rng() % 40;
    shape.authors = 1 + rng() % 20;
    shape.dangling_rate = 0.1;
    check_invariants(build_graph(sgtest::random_snapshot(rng, shape)));
  }
}

TEST_CASE("build is deterministic and to_snapshot round-trips") {
  std::mt19937_64 rng(9);
  const Snapshot s = sgtest::random_snapshot(rng, {});
  const KnowledgeGraph a = build_graph(s), b = build_graph(s);
  CHECK(a == b);
  CHECK(build_graph(a.to_snapshot()) == a);
}

TEST_CASE("empty graph") {
  const KnowledgeGraph g = build_graph(Snapshot{});
  CHECK(g.stats().nodes == 0);
  CHECK(g.stats().edge_total() == 0);
  sgtest::TempDir dir;
  persist_graph(g, dir / "empty.sgkg");
  CHECK(load_graph(dir / "empty.sgkg") == g);
}

TEST_CASE("persist and load") {
  sgtest::TempDir dir;
  const auto p1 = dir / "a.sgkg", p2 = dir / "b.sgkg";
  const auto bytes = persist_graph(tiny_graph(), p1);
  persist_graph(tiny_graph(), p2);
  CHECK(bytes == std::filesystem::file_size(p1));
  CHECK(sgtest::read_file(p1) == sgtest::read_file(p2));
  const KnowledgeGraph back = load_graph(p1);
  CHECK(back == tiny_graph());
  CHECK(back.find(EntityKind::Author, "A3") == tiny_graph().find(EntityKind::Author, "A3"));
  CHECK(back.find_concept("ranking").has_value());
}

TEST_CASE("load errors") {
  sgtest::TempDir dir;
  const auto path = dir / "g.sgkg";
  persist_graph(tiny_graph(), path);
  const std::string good = sgtest::read_file(path);
  auto code_for = [&](const std::string& content) {
    sgtest::write_file(path, content);
    try {
      load_graph(path);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::NoRoute;
  };
  std::string bad_magic = good;
  bad_magic[0] = 'X';
  CHECK(code_for(bad_magic) == ErrorCode::VersionMismatch);
  std::string bad_version = good;
  bad_version[4] = 9;
  CHECK(code_for(bad_version) == ErrorCode::VersionMismatch);
  CHECK(code_for(good.substr(0, good.size() / 2)) == ErrorCode::CorruptSnapshot);
  std::string flipped = good;
  flipped[good.size() / 2] ^= 0x5a;
  CHECK(code_for(flipped) == ErrorCode::CorruptSnapshot);
  CHECK(code_for("") == ErrorCode::VersionMismatch);
  std::filesystem::remove(path);
  try {
    load_graph(path);
    FAIL("expected UnreadableFile");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnreadableFile);
  }
}
