#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "scholargraph/domain.hpp"
#include "scholargraph/ingest.hpp"

namespace scholargraph {

enum class EdgeKind : std::uint8_t { Authored, PublishedIn, AffiliatedWith, Cites, HasConcept };
enum class Direction : std::uint8_t { Out, In };

std::string_view edge_kind_name(EdgeKind kind);

// Dense position of an entity within its kind. Entities of a kind are stored
// sorted by id, so index order is lexicographic id order.
using NodeIndex = std::uint32_t;

// Compressed sparse rows; every row sorted ascending and duplicate-free.
struct Adjacency {
  std::vector<std::uint32_t> offsets{0};
  std::vector<NodeIndex> targets;

  std::span<const NodeIndex> row(NodeIndex i) const {
    return {targets.data() + offsets[i], targets.data() + offsets[i + 1]};
  }
  std::size_t rows() const { return offsets.size() - 1; }
  std::size_t edge_count() const { return targets.size(); }

  friend bool operator==(const Adjacency&, const Adjacency&) = default;
};

struct BuildStats {
  std::size_t nodes = 0;  // works + authors + institutions + venues
  std::array<std::size_t, 5> edges{};  // per EdgeKind, each edge counted once
  std::size_t dropped_dangling = 0;
  int max_year = 0;

  std::size_t edge_total() const;
  std::size_t edges_of(EdgeKind k) const { return edges[static_cast<std::size_t>(k)]; }

  friend bool operator==(const BuildStats&, const BuildStats&) = default;
};

class KnowledgeGraph;

KnowledgeGraph build_graph(const Snapshot& snapshot);
std::uint64_t persist_graph(const KnowledgeGraph& graph, const std::filesystem::path& path);
KnowledgeGraph load_graph(const std::filesystem::path& path);

// Immutable after construction.
class KnowledgeGraph {
 public:
  KnowledgeGraph() = default;

  const std::vector<Work>& works() const { return works_; }
  const std::vector<Author>& authors() const { return authors_; }
  const std::vector<Institution>& institutions() const { return institutions_; }
  const std::vector<Venue>& venues() const { return venues_; }
  const std::vector<std::string>& concept_labels() const { return concept_labels_; }

  std::optional<NodeIndex> find(EntityKind kind, std::string_view id) const;
  // Throws Error(NotFound).
  NodeIndex require(EntityKind kind, std::string_view id) const;
  std::optional<NodeIndex> find_concept(std::string_view label) const;
  const std::string& id(EntityKind kind, NodeIndex i) const;
  std::size_t count(EntityKind kind) const;

  std::span<const NodeIndex> work_authors(NodeIndex w) const { return work_authors_.row(w); }
  std::span<const NodeIndex> author_works(NodeIndex a) const { return author_works_.row(a); }
  std::span<const NodeIndex> work_venue(NodeIndex w) const { return work_venue_.row(w); }
  std::span<const NodeIndex> venue_works(NodeIndex v) const { return venue_works_.row(v); }
  std::span<const NodeIndex> author_institution(NodeIndex a) const {
    return author_institution_.row(a);
  }
  std::span<const NodeIndex> institution_authors(NodeIndex i) const {
    return institution_authors_.row(i);
  }
  std::span<const NodeIndex> cites_out(NodeIndex w) const { return cites_out_.row(w); }
  std::span<const NodeIndex> cites_in(NodeIndex w) const { return cites_in_.row(w); }
  // Concept label indices of a work, ascending; scores aligned with them.
  std::span<const NodeIndex> work_concepts(NodeIndex w) const { return work_concepts_.row(w); }
  std::span<const double> work_concept_scores(NodeIndex w) const {
    return {work_concept_scores_.data() + work_concepts_.offsets[w],
            work_concept_scores_.data() + work_concepts_.offsets[w + 1]};
  }
  // Concept postings: works carrying the label, ascending.
  std::span<const NodeIndex> concept_works(NodeIndex c) const { return concept_works_.row(c); }

  // Aggregates over affiliated authors' works (distinct works).
  std::int64_t institution_works_count(NodeIndex i) const { return institution_works_[i]; }
  std::int64_t institution_cited_by_count(NodeIndex i) const { return institution_cited_[i]; }

  const BuildStats& stats() const { return stats_; }

  // Entity records back as a snapshot (dangling references retained).
  Snapshot to_snapshot() const;

  friend bool operator==(const KnowledgeGraph& a, const KnowledgeGraph& b);

 private:
  friend KnowledgeGraph build_graph(const Snapshot& snapshot);
  friend std::uint64_t persist_graph(const KnowledgeGraph& graph,
                                     const std::filesystem::path& path);
  friend KnowledgeGraph load_graph(const std::filesystem::path& path);

  void rebuild_lookup();

  std::vector<Work> works_;
  std::vector<Author> authors_;
  std::vector<Institution> institutions_;
  std::vector<Venue> venues_;
  std::vector<std::string> concept_labels_;

  Adjacency work_authors_, author_works_;
  Adjacency work_venue_, venue_works_;
  Adjacency author_institution_, institution_authors_;
  Adjacency cites_out_, cites_in_;
  Adjacency work_concepts_, concept_works_;
  std::vector<double> work_concept_scores_;

  std::vector<std::int64_t> institution_works_;
  std::vector<std::int64_t> institution_cited_;
  BuildStats stats_;

  // Derived lookups; not persisted.
  std::array<std::unordered_map<std::string, NodeIndex>, 4> lookup_;
  std::unordered_map<std::string, NodeIndex> concept_lookup_;
};

// Id-level accessors over the graph.
EntityRecord get_entity(const KnowledgeGraph& graph, const EntityId& id);

// Sorted neighbor ids. For bidirectional kinds the direction is ignored;
// Cites/Out is references, Cites/In is citing works. HasConcept neighbors
// are concept labels, not entities: use concept_postings/work_concepts.
std::vector<EntityId> neighbors(const KnowledgeGraph& graph, const EntityId& id, EdgeKind edge,
                                Direction direction);

// Works carrying `label`, sorted by id. Empty when the label is unknown.
std::vector<std::string> concept_postings(const KnowledgeGraph& graph, std::string_view label);

inline constexpr char kGraphMagic[4] = {'S', 'G', 'K', 'G'};
inline constexpr std::uint32_t kGraphFormatVersion = 1;

}  // namespace scholargraph
