#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scholargraph/graph.hpp"

namespace scholargraph {

// Alternating [Author, Work, Author, ..., Author] chain over Authored edges.
struct AuthorshipPath {
  std::vector<EntityId> nodes;

  int hops() const { return nodes.empty() ? 0 : static_cast<int>(nodes.size()) - 1; }
  int coauthor_steps() const { return hops() / 2; }

  friend bool operator==(const AuthorshipPath&, const AuthorshipPath&) = default;
};

// Minimum-hop path; among equal-hop paths the lexicographically smallest id
// sequence. std::nullopt when disconnected. Throws Error(NotFound).
std::optional<AuthorshipPath> shortest_authorship_path(const KnowledgeGraph& graph,
                                                       std::string_view from,
                                                       std::string_view to);

struct Coauthor {
  std::string author_id;
  std::size_t shared_work_count = 0;
  std::vector<std::string> shared_works;  // sorted

  friend bool operator==(const Coauthor&, const Coauthor&) = default;
};

// Sorted by shared_work_count descending, then id.
std::vector<Coauthor> coauthor_network(const KnowledgeGraph& graph, std::string_view author);

struct LabelScore {
  std::string label;
  double score = 0.0;

  friend bool operator==(const LabelScore&, const LabelScore&) = default;
};

// Concept scores summed over the author's works; top k by aggregate
// descending, then label. Throws Error(InvalidArgument) when k < 1.
std::vector<LabelScore> focus_areas(const KnowledgeGraph& graph, std::string_view author, int k);

// Weighted Jaccard: sum of min over sum of max across the label union.
// Two empty vectors give 0. Inputs need not be sorted; labels must be unique.
double weighted_jaccard(const std::vector<LabelScore>& a, const std::vector<LabelScore>& b);

// Plain Jaccard over distinct tokens; 0 when both are empty.
double set_jaccard(std::vector<std::string> a, std::vector<std::string> b);

// Similarity between two works: weighted Jaccard over concepts, or title
// token Jaccard when both concept lists are empty.
double work_similarity(const KnowledgeGraph& graph, NodeIndex a, NodeIndex b);

struct ScoredId {
  std::string id;
  double score = 0.0;

  friend bool operator==(const ScoredId&, const ScoredId&) = default;
};

// Top k by similarity descending, then id; self and zero scores excluded.
std::vector<ScoredId> similar_works(const KnowledgeGraph& graph, std::string_view work, int k);

// Intersection of the two co-author sets, sorted. Throws Error(SameAuthor).
std::vector<std::string> common_connections(const KnowledgeGraph& graph, std::string_view a,
                                            std::string_view b);

}  // namespace scholargraph
