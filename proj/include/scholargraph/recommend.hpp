#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "scholargraph/algorithms.hpp"
#include "scholargraph/graph.hpp"

namespace scholargraph {

struct AuthorCitations {
  std::string author_id;
  std::int64_t cited_by_count = 0;

  friend bool operator==(const AuthorCitations&, const AuthorCitations&) = default;
};

// Other authors sharing the author's affiliation, by cited_by_count
// descending then id. Empty when the author has no resolvable affiliation.
std::vector<AuthorCitations> same_institution_researchers(const KnowledgeGraph& graph,
                                                          std::string_view author);

struct LabelCount {
  std::string label;
  std::size_t count = 0;

  friend bool operator==(const LabelCount&, const LabelCount&) = default;
};

inline constexpr int kTrendingFocusSize = 5;

// Labels co-occurring with the author's top focus areas in works published
// in the last `window_years` years of the corpus, ranked by the number of
// in-window works carrying them.
std::vector<LabelCount> trending_subtopics(const KnowledgeGraph& graph, std::string_view author,
                                           int window_years = 3, int k = 10);

inline constexpr int kCollaboratorFocusSize = 10;

// Non-co-authors ranked by weighted Jaccard of focus-area vectors, then
// cited_by_count descending, then id. Zero scores excluded.
std::vector<ScoredId> recommend_collaborators(const KnowledgeGraph& graph,
                                              std::string_view author, int k = 10);

}  // namespace scholargraph
