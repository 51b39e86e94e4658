#include "scholargraph/recommend.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "scholargraph/error.hpp"

namespace scholargraph {

std::vector<AuthorCitations> same_institution_researchers(const KnowledgeGraph& g,
                                                          std::string_view author) {
  const NodeIndex a = g.require(EntityKind::Author, author);
  std::vector<AuthorCitations> out;
  const auto inst = g.author_institution(a);
  if (inst.empty()) return out;
  std::vector<NodeIndex> peers;
  for (NodeIndex other : g.institution_authors(inst.front())) {
    if (other != a) peers.push_back(other);
  }
  std::stable_sort(peers.begin(), peers.end(), [&](NodeIndex x, NodeIndex y) {
    return g.authors()[x].cited_by_count > g.authors()[y].cited_by_count;
  });
  for (NodeIndex p : peers) out.push_back({g.authors()[p].id, g.authors()[p].cited_by_count});
  return out;
}

std::vector<LabelCount> trending_subtopics(const KnowledgeGraph& g, std::string_view author,
                                           int window_years, int k) {
  g.require(EntityKind::Author, author);
  if (window_years < 1) throw Error(ErrorCode::InvalidArgument, "window_years must be >= 1");
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");

  std::set<NodeIndex> focus;
  for (const auto& f : focus_areas(g, author, kTrendingFocusSize)) {
    focus.insert(*g.find_concept(f.label));
  }
  const int last = g.stats().max_year;
  const int first = last - window_years + 1;
  auto in_window = [&](NodeIndex w) {
    const int y = g.works()[w].publication_year;
    return y >= first && y <= last;
  };

  std::set<NodeIndex> candidates;
  for (NodeIndex f : focus) {
    for (NodeIndex w : g.concept_works(f)) {
      if (!in_window(w)) continue;
      for (NodeIndex c : g.work_concepts(w)) {
        if (!focus.contains(c)) candidates.insert(c);
      }
    }
  }

  std::vector<LabelCount> out;
  for (NodeIndex c : candidates) {
    std::size_t popularity = 0;
    for (NodeIndex w : g.concept_works(c)) {
      if (!in_window(w)) continue;
      const auto labels = g.work_concepts(w);
      const auto pos = std::lower_bound(labels.begin(), labels.end(), c) - labels.begin();
      if (g.work_concept_scores(w)[pos] > 0.0) ++popularity;
    }
    if (popularity > 0) out.push_back({g.concept_labels()[c], popularity});
  }
  // Candidates iterate in label order, so the stable sort breaks ties by label.
  std::stable_sort(out.begin(), out.end(),
                   [](const LabelCount& x, const LabelCount& y) { return x.count > y.count; });
  if (out.size() > static_cast<std::size_t>(k)) out.resize(k);
  return out;
}

std::vector<ScoredId> recommend_collaborators(const KnowledgeGraph& g, std::string_view author,
                                              int k) {
  const NodeIndex a = g.require(EntityKind::Author, author);
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  const auto own = focus_areas(g, author, kCollaboratorFocusSize);
  if (own.empty()) return {};

  std::set<NodeIndex> excluded{a};
  for (NodeIndex w : g.author_works(a)) {
    for (NodeIndex co : g.work_authors(w)) excluded.insert(co);
  }
  // A positive score needs a shared label, so only authors of works carrying
  // one of the author's focus labels can qualify.
  std::set<NodeIndex> candidates;
  for (const auto& f : own) {
    for (NodeIndex w : g.concept_works(*g.find_concept(f.label))) {
      for (NodeIndex other : g.work_authors(w)) {
        if (!excluded.contains(other)) candidates.insert(other);
      }
    }
  }

  std::vector<std::pair<double, NodeIndex>> scored;
  for (NodeIndex c : candidates) {
    const double s = weighted_jaccard(own, focus_areas(g, g.authors()[c].id, kCollaboratorFocusSize));
    if (s > 0.0) scored.emplace_back(s, c);
  }
  std::sort(scored.begin(), scored.end(), [&](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    const auto cx = g.authors()[x.second].cited_by_count;
    const auto cy = g.authors()[y.second].cited_by_count;
    if (cx != cy) return cx > cy;
    return x.second < y.second;
  });
  if (scored.size() > static_cast<std::size_t>(k)) scored.resize(k);
  std::vector<ScoredId> out;
  for (const auto& [s, c] : scored) out.push_back({g.authors()[c].id, s});
  return out;
}

}  // namespace scholargraph
