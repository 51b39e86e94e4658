#include "scholargraph/algorithms.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "scholargraph/error.hpp"
#include "scholargraph/text.hpp"

namespace scholargraph {
namespace {

constexpr NodeIndex kNone = static_cast<NodeIndex>(-1);

void require_k(int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
}

// Co-authors of `a` as (author index -> shared work indices), excluding `a`.
std::map<NodeIndex, std::vector<NodeIndex>> coauthor_map(const KnowledgeGraph& g, NodeIndex a) {
  std::map<NodeIndex, std::vector<NodeIndex>> out;
  for (NodeIndex w : g.author_works(a)) {
    for (NodeIndex other : g.work_authors(w)) {
      if (other != a) out[other].push_back(w);
    }
  }
  return out;
}

}  // namespace

std::optional<AuthorshipPath> shortest_authorship_path(const KnowledgeGraph& g,
                                                       std::string_view from,
                                                       std::string_view to) {
  const NodeIndex src = g.require(EntityKind::Author, from);
  const NodeIndex dst = g.require(EntityKind::Author, to);
  if (src == dst) return AuthorshipPath{{{EntityKind::Author, g.authors()[src].id}}};

  // Parents recorded on first reach; rows are id-sorted, so FIFO expansion
  // reaches every node first along its lexicographically smallest path.
  std::vector<NodeIndex> author_parent(g.authors().size(), kNone);  // via work
  std::vector<NodeIndex> work_parent(g.works().size(), kNone);  // via author
  std::vector<bool> author_seen(g.authors().size(), false);
  author_seen[src] = true;

  std::deque<std::pair<bool, NodeIndex>> queue;  // (is_work, index)
  queue.emplace_back(false, src);
  bool reached = false;
  while (!queue.empty() && !reached) {
    const auto [is_work, node] = queue.front();
    queue.pop_front();
    if (!is_work) {
      for (NodeIndex w : g.author_works(node)) {
        if (work_parent[w] != kNone) continue;
        work_parent[w] = node;
        queue.emplace_back(true, w);
      }
    } else {
      for (NodeIndex a : g.work_authors(node)) {
        if (author_seen[a]) continue;
        author_seen[a] = true;
        author_parent[a] = node;
        if (a == dst) {
          reached = true;
          break;
        }
        queue.emplace_back(false, a);
      }
    }
  }
  if (!reached) return std::nullopt;

  AuthorshipPath path;
  NodeIndex a = dst;
  while (true) {
    path.nodes.push_back({EntityKind::Author, g.authors()[a].id});
    if (a == src) break;
    const NodeIndex w = author_parent[a];
    path.nodes.push_back({EntityKind::Work, g.works()[w].id});
    a = work_parent[w];
  }
  std::reverse(path.nodes.begin(), path.nodes.end());
  return path;
}

std::vector<Coauthor> coauthor_network(const KnowledgeGraph& g, std::string_view author) {
  const NodeIndex a = g.require(EntityKind::Author, author);
  std::vector<Coauthor> out;
  for (auto& [other, works] : coauthor_map(g, a)) {
    Coauthor c;
    c.author_id = g.authors()[other].id;
    c.shared_work_count = works.size();
    std::sort(works.begin(), works.end());
    for (NodeIndex w : works) c.shared_works.push_back(g.works()[w].id);
    out.push_back(std::move(c));
  }
  // Map order is index order, i.e. id order; stable sort keeps it as tie-break.
  std::stable_sort(out.begin(), out.end(), [](const Coauthor& x, const Coauthor& y) {
    return x.shared_work_count > y.shared_work_count;
  });
  return out;
}

std::vector<LabelScore> focus_areas(const KnowledgeGraph& g, std::string_view author, int k) {
  const NodeIndex a = g.require(EntityKind::Author, author);
  require_k(k);
  std::map<NodeIndex, double> sums;
  for (NodeIndex w : g.author_works(a)) {
    const auto labels = g.work_concepts(w);
    const auto scores = g.work_concept_scores(w);
    for (std::size_t i = 0; i < labels.size(); ++i) sums[labels[i]] += scores[i];
  }
  std::vector<LabelScore> out;
  out.reserve(sums.size());
  for (const auto& [c, s] : sums) out.push_back({g.concept_labels()[c], s});
  std::stable_sort(out.begin(), out.end(),
                   [](const LabelScore& x, const LabelScore& y) { return x.score > y.score; });
  if (out.size() > static_cast<std::size_t>(k)) out.resize(k);
  return out;
}

double weighted_jaccard(const std::vector<LabelScore>& a, const std::vector<LabelScore>& b) {
  auto sorted = [](std::vector<LabelScore> v) {
    std::sort(v.begin(), v.end(),
              [](const LabelScore& x, const LabelScore& y) { return x.label < y.label; });
    return v;
  };
  const auto x = sorted(a);
  const auto y = sorted(b);
  double num = 0.0, den = 0.0;
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].label < y[j].label)) {
      den += x[i++].score;
    } else if (i == x.size() || y[j].label < x[i].label) {
      den += y[j++].score;
    } else {
      num += std::min(x[i].score, y[j].score);
      den += std::max(x[i].score, y[j].score);
      ++i;
      ++j;
    }
  }
  return den > 0.0 ? num / den : 0.0;
}

double set_jaccard(std::vector<std::string> a, std::vector<std::string> b) {
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  if (a.empty() && b.empty()) return 0.0;
  std::vector<std::string> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  return static_cast<double>(common.size()) /
         static_cast<double>(a.size() + b.size() - common.size());
}

namespace {

// Label-index merge over the aligned (label, score) rows of two works.
double concept_jaccard(const KnowledgeGraph& g, NodeIndex a, NodeIndex b) {
  const auto la = g.work_concepts(a), lb = g.work_concepts(b);
  const auto sa = g.work_concept_scores(a), sb = g.work_concept_scores(b);
  double num = 0.0, den = 0.0;
  std::size_t i = 0, j = 0;
  while (i < la.size() || j < lb.size()) {
    if (j == lb.size() || (i < la.size() && la[i] < lb[j])) {
      den += sa[i++];
    } else if (i == la.size() || lb[j] < la[i]) {
      den += sb[j++];
    } else {
      num += std::min(sa[i], sb[j]);
      den += std::max(sa[i], sb[j]);
      ++i;
      ++j;
    }
  }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace

double work_similarity(const KnowledgeGraph& g, NodeIndex a, NodeIndex b) {
  if (g.work_concepts(a).empty() && g.work_concepts(b).empty()) {
    return set_jaccard(tokenize(g.works()[a].title), tokenize(g.works()[b].title));
  }
  return concept_jaccard(g, a, b);
}

std::vector<ScoredId> similar_works(const KnowledgeGraph& g, std::string_view work, int k) {
  const NodeIndex w = g.require(EntityKind::Work, work);
  require_k(k);
  std::vector<std::pair<double, NodeIndex>> scored;
  if (!g.work_concepts(w).empty()) {
    std::vector<NodeIndex> candidates;
    for (NodeIndex c : g.work_concepts(w)) {
      const auto ws = g.concept_works(c);
      candidates.insert(candidates.end(), ws.begin(), ws.end());
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (NodeIndex o : candidates) {
      if (o == w) continue;
      const double s = concept_jaccard(g, w, o);
      if (s > 0.0) scored.emplace_back(s, o);
    }
  } else {
    const auto own = tokenize(g.works()[w].title);
    for (NodeIndex o = 0; o < g.works().size(); ++o) {
      if (o == w || !g.work_concepts(o).empty()) continue;
      const double s = set_jaccard(own, tokenize(g.works()[o].title));
      if (s > 0.0) scored.emplace_back(s, o);
    }
  }
  std::sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) {
    return x.first != y.first ? x.first > y.first : x.second < y.second;
  });
  if (scored.size() > static_cast<std::size_t>(k)) scored.resize(k);
  std::vector<ScoredId> out;
  for (const auto& [s, o] : scored) out.push_back({g.works()[o].id, s});
  return out;
}

std::vector<std::string> common_connections(const KnowledgeGraph& g, std::string_view a,
                                            std::string_view b) {
  const NodeIndex ia = g.require(EntityKind::Author, a);
  const NodeIndex ib = g.require(EntityKind::Author, b);
  if (ia == ib) throw Error(ErrorCode::SameAuthor, "common connections need two distinct authors");
  const auto ca = coauthor_map(g, ia);
  const auto cb = coauthor_map(g, ib);
  std::vector<std::string> out;
  for (const auto& [x, works] : ca) {
    if (cb.contains(x)) out.push_back(g.authors()[x].id);
  }
  return out;
}

}  // namespace scholargraph
