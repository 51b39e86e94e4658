#include "scholargraph/graph.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "log.hpp"
#include "scholargraph/error.hpp"

namespace scholargraph {

std::string_view edge_kind_name(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::Authored: return "authored";
    case EdgeKind::PublishedIn: return "published_in";
    case EdgeKind::AffiliatedWith: return "affiliated_with";
    case EdgeKind::Cites: return "cites";
    case EdgeKind::HasConcept: return "has_concept";
  }
  return "unknown";
}

std::size_t BuildStats::edge_total() const {
  return std::accumulate(edges.begin(), edges.end(), std::size_t{0});
}

namespace {

using Edge = std::pair<NodeIndex, NodeIndex>;

// Rows sorted, duplicates removed.
Adjacency make_csr(std::size_t rows, std::vector<Edge> edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  Adjacency adj;
  adj.offsets.assign(rows + 1, 0);
  for (const auto& [from, to] : edges) ++adj.offsets[from + 1];
  std::partial_sum(adj.offsets.begin(), adj.offsets.end(), adj.offsets.begin());
  adj.targets.reserve(edges.size());
  for (const auto& e : edges) adj.targets.push_back(e.second);
  return adj;
}

std::vector<Edge> reversed(const std::vector<Edge>& edges) {
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (const auto& [a, b] : edges) out.emplace_back(b, a);
  return out;
}

template <typename T>
std::unordered_map<std::string, NodeIndex> index_of(const std::vector<T>& list) {
  std::unordered_map<std::string, NodeIndex> m;
  m.reserve(list.size());
  for (std::size_t i = 0; i < list.size(); ++i) m.emplace(list[i].id, static_cast<NodeIndex>(i));
  return m;
}

template <typename T>
void sort_unique_by_id(std::vector<T>& v) {
  std::stable_sort(v.begin(), v.end(), [](const T& a, const T& b) { return a.id < b.id; });
  v.erase(std::unique(v.begin(), v.end(), [](const T& a, const T& b) { return a.id == b.id; }),
          v.end());
}

}  // namespace

void KnowledgeGraph::rebuild_lookup() {
  lookup_[static_cast<int>(EntityKind::Work)] = index_of(works_);
  lookup_[static_cast<int>(EntityKind::Author)] = index_of(authors_);
  lookup_[static_cast<int>(EntityKind::Institution)] = index_of(institutions_);
  lookup_[static_cast<int>(EntityKind::Venue)] = index_of(venues_);
  concept_lookup_.clear();
  concept_lookup_.reserve(concept_labels_.size());
  for (std::size_t i = 0; i < concept_labels_.size(); ++i) {
    concept_lookup_.emplace(concept_labels_[i], static_cast<NodeIndex>(i));
  }
}

std::optional<NodeIndex> KnowledgeGraph::find(EntityKind kind, std::string_view id) const {
  const auto& m = lookup_[static_cast<int>(kind)];
  auto it = m.find(std::string(id));
  if (it == m.end()) return std::nullopt;
  return it->second;
}

NodeIndex KnowledgeGraph::require(EntityKind kind, std::string_view id) const {
  if (auto i = find(kind, id)) return *i;
  throw Error(ErrorCode::NotFound,
              std::string(entity_kind_name(kind)) + " '" + std::string(id) + "' not found");
}

std::optional<NodeIndex> KnowledgeGraph::find_concept(std::string_view label) const {
  auto it = concept_lookup_.find(std::string(label));
  if (it == concept_lookup_.end()) return std::nullopt;
  return it->second;
}

const std::string& KnowledgeGraph::id(EntityKind kind, NodeIndex i) const {
  switch (kind) {
    case EntityKind::Work: return works_[i].id;
    case EntityKind::Author: return authors_[i].id;
    case EntityKind::Institution: return institutions_[i].id;
    case EntityKind::Venue: return venues_[i].id;
  }
  return works_[i].id;
}

std::size_t KnowledgeGraph::count(EntityKind kind) const {
  switch (kind) {
    case EntityKind::Work: return works_.size();
    case EntityKind::Author: return authors_.size();
    case EntityKind::Institution: return institutions_.size();
    case EntityKind::Venue: return venues_.size();
  }
  return 0;
}

Snapshot KnowledgeGraph::to_snapshot() const {
  Snapshot s;
  s.works = works_;
  s.authors = authors_;
  s.institutions = institutions_;
  s.venues = venues_;
  refresh_derived(s);
  return s;
}

bool operator==(const KnowledgeGraph& a, const KnowledgeGraph& b) {
  return a.works_ == b.works_ && a.authors_ == b.authors_ && a.institutions_ == b.institutions_ &&
         a.venues_ == b.venues_ && a.concept_labels_ == b.concept_labels_ &&
         a.work_authors_ == b.work_authors_ && a.author_works_ == b.author_works_ &&
         a.work_venue_ == b.work_venue_ && a.venue_works_ == b.venue_works_ &&
         a.author_institution_ == b.author_institution_ &&
         a.institution_authors_ == b.institution_authors_ && a.cites_out_ == b.cites_out_ &&
         a.cites_in_ == b.cites_in_ && a.work_concepts_ == b.work_concepts_ &&
         a.concept_works_ == b.concept_works_ &&
         a.work_concept_scores_ == b.work_concept_scores_ &&
         a.institution_works_ == b.institution_works_ &&
         a.institution_cited_ == b.institution_cited_ && a.stats_ == b.stats_;
}

KnowledgeGraph build_graph(const Snapshot& snapshot) {
  KnowledgeGraph g;
  g.works_ = snapshot.works;
  g.authors_ = snapshot.authors;
  g.institutions_ = snapshot.institutions;
  g.venues_ = snapshot.venues;
  sort_unique_by_id(g.works_);
  sort_unique_by_id(g.authors_);
  sort_unique_by_id(g.institutions_);
  sort_unique_by_id(g.venues_);

  const auto work_ix = index_of(g.works_);
  const auto author_ix = index_of(g.authors_);
  const auto inst_ix = index_of(g.institutions_);
  const auto venue_ix = index_of(g.venues_);

  std::size_t dropped = 0;
  std::vector<Edge> authored, published, affiliated, cites;
  std::vector<std::pair<std::string, NodeIndex>> concept_edges;  // (label, work)

  for (std::size_t wi = 0; wi < g.works_.size(); ++wi) {
    const Work& w = g.works_[wi];
    const auto w_ix = static_cast<NodeIndex>(wi);
    for (const auto& a : w.authors) {
      auto it = author_ix.find(a);
      if (it == author_ix.end()) {
        ++dropped;
        log::debug() << "dropping authored edge " << w.id << " -> unknown author " << a;
      } else {
        authored.emplace_back(w_ix, it->second);
      }
    }
    if (w.venue) {
      auto it = venue_ix.find(*w.venue);
      if (it == venue_ix.end()) {
        ++dropped;
        log::debug() << "dropping venue edge " << w.id << " -> unknown venue " << *w.venue;
      } else {
        published.emplace_back(w_ix, it->second);
      }
    }
    for (const auto& r : w.referenced_works) {
      auto it = work_ix.find(r);
      if (it == work_ix.end()) {
        ++dropped;
        log::debug() << "dropping cites edge " << w.id << " -> unknown work " << r;
      } else if (it->second != w_ix) {
        cites.emplace_back(w_ix, it->second);
      }
    }
    for (const auto& c : w.concepts) concept_edges.emplace_back(c.label, w_ix);
  }
  for (std::size_t ai = 0; ai < g.authors_.size(); ++ai) {
    const Author& a = g.authors_[ai];
    if (!a.affiliation) continue;
    auto it = inst_ix.find(*a.affiliation);
    if (it == inst_ix.end()) {
      ++dropped;
      log::debug() << "dropping affiliation edge " << a.id << " -> unknown institution "
                   << *a.affiliation;
    } else {
      affiliated.emplace_back(static_cast<NodeIndex>(ai), it->second);
    }
  }

  const std::size_t nw = g.works_.size();
  const std::size_t na = g.authors_.size();
  const std::size_t ni = g.institutions_.size();
  const std::size_t nv = g.venues_.size();

  g.work_authors_ = make_csr(nw, authored);
  g.author_works_ = make_csr(na, reversed(authored));
  g.work_venue_ = make_csr(nw, published);
  g.venue_works_ = make_csr(nv, reversed(published));
  g.author_institution_ = make_csr(na, affiliated);
  g.institution_authors_ = make_csr(ni, reversed(affiliated));
  g.cites_out_ = make_csr(nw, cites);
  g.cites_in_ = make_csr(nw, reversed(cites));

  for (const auto& [label, w] : concept_edges) g.concept_labels_.push_back(label);
  std::sort(g.concept_labels_.begin(), g.concept_labels_.end());
  g.concept_labels_.erase(std::unique(g.concept_labels_.begin(), g.concept_labels_.end()),
                          g.concept_labels_.end());
  std::unordered_map<std::string, NodeIndex> label_ix;
  for (std::size_t i = 0; i < g.concept_labels_.size(); ++i) {
    label_ix.emplace(g.concept_labels_[i], static_cast<NodeIndex>(i));
  }
  std::vector<Edge> has_concept;
  has_concept.reserve(concept_edges.size());
  for (const auto& [label, w] : concept_edges) has_concept.emplace_back(w, label_ix.at(label));
  g.work_concepts_ = make_csr(nw, has_concept);
  g.concept_works_ = make_csr(g.concept_labels_.size(), reversed(has_concept));
  g.work_concept_scores_.resize(g.work_concepts_.edge_count());
  for (std::size_t wi = 0; wi < nw; ++wi) {
    const auto row = g.work_concepts_.row(static_cast<NodeIndex>(wi));
    for (const auto& c : g.works_[wi].concepts) {
      const NodeIndex ci = label_ix.at(c.label);
      auto pos = std::lower_bound(row.begin(), row.end(), ci) - row.begin();
      g.work_concept_scores_[g.work_concepts_.offsets[wi] + pos] = c.score;
    }
  }

  for (std::size_t ai = 0; ai < na; ++ai) {
    g.authors_[ai].works_count =
        static_cast<std::int64_t>(g.author_works_.row(static_cast<NodeIndex>(ai)).size());
  }

  g.institution_works_.assign(ni, 0);
  g.institution_cited_.assign(ni, 0);
  std::vector<NodeIndex> scratch;
  for (std::size_t ii = 0; ii < ni; ++ii) {
    scratch.clear();
    for (NodeIndex a : g.institution_authors_.row(static_cast<NodeIndex>(ii))) {
      const auto ws = g.author_works_.row(a);
      scratch.insert(scratch.end(), ws.begin(), ws.end());
    }
    std::sort(scratch.begin(), scratch.end());
    scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
    g.institution_works_[ii] = static_cast<std::int64_t>(scratch.size());
    for (NodeIndex w : scratch) g.institution_cited_[ii] += g.works_[w].cited_by_count;
  }

  auto& st = g.stats_;
  st.nodes = nw + na + ni + nv;
  st.edges[static_cast<int>(EdgeKind::Authored)] = g.work_authors_.edge_count();
  st.edges[static_cast<int>(EdgeKind::PublishedIn)] = g.work_venue_.edge_count();
  st.edges[static_cast<int>(EdgeKind::AffiliatedWith)] = g.author_institution_.edge_count();
  st.edges[static_cast<int>(EdgeKind::Cites)] = g.cites_out_.edge_count();
  st.edges[static_cast<int>(EdgeKind::HasConcept)] = g.work_concepts_.edge_count();
  st.dropped_dangling = dropped;
  st.max_year = 0;
  for (const auto& w : g.works_) st.max_year = std::max(st.max_year, w.publication_year);

  g.rebuild_lookup();
  log::info() << "built graph: " << st.nodes << " nodes, " << st.edge_total() << " edges, "
              << st.dropped_dangling << " dangling edges dropped";
  return g;
}

EntityRecord get_entity(const KnowledgeGraph& graph, const EntityId& id) {
  const NodeIndex i = graph.require(id.kind, id.value);
  switch (id.kind) {
    case EntityKind::Work: return graph.works()[i];
    case EntityKind::Author: return graph.authors()[i];
    case EntityKind::Institution: return graph.institutions()[i];
    case EntityKind::Venue: return graph.venues()[i];
  }
  throw Error(ErrorCode::NotFound, "unknown kind");
}

std::vector<EntityId> neighbors(const KnowledgeGraph& graph, const EntityId& id, EdgeKind edge,
                                Direction direction) {
  const NodeIndex i = graph.require(id.kind, id.value);
  std::vector<EntityId> out;
  auto emit = [&](std::span<const NodeIndex> row, EntityKind kind, const auto& list) {
    out.reserve(row.size());
    for (NodeIndex n : row) out.push_back({kind, list[n].id});
  };
  const auto k = id.kind;
  switch (edge) {
    case EdgeKind::Authored:
      if (k == EntityKind::Work) emit(graph.work_authors(i), EntityKind::Author, graph.authors());
      if (k == EntityKind::Author) emit(graph.author_works(i), EntityKind::Work, graph.works());
      break;
    case EdgeKind::PublishedIn:
      if (k == EntityKind::Work) emit(graph.work_venue(i), EntityKind::Venue, graph.venues());
      if (k == EntityKind::Venue) emit(graph.venue_works(i), EntityKind::Work, graph.works());
      break;
    case EdgeKind::AffiliatedWith:
      if (k == EntityKind::Author) {
        emit(graph.author_institution(i), EntityKind::Institution, graph.institutions());
      }
      if (k == EntityKind::Institution) {
        emit(graph.institution_authors(i), EntityKind::Author, graph.authors());
      }
      break;
    case EdgeKind::Cites:
      if (k == EntityKind::Work) {
        emit(direction == Direction::Out ? graph.cites_out(i) : graph.cites_in(i),
             EntityKind::Work, graph.works());
      }
      break;
    case EdgeKind::HasConcept:
      throw Error(ErrorCode::InvalidArgument,
                  "has_concept neighbors are labels; use concept_postings");
  }
  return out;
}

std::vector<std::string> concept_postings(const KnowledgeGraph& graph, std::string_view label) {
  std::vector<std::string> out;
  if (auto c = graph.find_concept(label)) {
    for (NodeIndex w : graph.concept_works(*c)) out.push_back(graph.works()[w].id);
  }
  return out;
}

}  // namespace scholargraph
