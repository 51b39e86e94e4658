#include "scholargraph/search.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "scholargraph/error.hpp"
#include "scholargraph/text.hpp"

namespace scholargraph {

EntityKind criterion_kind(Criterion c) {
  switch (c) {
    case Criterion::Works: return EntityKind::Work;
    case Criterion::Author: return EntityKind::Author;
    case Criterion::Institutions: return EntityKind::Institution;
    case Criterion::Venues: return EntityKind::Venue;
  }
  return EntityKind::Work;
}

std::string_view criterion_name(Criterion c) {
  switch (c) {
    case Criterion::Works: return "works";
    case Criterion::Author: return "authors";
    case Criterion::Institutions: return "institutions";
    case Criterion::Venues: return "venues";
  }
  return "";
}

std::string_view sort_order_name(SortOrder s) {
  switch (s) {
    case SortOrder::Relevance: return "relevance";
    case SortOrder::Title: return "title";
    case SortOrder::Date: return "date";
    case SortOrder::Citations: return "citations";
  }
  return "";
}

std::optional<Criterion> parse_criterion(std::string_view s) {
  if (s == "works") return Criterion::Works;
  if (s == "authors" || s == "author") return Criterion::Author;
  if (s == "institutions") return Criterion::Institutions;
  if (s == "venues") return Criterion::Venues;
  return std::nullopt;
}

std::optional<SortOrder> parse_sort_order(std::string_view s) {
  if (s == "relevance") return SortOrder::Relevance;
  if (s == "title") return SortOrder::Title;
  if (s == "date") return SortOrder::Date;
  if (s == "citations") return SortOrder::Citations;
  return std::nullopt;
}

bool tokens_match(const std::vector<std::string>& query_tokens,
                  const std::vector<std::string>& field_tokens) {
  if (query_tokens.empty()) return false;
  for (std::size_t i = 0; i < query_tokens.size(); ++i) {
    const auto& q = query_tokens[i];
    const bool last = i + 1 == query_tokens.size();
    const bool found = std::any_of(field_tokens.begin(), field_tokens.end(), [&](const auto& t) {
      return last ? t.starts_with(q) : t == q;
    });
    if (!found) return false;
  }
  return true;
}

namespace {

std::vector<std::string> indexed_tokens(const KnowledgeGraph& g, Criterion c, NodeIndex i) {
  switch (c) {
    case Criterion::Works: return tokenize(g.works()[i].title);
    case Criterion::Author: return tokenize(g.authors()[i].display_name);
    case Criterion::Institutions: {
      const auto& inst = g.institutions()[i];
      auto t = tokenize(inst.display_name);
      if (inst.acronym) {
        auto more = tokenize(*inst.acronym);
        t.insert(t.end(), more.begin(), more.end());
      }
      return t;
    }
    case Criterion::Venues: return tokenize(g.venues()[i].display_name);
  }
  return {};
}

const std::string& display_title(const KnowledgeGraph& g, Criterion c, NodeIndex i) {
  switch (c) {
    case Criterion::Works: return g.works()[i].title;
    case Criterion::Author: return g.authors()[i].display_name;
    case Criterion::Institutions: return g.institutions()[i].display_name;
    case Criterion::Venues: return g.venues()[i].display_name;
  }
  return g.works()[i].title;
}

std::int64_t citations_of(const KnowledgeGraph& g, Criterion c, NodeIndex i) {
  switch (c) {
    case Criterion::Works: return g.works()[i].cited_by_count;
    case Criterion::Author: return g.authors()[i].cited_by_count;
    case Criterion::Institutions: return g.institution_cited_by_count(i);
    case Criterion::Venues: return g.venues()[i].cited_by_count;
  }
  return 0;
}

// Half-open range of term ids starting with `prefix`.
std::pair<std::uint32_t, std::uint32_t> prefix_range(const std::vector<std::string>& terms,
                                                     const std::string& prefix) {
  auto lo = std::lower_bound(terms.begin(), terms.end(), prefix);
  auto hi = lo;
  while (hi != terms.end() && hi->starts_with(prefix)) ++hi;
  return {static_cast<std::uint32_t>(lo - terms.begin()),
          static_cast<std::uint32_t>(hi - terms.begin())};
}

std::optional<std::uint32_t> exact_term(const std::vector<std::string>& terms,
                                        const std::string& term) {
  auto it = std::lower_bound(terms.begin(), terms.end(), term);
  if (it == terms.end() || *it != term) return std::nullopt;
  return static_cast<std::uint32_t>(it - terms.begin());
}

}  // namespace

std::size_t SearchIndex::term_count() const {
  std::size_t n = 0;
  for (const auto& k : kinds_) n += k.terms.size();
  return n;
}

std::vector<std::string> SearchIndex::postings(const KnowledgeGraph& graph, Criterion c,
                                               std::string_view term) const {
  const auto& k = kinds_[idx(c)];
  std::vector<std::string> out;
  if (auto t = exact_term(k.terms, std::string(term))) {
    for (NodeIndex i : k.postings[*t]) out.push_back(graph.id(criterion_kind(c), i));
  }
  return out;
}

SearchIndex build_index(const KnowledgeGraph& graph) {
  SearchIndex index;
  for (Criterion c : {Criterion::Works, Criterion::Author, Criterion::Institutions,
                      Criterion::Venues}) {
    auto& k = index.kinds_[SearchIndex::idx(c)];
    const std::size_t n = graph.count(criterion_kind(c));
    std::map<std::string, std::vector<NodeIndex>> inverted;
    std::vector<std::vector<std::string>> per_entity(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto tokens = indexed_tokens(graph, c, static_cast<NodeIndex>(i));
      std::sort(tokens.begin(), tokens.end());
      tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
      for (const auto& t : tokens) inverted[t].push_back(static_cast<NodeIndex>(i));
      per_entity[i] = std::move(tokens);
    }
    k.terms.reserve(inverted.size());
    k.postings.reserve(inverted.size());
    for (auto& [term, list] : inverted) {
      k.terms.push_back(term);
      k.postings.push_back(std::move(list));  // ascending by construction
    }
    k.forward.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto& f = k.forward[i];
      f.reserve(per_entity[i].size());
      for (const auto& t : per_entity[i]) f.push_back(*exact_term(k.terms, t));
    }
    std::vector<std::pair<std::string, NodeIndex>> keyed;
    keyed.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      keyed.emplace_back(casefold(display_title(graph, c, static_cast<NodeIndex>(i))),
                         static_cast<NodeIndex>(i));
    }
    std::sort(keyed.begin(), keyed.end());
    k.title_rank.resize(n);
    for (std::size_t r = 0; r < n; ++r) k.title_rank[keyed[r].second] = static_cast<std::uint32_t>(r);
  }
  return index;
}

std::vector<NodeIndex> match_entities(const SearchIndex& index, Criterion c,
                                      const std::vector<std::string>& tokens) {
  std::vector<NodeIndex> hits;
  if (tokens.empty()) return hits;
  const auto& k = index.kinds_[SearchIndex::idx(c)];
  const auto [lo, hi] = prefix_range(k.terms, tokens.back());
  if (lo == hi) return hits;

  // Exact tokens, rarest first.
  std::vector<std::uint32_t> exact;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    auto t = exact_term(k.terms, tokens[i]);
    if (!t) return hits;
    exact.push_back(*t);
  }
  std::sort(exact.begin(), exact.end());
  exact.erase(std::unique(exact.begin(), exact.end()), exact.end());
  std::sort(exact.begin(), exact.end(), [&](auto a, auto b) {
    return k.postings[a].size() < k.postings[b].size();
  });

  if (!exact.empty()) {
    hits = k.postings[exact.front()];
    std::vector<NodeIndex> next;
    for (std::size_t i = 1; i < exact.size() && !hits.empty(); ++i) {
      const auto& p = k.postings[exact[i]];
      next.clear();
      std::set_intersection(hits.begin(), hits.end(), p.begin(), p.end(),
                            std::back_inserter(next));
      hits.swap(next);
    }
    // Prefix term ids form the contiguous range [lo, hi).
    std::erase_if(hits, [&, lo = lo, hi = hi](NodeIndex e) {
      const auto& f = k.forward[e];
      auto it = std::lower_bound(f.begin(), f.end(), lo);
      return it == f.end() || *it >= hi;
    });
    return hits;
  }

  std::size_t total = 0;
  for (auto t = lo; t < hi; ++t) total += k.postings[t].size();
  if (hi - lo == 1) return k.postings[lo];
  const std::size_t n = k.forward.size();
  if (total * 8 > n) {
    std::vector<bool> mark(n, false);
    for (auto t = lo; t < hi; ++t) {
      for (NodeIndex e : k.postings[t]) mark[e] = true;
    }
    hits.reserve(total);
    for (std::size_t e = 0; e < n; ++e) {
      if (mark[e]) hits.push_back(static_cast<NodeIndex>(e));
    }
  } else {
    hits.reserve(total);
    for (auto t = lo; t < hi; ++t) hits.insert(hits.end(), k.postings[t].begin(), k.postings[t].end());
    std::sort(hits.begin(), hits.end());
    hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
  }
  return hits;
}

SearchResultPage search(const SearchIndex& index, const KnowledgeGraph& graph,
                        const SearchQuery& query) {
  const auto tokens = tokenize(query.text);
  if (tokens.empty()) throw Error(ErrorCode::EmptyQuery, "query has no searchable terms");
  if (query.sort == SortOrder::Date && query.criterion != Criterion::Works) {
    throw Error(ErrorCode::InvalidSort, "sort 'date' is only defined for works");
  }
  if (query.page < 1) throw Error(ErrorCode::InvalidArgument, "page must be >= 1");
  if (query.page_size < 1) throw Error(ErrorCode::InvalidArgument, "page_size must be >= 1");

  const Criterion c = query.criterion;
  auto hits = match_entities(index, c, tokens);
  const auto& k = index.kinds_[SearchIndex::idx(c)];

  SearchResultPage page;
  page.total_hits = hits.size();
  page.page = query.page;
  page.page_size = query.page_size;
  page.kind = criterion_kind(c);

  const std::size_t begin = static_cast<std::size_t>(query.page - 1) * query.page_size;
  if (begin >= hits.size()) return page;
  const std::size_t end = std::min(hits.size(), begin + query.page_size);

  auto order = [&](auto less) {
    if (end < hits.size()) {
      std::partial_sort(hits.begin(), hits.begin() + end, hits.end(), less);
    } else {
      std::sort(hits.begin(), hits.end(), less);
    }
  };
  switch (query.sort) {
    case SortOrder::Relevance:
    case SortOrder::Citations:
      order([&](NodeIndex a, NodeIndex b) {
        const auto ca = citations_of(graph, c, a), cb = citations_of(graph, c, b);
        return ca != cb ? ca > cb : a < b;
      });
      break;
    case SortOrder::Title:
      order([&](NodeIndex a, NodeIndex b) { return k.title_rank[a] < k.title_rank[b]; });
      break;
    case SortOrder::Date:
      order([&](NodeIndex a, NodeIndex b) {
        const int ya = graph.works()[a].publication_year, yb = graph.works()[b].publication_year;
        return ya != yb ? ya > yb : a < b;
      });
      break;
  }
  page.items.assign(hits.begin() + begin, hits.begin() + end);
  return page;
}

std::vector<std::string> result_ids(const KnowledgeGraph& graph, const SearchResultPage& page) {
  std::vector<std::string> out;
  out.reserve(page.items.size());
  for (NodeIndex i : page.items) out.push_back(graph.id(page.kind, i));
  return out;
}

std::vector<AuthorCandidate> disambiguate_author(const SearchIndex& index,
                                                 const KnowledgeGraph& graph,
                                                 std::string_view name,
                                                 const std::optional<std::string>& affiliation) {
  const auto tokens = tokenize(name);
  if (tokens.empty()) throw Error(ErrorCode::EmptyQuery, "name has no searchable terms");
  const auto aff_tokens = affiliation ? tokenize(*affiliation) : std::vector<std::string>{};

  std::vector<AuthorCandidate> out;
  for (NodeIndex a : match_entities(index, Criterion::Author, tokens)) {
    const Author& au = graph.authors()[a];
    AuthorCandidate cand;
    cand.author = a;
    cand.author_id = au.id;
    cand.name = au.display_name;
    cand.works_count = au.works_count;
    cand.cited_by_count = au.cited_by_count;
    const auto inst = graph.author_institution(a);
    if (!inst.empty()) {
      const Institution& in = graph.institutions()[inst.front()];
      cand.institution_id = in.id;
      cand.institution_name = in.display_name;
      cand.affiliation_match = !aff_tokens.empty() && tokens_match(aff_tokens, tokenize(in.display_name));
    }
    out.push_back(std::move(cand));
  }
  std::sort(out.begin(), out.end(), [](const AuthorCandidate& x, const AuthorCandidate& y) {
    if (x.affiliation_match != y.affiliation_match) return x.affiliation_match;
    if (x.works_count != y.works_count) return x.works_count > y.works_count;
    return x.author < y.author;
  });
  return out;
}

}  // namespace scholargraph
