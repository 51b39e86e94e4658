#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scholargraph/graph.hpp"

namespace scholargraph {

enum class Criterion : std::uint8_t { Works, Author, Institutions, Venues };
enum class SortOrder : std::uint8_t { Relevance, Title, Date, Citations };

EntityKind criterion_kind(Criterion c);
std::string_view criterion_name(Criterion c);
std::string_view sort_order_name(SortOrder s);
// Parse the API spellings ("works", "authors", ...; "relevance", "title", ...).
std::optional<Criterion> parse_criterion(std::string_view s);
std::optional<SortOrder> parse_sort_order(std::string_view s);

inline constexpr int kDefaultPageSize = 10;

struct SearchQuery {
  Criterion criterion = Criterion::Works;
  std::string text;
  int page = 1;  // 1-based
  int page_size = kDefaultPageSize;
  SortOrder sort = SortOrder::Relevance;
};

struct SearchResultPage {
  std::size_t total_hits = 0;
  int page = 1;
  int page_size = kDefaultPageSize;
  EntityKind kind = EntityKind::Work;
  std::vector<NodeIndex> items;

  friend bool operator==(const SearchResultPage&, const SearchResultPage&) = default;
};

// Inverted index per entity kind. Indexed fields: work title, author
// display_name, institution display_name + acronym, venue display_name.
class SearchIndex {
 public:
  // Sorted ids of entities containing exactly `term`.
  std::vector<std::string> postings(const KnowledgeGraph& graph, Criterion c,
                                    std::string_view term) const;
  const std::vector<std::string>& terms(Criterion c) const { return kinds_[idx(c)].terms; }
  std::size_t term_count() const;

 private:
  friend SearchIndex build_index(const KnowledgeGraph& graph);
  friend SearchResultPage search(const SearchIndex& index, const KnowledgeGraph& graph,
                                 const SearchQuery& query);
  friend std::vector<NodeIndex> match_entities(const SearchIndex& index, Criterion c,
                                               const std::vector<std::string>& tokens);

  struct KindIndex {
    std::vector<std::string> terms;  // sorted, unique
    std::vector<std::vector<NodeIndex>> postings;  // aligned with terms
    std::vector<std::vector<std::uint32_t>> forward;  // entity -> sorted term ids
    std::vector<std::uint32_t> title_rank;  // position in case-folded name order
  };
  static std::size_t idx(Criterion c) { return static_cast<std::size_t>(c); }

  std::array<KindIndex, 4> kinds_;
};

SearchIndex build_index(const KnowledgeGraph& graph);

// Entities whose indexed tokens contain every token; the last token matches
// by prefix. Result sorted by node index (= id order).
std::vector<NodeIndex> match_entities(const SearchIndex& index, Criterion c,
                                      const std::vector<std::string>& tokens);

// Throws Error(EmptyQuery), Error(InvalidSort), Error(InvalidArgument) for
// page < 1 or page_size < 1.
SearchResultPage search(const SearchIndex& index, const KnowledgeGraph& graph,
                        const SearchQuery& query);

std::vector<std::string> result_ids(const KnowledgeGraph& graph, const SearchResultPage& page);

struct AuthorCandidate {
  NodeIndex author = 0;
  std::string author_id;
  std::string name;
  std::optional<std::string> institution_id;
  std::optional<std::string> institution_name;
  std::int64_t works_count = 0;
  std::int64_t cited_by_count = 0;
  bool affiliation_match = false;
};

// Authors matching the name (last token by prefix), ranked by affiliation
// match, works_count descending, then id. Throws Error(EmptyQuery).
std::vector<AuthorCandidate> disambiguate_author(const SearchIndex& index,
                                                 const KnowledgeGraph& graph,
                                                 std::string_view name,
                                                 const std::optional<std::string>& affiliation);

// True when every query token occurs in `field_tokens`, the last by prefix.
bool tokens_match(const std::vector<std::string>& query_tokens,
                  const std::vector<std::string>& field_tokens);

}  // namespace scholargraph
