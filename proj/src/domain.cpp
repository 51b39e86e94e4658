#include "scholargraph/domain.hpp"

#include <algorithm>
#include <unordered_set>

#include "scholargraph/error.hpp"
#include "scholargraph/text.hpp"

namespace scholargraph {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnreadableFile: return "UNREADABLE_FILE";
    case ErrorCode::MalformedLine: return "MALFORMED_LINE";
    case ErrorCode::DuplicatePosition: return "DUPLICATE_POSITION";
    case ErrorCode::NotFound: return "NOT_FOUND";
    case ErrorCode::VersionMismatch: return "VERSION_MISMATCH";
    case ErrorCode::CorruptSnapshot: return "CORRUPT_SNAPSHOT";
    case ErrorCode::EmptyQuery: return "EMPTY_QUERY";
    case ErrorCode::InvalidSort: return "INVALID_SORT";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::SameAuthor: return "SAME_AUTHOR";
    case ErrorCode::Unauthorized: return "UNAUTHORIZED";
    case ErrorCode::BodyInvalid: return "BODY_INVALID";
    case ErrorCode::NoPath: return "NO_PATH";
    case ErrorCode::Forbidden: return "FORBIDDEN";
    case ErrorCode::NoRoute: return "NO_ROUTE";
    case ErrorCode::MethodNotAllowed: return "METHOD_NOT_ALLOWED";
  }
  return "UNKNOWN";
}

std::string_view entity_kind_name(EntityKind kind) {
  switch (kind) {
    case EntityKind::Work: return "work";
    case EntityKind::Author: return "author";
    case EntityKind::Institution: return "institution";
    case EntityKind::Venue: return "venue";
  }
  return "unknown";
}

EntityKind kind_of(const EntityRecord& record) {
  return static_cast<EntityKind>(record.index());
}

const std::string& id_of(const EntityRecord& record) {
  return std::visit([](const auto& r) -> const std::string& { return r.id; }, record);
}

bool is_valid_id_token(std::string_view value) {
  if (value.empty()) return false;
  return std::none_of(value.begin(), value.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
  });
}

bool has_errors(const std::vector<Violation>& violations) {
  return std::any_of(violations.begin(), violations.end(),
                     [](const Violation& v) { return v.severity == Severity::Error; });
}

namespace {

void push(std::vector<Violation>& out, std::string field, std::string rule,
          Severity severity = Severity::Error) {
  out.push_back({std::move(field), std::move(rule), severity});
}

void check_ref(std::vector<Violation>& out, const std::optional<std::string>& ref,
               const char* field) {
  if (ref && !is_valid_id_token(*ref)) push(out, field, "valid-id");
}

void check_work(const Work& w, const YearLookup& years, std::vector<Violation>& out) {
  if (!is_valid_id_token(w.id)) push(out, "id", "valid-id");
  if (w.title.empty()) push(out, "title", "non-empty");
  if (w.publication_year < 1800) push(out, "publication_year", "min-1800");
  check_ref(out, w.venue, "venue");
  if (w.authors.empty()) push(out, "authors", "non-empty");
  {
    std::unordered_set<std::string> seen;
    bool bad_id = false;
    bool dup = false;
    for (const auto& a : w.authors) {
      bad_id |= !is_valid_id_token(a);
      dup |= !seen.insert(a).second;
    }
    if (bad_id) push(out, "authors", "valid-id");
    if (dup) push(out, "authors", "no-duplicates");
  }
  if (w.cited_by_count < 0) push(out, "cited_by_count", "non-negative");
  {
    std::unordered_set<std::string> labels;
    bool dup = false;
    bool case_bad = false;
    bool range_bad = false;
    for (const auto& c : w.concepts) {
      dup |= !labels.insert(c.label).second;
      case_bad |= c.label.empty() || casefold(c.label) != c.label;
      range_bad |= !(c.score >= 0.0 && c.score <= 1.0);
    }
    if (case_bad) push(out, "concepts", "lowercase-label");
    if (dup) push(out, "concepts", "unique-labels");
    if (range_bad) push(out, "concepts", "score-in-unit-interval");
  }
  bool bad_ref = false;
  for (const auto& r : w.referenced_works) {
    bad_ref |= !is_valid_id_token(r);
    if (r == w.id) {
      push(out, "referenced_works", "no-self-reference");
      break;
    }
  }
  if (bad_ref) push(out, "referenced_works", "valid-id");
  if (years) {
    for (const auto& r : w.referenced_works) {
      const auto y = years(r);
      if (y && *y > w.publication_year) {
        push(out, "referenced_works", "cites-not-newer", Severity::Warning);
        break;
      }
    }
  }
}

void check_author(const Author& a, std::vector<Violation>& out) {
  if (!is_valid_id_token(a.id)) push(out, "id", "valid-id");
  if (a.display_name.empty()) push(out, "display_name", "non-empty");
  check_ref(out, a.affiliation, "affiliation");
  if (a.works_count < 0) push(out, "works_count", "non-negative");
  if (a.cited_by_count < 0) push(out, "cited_by_count", "non-negative");
}

void check_institution(const Institution& i, std::vector<Violation>& out) {
  if (!is_valid_id_token(i.id)) push(out, "id", "valid-id");
  if (i.display_name.empty()) push(out, "display_name", "non-empty");
}

void check_venue(const Venue& v, std::vector<Violation>& out) {
  if (!is_valid_id_token(v.id)) push(out, "id", "valid-id");
  if (v.display_name.empty()) push(out, "display_name", "non-empty");
  if (v.works_count < 0) push(out, "works_count", "non-negative");
  if (v.cited_by_count < 0) push(out, "cited_by_count", "non-negative");
}

}  // namespace

std::vector<Violation> validate_entity(const EntityRecord& record, const YearLookup& years) {
  std::vector<Violation> out;
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Work>) {
          check_work(r, years, out);
        } else if constexpr (std::is_same_v<T, Author>) {
          check_author(r, out);
        } else if constexpr (std::is_same_v<T, Institution>) {
          check_institution(r, out);
        } else {
          check_venue(r, out);
        }
      },
      record);
  return out;
}

}  // namespace scholargraph
