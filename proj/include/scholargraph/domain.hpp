#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace scholargraph {

enum class EntityKind : std::uint8_t { Work = 0, Author = 1, Institution = 2, Venue = 3 };

std::string_view entity_kind_name(EntityKind kind);

// Opaque identifier token, unique within its kind.
struct EntityId {
  EntityKind kind = EntityKind::Work;
  std::string value;

  friend bool operator==(const EntityId&, const EntityId&) = default;
  friend auto operator<=>(const EntityId&, const EntityId&) = default;
};

struct Concept {
  std::string label;  // lowercase
  double score = 0.0;  // [0, 1]

  friend bool operator==(const Concept&, const Concept&) = default;
};

struct Work {
  std::string id;
  std::string title;
  int publication_year = 0;
  std::optional<std::string> venue;
  std::vector<std::string> authors;  // ordered as published
  std::int64_t cited_by_count = 0;
  std::optional<std::string> doi;
  std::optional<std::string> mag_id;
  bool is_open_access = false;
  std::vector<Concept> concepts;
  std::optional<std::string> abstract;
  std::vector<std::string> referenced_works;

  friend bool operator==(const Work&, const Work&) = default;
};

struct Author {
  std::string id;
  std::string display_name;
  std::optional<std::string> affiliation;  // last known institution
  std::int64_t works_count = 0;
  std::int64_t cited_by_count = 0;
  std::optional<std::string> orcid;

  friend bool operator==(const Author&, const Author&) = default;
};

struct Institution {
  std::string id;
  std::string display_name;
  std::optional<std::string> location;
  std::optional<std::string> homepage;
  std::optional<std::string> sector;
  std::optional<std::string> acronym;
  std::optional<std::string> wikipedia;

  friend bool operator==(const Institution&, const Institution&) = default;
};

struct Venue {
  std::string id;
  std::string display_name;
  std::int64_t works_count = 0;
  std::int64_t cited_by_count = 0;

  friend bool operator==(const Venue&, const Venue&) = default;
};

using EntityRecord = std::variant<Work, Author, Institution, Venue>;

EntityKind kind_of(const EntityRecord& record);
const std::string& id_of(const EntityRecord& record);

enum class Severity { Error, Warning };

struct Violation {
  std::string field;
  std::string rule;
  Severity severity = Severity::Error;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Returns the publication year of a work id when known to the caller.
using YearLookup = std::function<std::optional<int>(const std::string& work_id)>;

// Checks every record-level invariant. When `years` is supplied, citations
// of younger works are reported as warnings.
std::vector<Violation> validate_entity(const EntityRecord& record,
                                       const YearLookup& years = {});

bool has_errors(const std::vector<Violation>& violations);

bool is_valid_id_token(std::string_view value);

}  // namespace scholargraph
