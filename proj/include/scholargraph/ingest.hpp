#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scholargraph/domain.hpp"

namespace scholargraph {

// One line of a works/authors/institutions/venues .jsonl file. Throws
// Error(MalformedLine) when the line is not a well-typed record object.
EntityRecord parse_record(EntityKind kind, std::string_view line);

// Canonical single-line encoding; parse_record(kind, encode_record(r)) == r.
std::string encode_record(const EntityRecord& record);

// Token -> positions; returns the tokens joined by single spaces in
// position order. Gaps collapse. Throws Error(DuplicatePosition).
std::string reconstruct_abstract(const std::map<std::string, std::vector<std::int64_t>>& inverted);

// File name used for each kind inside a snapshot or delta directory.
std::string_view kind_file_name(EntityKind kind);

struct MalformedLine {
  std::string file;
  std::size_t line = 0;
  std::string excerpt;  // first 80 bytes
  std::string reason;
};

struct RejectedRecord {
  std::string file;
  std::size_t line = 0;
  std::string id;
  std::vector<Violation> violations;
};

struct DanglingRef {
  std::string from_id;  // work or author id
  std::string field;  // authors, venue, referenced_works, affiliation
  std::string missing_id;

  friend bool operator==(const DanglingRef&, const DanglingRef&) = default;
};

struct IngestReport {
  std::vector<MalformedLine> malformed;
  std::vector<RejectedRecord> rejected;
  std::vector<RejectedRecord> warnings;  // records kept despite warnings
  std::vector<DanglingRef> dangling;
};

struct Snapshot {
  // Each list is sorted by id; ids are unique within a list.
  std::vector<Work> works;
  std::vector<Author> authors;
  std::vector<Institution> institutions;
  std::vector<Venue> venues;
  std::vector<std::string> source_paths;
  int max_year = 0;
  IngestReport report;

  // Content equality: entity lists and max_year. Provenance (source_paths,
  // report) is not compared.
  friend bool operator==(const Snapshot& a, const Snapshot& b) {
    return a.works == b.works && a.authors == b.authors && a.institutions == b.institutions &&
           a.venues == b.venues && a.max_year == b.max_year;
  }
};

// Per-kind file paths; a missing entry means "no records of that kind".
struct SnapshotPaths {
  std::optional<std::filesystem::path> works;
  std::optional<std::filesystem::path> authors;
  std::optional<std::filesystem::path> institutions;
  std::optional<std::filesystem::path> venues;

  // Picks up the kind files present in `dir`.
  static SnapshotPaths in_directory(const std::filesystem::path& dir);
};

// Parses the four kind files (in parallel). Malformed lines and records with
// validation errors are skipped and reported; dangling references are
// reported and retained. Throws Error(UnreadableFile).
Snapshot parse_snapshot(const SnapshotPaths& paths);
Snapshot parse_snapshot_dir(const std::filesystem::path& dir);

struct KindCounts {
  std::array<std::size_t, 4> by_kind{};  // indexed by EntityKind

  std::size_t& operator[](EntityKind k) { return by_kind[static_cast<std::size_t>(k)]; }
  std::size_t operator[](EntityKind k) const { return by_kind[static_cast<std::size_t>(k)]; }
  std::size_t total() const { return by_kind[0] + by_kind[1] + by_kind[2] + by_kind[3]; }

  friend bool operator==(const KindCounts&, const KindCounts&) = default;
};

struct DeltaReport {
  KindCounts inserted;
  KindCounts updated;
  KindCounts unchanged;
  IngestReport issues;  // malformed / rejected delta lines (not counted above)
};

// Upserts every valid delta record by id (whole-record replacement), then
// recomputes dangling references and max_year.
std::pair<Snapshot, DeltaReport> apply_update(const Snapshot& base, const SnapshotPaths& delta);
std::pair<Snapshot, DeltaReport> apply_update_dir(const Snapshot& base,
                                                  const std::filesystem::path& delta_dir);

// Writes the four kind files into `dir` using encode_record.
void write_snapshot(const Snapshot& snapshot, const std::filesystem::path& dir);

// Re-derives the dangling-reference list and max_year from the entity lists.
void refresh_derived(Snapshot& snapshot);

}  // namespace scholargraph
