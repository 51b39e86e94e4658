#include "scholargraph/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

#include "log.hpp"
#include "scholargraph/error.hpp"

namespace scholargraph {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& why) { throw Error(ErrorCode::MalformedLine, why); }

const json* field(const json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

std::string get_string(const json& obj, const char* name, bool required = false) {
  const json* v = field(obj, name);
  if (!v) {
    if (required) malformed(std::string("missing field '") + name + "'");
    return {};
  }
  if (!v->is_string()) malformed(std::string("field '") + name + "' must be a string");
  return v->get<std::string>();
}

// Some upstream ids (mag) ship as numbers; accept both.
std::optional<std::string> get_opt_string(const json& obj, const char* name) {
  const json* v = field(obj, name);
  if (!v) return std::nullopt;
  if (v->is_string()) return v->get<std::string>();
  if (v->is_number_integer()) return std::to_string(v->get<std::int64_t>());
  malformed(std::string("field '") + name + "' must be a string");
}

std::int64_t get_int(const json& obj, const char* name) {
  const json* v = field(obj, name);
  if (!v) return 0;
  if (!v->is_number_integer()) malformed(std::string("field '") + name + "' must be an integer");
  return v->get<std::int64_t>();
}

std::vector<std::string> get_string_list(const json& obj, const char* name) {
  std::vector<std::string> out;
  const json* v = field(obj, name);
  if (!v) return out;
  if (!v->is_array()) malformed(std::string("field '") + name + "' must be an array");
  out.reserve(v->size());
  for (const auto& e : *v) {
    if (!e.is_string()) malformed(std::string("field '") + name + "' must hold strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

Work parse_work(const json& o) {
  Work w;
  w.id = get_string(o, "id", true);
  w.title = get_string(o, "title");
  const auto year = get_int(o, "publication_year");
  if (year < INT32_MIN || year > INT32_MAX) malformed("publication_year out of range");
  w.publication_year = static_cast<int>(year);
  w.venue = get_opt_string(o, "venue");
  w.authors = get_string_list(o, "authors");
  w.cited_by_count = get_int(o, "cited_by_count");
  w.doi = get_opt_string(o, "doi");
  w.mag_id = get_opt_string(o, "mag_id");
  if (const json* oa = field(o, "is_open_access")) {
    if (!oa->is_boolean()) malformed("field 'is_open_access' must be a boolean");
    w.is_open_access = oa->get<bool>();
  }
  if (const json* cs = field(o, "concepts")) {
    if (!cs->is_array()) malformed("field 'concepts' must be an array");
    for (const auto& c : *cs) {
      if (!c.is_object()) malformed("concept entries must be objects");
      Concept con;
      con.label = get_string(c, "label", true);
      const json* s = field(c, "score");
      if (!s || !s->is_number()) malformed("concept score must be a number");
      con.score = s->get<double>();
      w.concepts.push_back(std::move(con));
    }
  }
  w.abstract = get_opt_string(o, "abstract");
  if (!w.abstract) {
    if (const json* inv = field(o, "abstract_inverted_index")) {
      if (!inv->is_object()) malformed("field 'abstract_inverted_index' must be an object");
      std::map<std::string, std::vector<std::int64_t>> inverted;
      for (const auto& [token, positions] : inv->items()) {
        if (!positions.is_array()) malformed("inverted index positions must be arrays");
        auto& slot = inverted[token];
        for (const auto& p : positions) {
          if (!p.is_number_integer() || p.get<std::int64_t>() < 0) {
            malformed("inverted index positions must be non-negative integers");
          }
          slot.push_back(p.get<std::int64_t>());
        }
      }
      try {
        w.abstract = reconstruct_abstract(inverted);
      } catch (const Error& e) {
        malformed(e.what());
      }
    }
  }
  w.referenced_works = get_string_list(o, "referenced_works");
  return w;
}

Author parse_author(const json& o) {
  Author a;
  a.id = get_string(o, "id", true);
  a.display_name = get_string(o, "display_name");
  a.affiliation = get_opt_string(o, "affiliation");
  a.works_count = get_int(o, "works_count");
  a.cited_by_count = get_int(o, "cited_by_count");
  a.orcid = get_opt_string(o, "orcid");
  return a;
}

Institution parse_institution(const json& o) {
  Institution i;
  i.id = get_string(o, "id", true);
  i.display_name = get_string(o, "display_name");
  i.location = get_opt_string(o, "location");
  i.homepage = get_opt_string(o, "homepage");
  i.sector = get_opt_string(o, "sector");
  i.acronym = get_opt_string(o, "acronym");
  i.wikipedia = get_opt_string(o, "wikipedia");
  return i;
}

Venue parse_venue(const json& o) {
  Venue v;
  v.id = get_string(o, "id", true);
  v.display_name = get_string(o, "display_name");
  v.works_count = get_int(o, "works_count");
  v.cited_by_count = get_int(o, "cited_by_count");
  return v;
}

json opt(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

// Lines of one kind file, each either a record or an issue.
struct ParsedFile {
  std::vector<std::pair<std::size_t, EntityRecord>> records;  // (line number, record)
  std::vector<MalformedLine> malformed;
};

ParsedFile read_kind_file(EntityKind kind, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::UnreadableFile, "cannot open " + path.string());
  }
  ParsedFile out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      out.records.emplace_back(lineno, parse_record(kind, line));
    } catch (const Error& e) {
      out.malformed.push_back({path.string(), lineno, line.substr(0, 80), e.what()});
    }
  }
  if (in.bad()) {
    throw Error(ErrorCode::UnreadableFile, "read failure on " + path.string());
  }
  return out;
}

template <typename T>
std::vector<T>& list_for(Snapshot& s) {
  if constexpr (std::is_same_v<T, Work>) {
    return s.works;
  } else if constexpr (std::is_same_v<T, Author>) {
    return s.authors;
  } else if constexpr (std::is_same_v<T, Institution>) {
    return s.institutions;
  } else {
    return s.venues;
  }
}

template <typename T>
void sort_by_id(std::vector<T>& v) {
  std::sort(v.begin(), v.end(), [](const T& a, const T& b) { return a.id < b.id; });
}

template <typename T>
void load_kind_into(Snapshot& s, const std::filesystem::path& path, ParsedFile parsed) {
  auto& list = list_for<T>(s);
  std::unordered_set<std::string> seen;
  for (auto& m : parsed.malformed) s.report.malformed.push_back(std::move(m));
  for (auto& [lineno, rec] : parsed.records) {
    auto violations = validate_entity(rec);
    const std::string& id = id_of(rec);
    if (!has_errors(violations) && !seen.insert(id).second) {
      violations.push_back({"id", "unique", Severity::Error});
    }
    if (has_errors(violations)) {
      s.report.rejected.push_back({path.string(), lineno, id, std::move(violations)});
      continue;
    }
    list.push_back(std::get<T>(std::move(rec)));
  }
  sort_by_id(list);
}

YearLookup year_lookup(const std::vector<Work>& works) {
  return [&works](const std::string& id) -> std::optional<int> {
    auto it = std::lower_bound(works.begin(), works.end(), id,
                               [](const Work& w, const std::string& v) { return w.id < v; });
    if (it != works.end() && it->id == id) return it->publication_year;
    return std::nullopt;
  };
}

template <typename T>
bool contains_id(const std::vector<T>& sorted, const std::string& id) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), id,
                             [](const T& r, const std::string& v) { return r.id < v; });
  return it != sorted.end() && it->id == id;
}

const std::optional<std::filesystem::path>& path_for(const SnapshotPaths& p, EntityKind k) {
  switch (k) {
    case EntityKind::Work: return p.works;
    case EntityKind::Author: return p.authors;
    case EntityKind::Institution: return p.institutions;
    case EntityKind::Venue: return p.venues;
  }
  return p.works;
}

constexpr EntityKind kAllKinds[] = {EntityKind::Work, EntityKind::Author, EntityKind::Institution,
                                    EntityKind::Venue};

// Reads all present kind files concurrently.
std::array<std::optional<ParsedFile>, 4> read_all(const SnapshotPaths& paths) {
  std::array<std::future<ParsedFile>, 4> futures;
  for (EntityKind k : kAllKinds) {
    const auto& p = path_for(paths, k);
    if (p) futures[static_cast<int>(k)] = std::async(std::launch::async, read_kind_file, k, *p);
  }
  std::array<std::optional<ParsedFile>, 4> out;
  for (EntityKind k : kAllKinds) {
    auto& f = futures[static_cast<int>(k)];
    if (f.valid()) out[static_cast<int>(k)] = f.get();
  }
  return out;
}

void add_year_warnings(Snapshot& s, const std::vector<const Work*>& candidates,
                       const std::string& file) {
  const auto years = year_lookup(s.works);
  for (const Work* w : candidates) {
    auto v = validate_entity(*w, years);
    std::erase_if(v, [](const Violation& x) { return x.severity != Severity::Warning; });
    if (!v.empty()) s.report.warnings.push_back({file, 0, w->id, std::move(v)});
  }
}

}  // namespace

EntityRecord parse_record(EntityKind kind, std::string_view line) {
  json o;
  try {
    o = json::parse(line.begin(), line.end());
  } catch (const json::parse_error& e) {
    malformed(std::string("not a JSON object: ") + e.what());
  }
  if (!o.is_object()) malformed("not a JSON object");
  switch (kind) {
    case EntityKind::Work: return parse_work(o);
    case EntityKind::Author: return parse_author(o);
    case EntityKind::Institution: return parse_institution(o);
    case EntityKind::Venue: return parse_venue(o);
  }
  malformed("unknown kind");
}

std::string encode_record(const EntityRecord& record) {
  json o;
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        o["id"] = r.id;
        if constexpr (std::is_same_v<T, Work>) {
          o["title"] = r.title;
          o["publication_year"] = r.publication_year;
          o["venue"] = opt(r.venue);
          o["authors"] = r.authors;
          o["cited_by_count"] = r.cited_by_count;
          o["doi"] = opt(r.doi);
          o["mag_id"] = opt(r.mag_id);
          o["is_open_access"] = r.is_open_access;
          json cs = json::array();
          for (const auto& c : r.concepts) cs.push_back({{"label", c.label}, {"score", c.score}});
          o["concepts"] = std::move(cs);
          o["abstract"] = opt(r.abstract);
          o["referenced_works"] = r.referenced_works;
        } else if constexpr (std::is_same_v<T, Author>) {
          o["display_name"] = r.display_name;
          o["affiliation"] = opt(r.affiliation);
          o["works_count"] = r.works_count;
          o["cited_by_count"] = r.cited_by_count;
          o["orcid"] = opt(r.orcid);
        } else if constexpr (std::is_same_v<T, Institution>) {
          o["display_name"] = r.display_name;
          o["location"] = opt(r.location);
          o["homepage"] = opt(r.homepage);
          o["sector"] = opt(r.sector);
          o["acronym"] = opt(r.acronym);
          o["wikipedia"] = opt(r.wikipedia);
        } else {
          o["display_name"] = r.display_name;
          o["works_count"] = r.works_count;
          o["cited_by_count"] = r.cited_by_count;
        }
      },
      record);
  return o.dump();
}

std::string reconstruct_abstract(
    const std::map<std::string, std::vector<std::int64_t>>& inverted) {
  std::vector<std::pair<std::int64_t, const std::string*>> slots;
  for (const auto& [token, positions] : inverted) {
    for (auto p : positions) {
      if (p < 0) throw Error(ErrorCode::InvalidArgument, "negative abstract position");
      slots.emplace_back(p, &token);
    }
  }
  std::sort(slots.begin(), slots.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (i > 0 && slots[i].first == slots[i - 1].first) {
      throw Error(ErrorCode::DuplicatePosition,
                  "tokens '" + *slots[i - 1].second + "' and '" + *slots[i].second +
                      "' share position " + std::to_string(slots[i].first));
    }
    if (i > 0) out.push_back(' ');
    out += *slots[i].second;
  }
  return out;
}

std::string_view kind_file_name(EntityKind kind) {
  switch (kind) {
    case EntityKind::Work: return "works.jsonl";
    case EntityKind::Author: return "authors.jsonl";
    case EntityKind::Institution: return "institutions.jsonl";
    case EntityKind::Venue: return "venues.jsonl";
  }
  return "";
}

SnapshotPaths SnapshotPaths::in_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::UnreadableFile, dir.string() + " is not a directory");
  }
  SnapshotPaths p;
  auto pick = [&](EntityKind k) -> std::optional<std::filesystem::path> {
    auto f = dir / kind_file_name(k);
    if (std::filesystem::exists(f)) return f;
    return std::nullopt;
  };
  p.works = pick(EntityKind::Work);
  p.authors = pick(EntityKind::Author);
  p.institutions = pick(EntityKind::Institution);
  p.venues = pick(EntityKind::Venue);
  return p;
}

void refresh_derived(Snapshot& s) {
  s.report.dangling.clear();
  s.max_year = 0;
  for (const auto& w : s.works) {
    s.max_year = std::max(s.max_year, w.publication_year);
    for (const auto& a : w.authors) {
      if (!contains_id(s.authors, a)) s.report.dangling.push_back({w.id, "authors", a});
    }
    if (w.venue && !contains_id(s.venues, *w.venue)) {
      s.report.dangling.push_back({w.id, "venue", *w.venue});
    }
    for (const auto& r : w.referenced_works) {
      if (!contains_id(s.works, r)) s.report.dangling.push_back({w.id, "referenced_works", r});
    }
  }
  for (const auto& a : s.authors) {
    if (a.affiliation && !contains_id(s.institutions, *a.affiliation)) {
      s.report.dangling.push_back({a.id, "affiliation", *a.affiliation});
    }
  }
}

Snapshot parse_snapshot(const SnapshotPaths& paths) {
  auto parsed = read_all(paths);
  Snapshot s;
  for (EntityKind k : kAllKinds) {
    auto& pf = parsed[static_cast<int>(k)];
    if (!pf) continue;
    const auto& path = *path_for(paths, k);
    s.source_paths.push_back(path.string());
    switch (k) {
      case EntityKind::Work: load_kind_into<Work>(s, path, std::move(*pf)); break;
      case EntityKind::Author: load_kind_into<Author>(s, path, std::move(*pf)); break;
      case EntityKind::Institution: load_kind_into<Institution>(s, path, std::move(*pf)); break;
      case EntityKind::Venue: load_kind_into<Venue>(s, path, std::move(*pf)); break;
    }
  }
  std::vector<const Work*> all;
  for (const auto& w : s.works) all.push_back(&w);
  add_year_warnings(s, all, paths.works ? paths.works->string() : std::string());
  refresh_derived(s);
  log::info() << "parsed snapshot: " << s.works.size() << " works, " << s.authors.size()
              << " authors, " << s.institutions.size() << " institutions, " << s.venues.size()
              << " venues; " << s.report.malformed.size() << " malformed lines, "
              << s.report.rejected.size() << " rejected records, " << s.report.dangling.size()
              << " dangling refs";
  return s;
}

Snapshot parse_snapshot_dir(const std::filesystem::path& dir) {
  return parse_snapshot(SnapshotPaths::in_directory(dir));
}

namespace {

template <typename T>
void upsert_kind(Snapshot& s, const std::filesystem::path& path, ParsedFile parsed,
                 DeltaReport& report, std::vector<std::string>& touched_works) {
  const auto kind = static_cast<EntityKind>(EntityRecord(T{}).index());
  auto& list = list_for<T>(s);
  std::unordered_map<std::string, std::size_t> index;
  index.reserve(list.size() + parsed.records.size());
  for (std::size_t i = 0; i < list.size(); ++i) index.emplace(list[i].id, i);
  for (auto& m : parsed.malformed) report.issues.malformed.push_back(std::move(m));
  for (auto& [lineno, rec] : parsed.records) {
    auto violations = validate_entity(rec);
    if (has_errors(violations)) {
      report.issues.rejected.push_back({path.string(), lineno, id_of(rec), std::move(violations)});
      continue;
    }
    T record = std::get<T>(std::move(rec));
    if constexpr (std::is_same_v<T, Work>) touched_works.push_back(record.id);
    auto it = index.find(record.id);
    if (it == index.end()) {
      index.emplace(record.id, list.size());
      list.push_back(std::move(record));
      ++report.inserted[kind];
    } else if (list[it->second] == record) {
      ++report.unchanged[kind];
    } else {
      list[it->second] = std::move(record);
      ++report.updated[kind];
    }
  }
  sort_by_id(list);
}

}  // namespace

std::pair<Snapshot, DeltaReport> apply_update(const Snapshot& base, const SnapshotPaths& delta) {
  auto parsed = read_all(delta);
  Snapshot s = base;
  DeltaReport report;
  std::vector<std::string> touched;
  for (EntityKind k : kAllKinds) {
    auto& pf = parsed[static_cast<int>(k)];
    if (!pf) continue;
    const auto& path = *path_for(delta, k);
    if (std::find(s.source_paths.begin(), s.source_paths.end(), path.string()) ==
        s.source_paths.end()) {
      s.source_paths.push_back(path.string());
    }
    switch (k) {
      case EntityKind::Work: upsert_kind<Work>(s, path, std::move(*pf), report, touched); break;
      case EntityKind::Author: upsert_kind<Author>(s, path, std::move(*pf), report, touched); break;
      case EntityKind::Institution:
        upsert_kind<Institution>(s, path, std::move(*pf), report, touched);
        break;
      case EntityKind::Venue: upsert_kind<Venue>(s, path, std::move(*pf), report, touched); break;
    }
  }
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  std::vector<const Work*> candidates;
  for (const auto& id : touched) {
    auto it = std::lower_bound(s.works.begin(), s.works.end(), id,
                               [](const Work& w, const std::string& v) { return w.id < v; });
    candidates.push_back(&*it);
  }
  add_year_warnings(s, candidates, delta.works ? delta.works->string() : std::string());
  refresh_derived(s);
  log::info() << "applied delta: inserted " << report.inserted.total() << ", updated "
              << report.updated.total() << ", unchanged " << report.unchanged.total();
  return {std::move(s), std::move(report)};
}

std::pair<Snapshot, DeltaReport> apply_update_dir(const Snapshot& base,
                                                  const std::filesystem::path& delta_dir) {
  return apply_update(base, SnapshotPaths::in_directory(delta_dir));
}

void write_snapshot(const Snapshot& snapshot, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](EntityKind k, const auto& list) {
    const auto path = dir / kind_file_name(k);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::UnreadableFile, "cannot write " + path.string());
    for (const auto& r : list) out << encode_record(r) << '\n';
    if (!out) throw Error(ErrorCode::UnreadableFile, "write failure on " + path.string());
  };
  write(EntityKind::Work, snapshot.works);
  write(EntityKind::Author, snapshot.authors);
  write(EntityKind::Institution, snapshot.institutions);
  write(EntityKind::Venue, snapshot.venues);
}

}  // namespace scholargraph
