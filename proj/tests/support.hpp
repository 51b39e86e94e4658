#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "scholargraph/graph.hpp"
#include "scholargraph/ingest.hpp"

#ifndef SCHOLARGRAPH_FIXTURE_DIR
#error "SCHOLARGRAPH_FIXTURE_DIR must point at fixtures/tiny"
#endif

namespace sgtest {

using namespace scholargraph;

inline std::filesystem::path fixture_dir() { return SCHOLARGRAPH_FIXTURE_DIR; }

inline const Snapshot& tiny_snapshot() {
  static const Snapshot s = parse_snapshot_dir(fixture_dir());
  return s;
}

inline const KnowledgeGraph& tiny_graph() {
  static const KnowledgeGraph g = build_graph(tiny_snapshot());
  return g;
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<unsigned> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("sgtest-" + std::to_string(stamp) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string padded(char prefix, std::size_t i, int width = 3) {
  std::string n = std::to_string(i);
  while (static_cast<int>(n.size()) < width) n.insert(n.begin(), '0');
  return std::string(1, prefix) + n;
}

// Title vocabulary with shared prefixes and non-ASCII case pairs.
inline const std::vector<std::string>& vocabulary() {
  static const std::vector<std::string> words = {
      "Graph",  "graphs",   "Neural",  "Ranking", "rank",    "Models",   "Knowledge",
      "Embeddings", "Quantum", "Parsing", "Über",  "ÜBERSICHT", "straße", "Études",
      "Learning",   "learned", "Search",  "MIT",   "Zürich",   "data",    "Datasets"};
  return words;
}

inline const std::vector<std::string>& concept_vocabulary() {
  static const std::vector<std::string> labels = {"graph",   "ranking", "neural", "embeddings",
                                                  "parsing", "search",  "vision", "logic"};
  return labels;
}

struct CorpusShape {
  std::size_t works = 20;
  std::size_t authors = 10;
  std::size_t institutions = 3;
  std::size_t venues = 3;
  double dangling_rate = 0.05;
};

inline std::string random_title(std::mt19937_64& rng, std::size_t min_words = 1,
                                std::size_t max_words = 4) {
  const auto& v = vocabulary();
  std::uniform_int_distribution<std::size_t> len(min_words, max_words), pick(0, v.size() - 1);
  std::string t;
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) {
    if (i) t += (rng() % 5 == 0) ? "-" : " ";
    t += v[pick(rng)];
  }
  return t;
}

// Random, valid snapshot: every record passes validation; some references
// dangle when dangling_rate > 0.
inline Snapshot random_snapshot(std::mt19937_64& rng, const CorpusShape& shape) {
  Snapshot s;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto chance = [&](double p) { return unit(rng) < p; };
  for (std::size_t i = 0; i < shape.institutions; ++i) {
    Institution x;
    x.id = padded('I', i);
    x.display_name = random_title(rng, 1, 3);
    if (chance(0.5)) x.acronym = random_title(rng, 1, 1);
    if (chance(0.5)) x.location = "City " + std::to_string(i);
    s.institutions.push_back(std::move(x));
  }
  for (std::size_t i = 0; i < shape.venues; ++i) {
    Venue v;
    v.id = padded('V', i);
    v.display_name = random_title(rng, 1, 2);
    v.works_count = static_cast<std::int64_t>(rng() % 50);
    v.cited_by_count = static_cast<std::int64_t>(rng() % 500);
    s.venues.push_back(std::move(v));
  }
  for (std::size_t i = 0; i < shape.authors; ++i) {
    Author a;
    a.id = padded('A', i);
    a.display_name = random_title(rng, 1, 3);
    if (shape.institutions && chance(0.8)) {
      a.affiliation = padded('I', rng() % shape.institutions);
    } else if (chance(shape.dangling_rate)) {
      a.affiliation = "I999";
    }
    a.cited_by_count = static_cast<std::int64_t>(rng() % 100);
    s.authors.push_back(std::move(a));
  }
  const auto& labels = concept_vocabulary();
  for (std::size_t i = 0; i < shape.works; ++i) {
    Work w;
    w.id = padded('W', i);
    w.title = random_title(rng);
    w.publication_year = 2000 + static_cast<int>(rng() % 24);
    if (shape.venues && chance(0.8)) w.venue = padded('V', rng() % shape.venues);
    const std::size_t n_auth = 1 + rng() % 3;
    for (std::size_t k = 0; k < n_auth; ++k) {
      std::string id = shape.authors ? padded('A', rng() % shape.authors) : "A999";
      if (chance(shape.dangling_rate)) id = "A9" + std::to_string(k) + "9";
      if (std::find(w.authors.begin(), w.authors.end(), id) == w.authors.end()) {
        w.authors.push_back(id);
      }
    }
    w.cited_by_count = static_cast<std::int64_t>(rng() % 40);
    w.is_open_access = chance(0.3);
    if (chance(0.3)) w.doi = "10.1/" + std::to_string(rng() % 100000);
    if (chance(0.2)) w.abstract = random_title(rng, 3, 12);
    const std::size_t n_con = rng() % 4;
    std::vector<std::string> chosen;
    while (chosen.size() < n_con) {
      const auto& l = labels[rng() % labels.size()];
      if (std::find(chosen.begin(), chosen.end(), l) == chosen.end()) chosen.push_back(l);
    }
    for (auto& l : chosen) {
      w.concepts.push_back({l, static_cast<double>(1 + rng() % 100) / 100.0});
    }
    const std::size_t n_ref = i ? rng() % 3 : 0;
    for (std::size_t k = 0; k < n_ref; ++k) {
      std::string ref = padded('W', rng() % i);
      if (chance(shape.dangling_rate)) ref = "W999";
      if (std::find(w.referenced_works.begin(), w.referenced_works.end(), ref) ==
          w.referenced_works.end()) {
        w.referenced_works.push_back(ref);
      }
    }
    s.works.push_back(std::move(w));
  }
  refresh_derived(s);
  return s;
}

}  // namespace sgtest
