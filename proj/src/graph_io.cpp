// Binary graph snapshot:
//   "SGKG" | u32 version | u64 payload length | payload | u64 FNV-1a(payload)
// All integers little-endian. Strings are u32 length + bytes; optionals a
// presence byte; doubles their IEEE-754 bit pattern.

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "log.hpp"
#include "scholargraph/error.hpp"
#include "scholargraph/graph.hpp"

namespace scholargraph {
namespace {

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Writer {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    buf_.append(s);
  }
  void opt(const std::optional<std::string>& s) {
    u8(s ? 1 : 0);
    if (s) str(*s);
  }
  void strs(const std::vector<std::string>& v) {
    u64(v.size());
    for (const auto& s : v) str(s);
  }
  template <typename T>
  void u32s(const std::vector<T>& v) {
    u64(v.size());
    for (auto x : v) u32(static_cast<std::uint32_t>(x));
  }
  void adj(const Adjacency& a) {
    u32s(a.offsets);
    u32s(a.targets);
  }
  std::string take() { return std::move(buf_); }

 private:
  std::string buf_;
};

[[noreturn]] void corrupt(const std::string& why) {
  throw Error(ErrorCode::CorruptSnapshot, "corrupt graph snapshot: " + why);
}

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(data_[pos_++]);
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(data_[pos_++])) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(data_[pos_++])) << (8 * i);
    return v;
  }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint32_t n = u32();
    need(n);
    std::string s(data_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  std::optional<std::string> opt() {
    const auto flag = u8();
    if (flag > 1) corrupt("bad optional flag");
    if (!flag) return std::nullopt;
    return str();
  }
  std::size_t count(std::size_t min_bytes_each) {
    const std::uint64_t n = u64();
    if (min_bytes_each > 0 && n > (data_.size() - pos_) / min_bytes_each) corrupt("bad length");
    return static_cast<std::size_t>(n);
  }
  std::vector<std::string> strs() {
    std::vector<std::string> v(count(4));
    for (auto& s : v) s = str();
    return v;
  }
  std::vector<std::uint32_t> u32s() {
    std::vector<std::uint32_t> v(count(4));
    for (auto& x : v) x = u32();
    return v;
  }
  Adjacency adj(std::size_t rows, std::size_t target_bound) {
    Adjacency a;
    a.offsets = u32s();
    a.targets = u32s();
    if (a.offsets.size() != rows + 1 || a.offsets.front() != 0 ||
        a.offsets.back() != a.targets.size()) {
      corrupt("adjacency shape");
    }
    for (std::size_t r = 0; r < rows; ++r) {
      if (a.offsets[r] > a.offsets[r + 1]) corrupt("adjacency offsets");
      for (std::uint32_t k = a.offsets[r]; k < a.offsets[r + 1]; ++k) {
        if (a.targets[k] >= target_bound) corrupt("adjacency target out of range");
        if (k > a.offsets[r] && a.targets[k - 1] >= a.targets[k]) corrupt("adjacency order");
      }
    }
    return a;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) {
    if (data_.size() - pos_ < n) corrupt("truncated payload");
  }
  std::string_view data_;
  std::size_t pos_ = 0;
};

void write_work(Writer& w, const Work& x) {
  w.str(x.id);
  w.str(x.title);
  w.i64(x.publication_year);
  w.opt(x.venue);
  w.strs(x.authors);
  w.i64(x.cited_by_count);
  w.opt(x.doi);
  w.opt(x.mag_id);
  w.u8(x.is_open_access ? 1 : 0);
  w.u64(x.concepts.size());
  for (const auto& c : x.concepts) {
    w.str(c.label);
    w.f64(c.score);
  }
  w.opt(x.abstract);
  w.strs(x.referenced_works);
}

Work read_work(Reader& r) {
  Work x;
  x.id = r.str();
  x.title = r.str();
  x.publication_year = static_cast<int>(r.i64());
  x.venue = r.opt();
  x.authors = r.strs();
  x.cited_by_count = r.i64();
  x.doi = r.opt();
  x.mag_id = r.opt();
  x.is_open_access = r.u8() != 0;
  x.concepts.resize(r.count(12));
  for (auto& c : x.concepts) {
    c.label = r.str();
    c.score = r.f64();
  }
  x.abstract = r.opt();
  x.referenced_works = r.strs();
  return x;
}

void write_author(Writer& w, const Author& x) {
  w.str(x.id);
  w.str(x.display_name);
  w.opt(x.affiliation);
  w.i64(x.works_count);
  w.i64(x.cited_by_count);
  w.opt(x.orcid);
}

Author read_author(Reader& r) {
  Author x;
  x.id = r.str();
  x.display_name = r.str();
  x.affiliation = r.opt();
  x.works_count = r.i64();
  x.cited_by_count = r.i64();
  x.orcid = r.opt();
  return x;
}

void write_institution(Writer& w, const Institution& x) {
  w.str(x.id);
  w.str(x.display_name);
  w.opt(x.location);
  w.opt(x.homepage);
  w.opt(x.sector);
  w.opt(x.acronym);
  w.opt(x.wikipedia);
}

Institution read_institution(Reader& r) {
  Institution x;
  x.id = r.str();
  x.display_name = r.str();
  x.location = r.opt();
  x.homepage = r.opt();
  x.sector = r.opt();
  x.acronym = r.opt();
  x.wikipedia = r.opt();
  return x;
}

void write_venue(Writer& w, const Venue& x) {
  w.str(x.id);
  w.str(x.display_name);
  w.i64(x.works_count);
  w.i64(x.cited_by_count);
}

Venue read_venue(Reader& r) {
  Venue x;
  x.id = r.str();
  x.display_name = r.str();
  x.works_count = r.i64();
  x.cited_by_count = r.i64();
  return x;
}

template <typename T, typename F>
void write_list(Writer& w, const std::vector<T>& list, F write_one) {
  w.u64(list.size());
  for (const auto& x : list) write_one(w, x);
}

template <typename T, typename F>
std::vector<T> read_list(Reader& r, F read_one) {
  std::vector<T> v(r.count(8));
  for (auto& x : v) x = read_one(r);
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i - 1].id < v[i].id)) corrupt("entity order");
  }
  return v;
}

}  // namespace

std::uint64_t persist_graph(const KnowledgeGraph& g, const std::filesystem::path& path) {
  Writer w;
  write_list(w, g.works_, write_work);
  write_list(w, g.authors_, write_author);
  write_list(w, g.institutions_, write_institution);
  write_list(w, g.venues_, write_venue);
  w.strs(g.concept_labels_);
  for (const Adjacency* a :
       {&g.work_authors_, &g.author_works_, &g.work_venue_, &g.venue_works_,
        &g.author_institution_, &g.institution_authors_, &g.cites_out_, &g.cites_in_,
        &g.work_concepts_, &g.concept_works_}) {
    w.adj(*a);
  }
  w.u64(g.work_concept_scores_.size());
  for (double s : g.work_concept_scores_) w.f64(s);
  w.u64(g.institution_works_.size());
  for (std::size_t i = 0; i < g.institution_works_.size(); ++i) {
    w.i64(g.institution_works_[i]);
    w.i64(g.institution_cited_[i]);
  }
  w.u64(g.stats_.nodes);
  for (auto e : g.stats_.edges) w.u64(e);
  w.u64(g.stats_.dropped_dangling);
  w.i64(g.stats_.max_year);
  const std::string payload = w.take();

  Writer head;
  head.u8(kGraphMagic[0]);
  head.u8(kGraphMagic[1]);
  head.u8(kGraphMagic[2]);
  head.u8(kGraphMagic[3]);
  head.u32(kGraphFormatVersion);
  head.u64(payload.size());
  Writer tail;
  tail.u64(fnv1a(payload));
  const std::string h = head.take();
  const std::string t = tail.take();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::UnreadableFile, "cannot write " + path.string());
  out.write(h.data(), static_cast<std::streamsize>(h.size()));
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  out.write(t.data(), static_cast<std::streamsize>(t.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::UnreadableFile, "write failure on " + path.string());
  return h.size() + payload.size() + t.size();
}

KnowledgeGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::UnreadableFile, "cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::UnreadableFile, "read failure on " + path.string());

  if (bytes.size() < 8 || std::memcmp(bytes.data(), kGraphMagic, 4) != 0) {
    throw Error(ErrorCode::VersionMismatch, path.string() + " is not a graph snapshot");
  }
  Reader head(std::string_view(bytes).substr(4, 4));
  const std::uint32_t version = head.u32();
  if (version != kGraphFormatVersion) {
    throw Error(ErrorCode::VersionMismatch, "graph snapshot format version " +
                                                std::to_string(version) + ", expected " +
                                                std::to_string(kGraphFormatVersion));
  }
  if (bytes.size() < 24) corrupt("file too short");
  const std::uint64_t length = Reader(std::string_view(bytes).substr(8, 8)).u64();
  if (length != bytes.size() - 24) corrupt("payload length mismatch");
  const std::string payload = bytes.substr(16, length);
  const std::uint64_t checksum = Reader(std::string_view(bytes).substr(16 + length)).u64();
  if (checksum != fnv1a(payload)) corrupt("checksum mismatch");

  KnowledgeGraph g;
  Reader r(payload);
  g.works_ = read_list<Work>(r, read_work);
  g.authors_ = read_list<Author>(r, read_author);
  g.institutions_ = read_list<Institution>(r, read_institution);
  g.venues_ = read_list<Venue>(r, read_venue);
  g.concept_labels_ = r.strs();
  const std::size_t nw = g.works_.size(), na = g.authors_.size(), ni = g.institutions_.size(),
                    nv = g.venues_.size(), nc = g.concept_labels_.size();
  g.work_authors_ = r.adj(nw, na);
  g.author_works_ = r.adj(na, nw);
  g.work_venue_ = r.adj(nw, nv);
  g.venue_works_ = r.adj(nv, nw);
  g.author_institution_ = r.adj(na, ni);
  g.institution_authors_ = r.adj(ni, na);
  g.cites_out_ = r.adj(nw, nw);
  g.cites_in_ = r.adj(nw, nw);
  g.work_concepts_ = r.adj(nw, nc);
  g.concept_works_ = r.adj(nc, nw);
  g.work_concept_scores_.resize(r.count(8));
  for (auto& s : g.work_concept_scores_) s = r.f64();
  if (g.work_concept_scores_.size() != g.work_concepts_.edge_count()) corrupt("concept scores");
  if (r.count(16) != ni) corrupt("institution stats");
  g.institution_works_.resize(ni);
  g.institution_cited_.resize(ni);
  for (std::size_t i = 0; i < ni; ++i) {
    g.institution_works_[i] = r.i64();
    g.institution_cited_[i] = r.i64();
  }
  g.stats_.nodes = r.u64();
  for (auto& e : g.stats_.edges) e = r.u64();
  g.stats_.dropped_dangling = r.u64();
  g.stats_.max_year = static_cast<int>(r.i64());
  if (!r.done()) corrupt("trailing bytes");
  g.rebuild_lookup();
  log::info() << "loaded graph " << path.string() << ": " << g.stats_.nodes << " nodes";
  return g;
}

}  // namespace scholargraph
