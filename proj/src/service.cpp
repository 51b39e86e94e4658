#include "scholargraph/service.hpp"

#include <algorithm>
#include <charconv>
#include <random>

#include "json.hpp"

#include "log.hpp"
#include "scholargraph/algorithms.hpp"
#include "scholargraph/error.hpp"
#include "scholargraph/recommend.hpp"
#include "scholargraph/text.hpp"

namespace scholargraph {

using nlohmann::json;

Corpus::Corpus(KnowledgeGraph g) : graph(std::move(g)), index(build_index(graph)) {}

namespace {

constexpr std::size_t kSnippetLength = 280;  // bytes, cut at a code point boundary

std::int64_t system_seconds() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string random_token() {
  static std::mutex mu;
  static std::random_device rd;
  std::lock_guard lock(mu);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(32);
  for (int i = 0; i < 4; ++i) {
    std::uint32_t v = rd();
    for (int j = 0; j < 8; ++j) {
      out.push_back(kHex[v & 0xF]);
      v >>= 4;
    }
  }
  return out;
}

std::size_t code_points(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::string snippet(const std::string& text) {
  if (text.size() <= kSnippetLength) return text;
  std::size_t cut = kSnippetLength;
  while (cut > 0 && (static_cast<unsigned char>(text[cut]) & 0xC0) == 0x80) --cut;
  return text.substr(0, cut) + "...";
}

json opt(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound:
    case ErrorCode::NoPath:
    case ErrorCode::NoRoute: return 404;
    case ErrorCode::Unauthorized: return 401;
    case ErrorCode::Forbidden: return 403;
    case ErrorCode::MethodNotAllowed: return 405;
    case ErrorCode::UnreadableFile:
    case ErrorCode::VersionMismatch:
    case ErrorCode::CorruptSnapshot: return 500;
    default: return 400;
  }
}

HttpResponse json_response(const json& body, int status = 200) {
  HttpResponse r;
  r.status = status;
  r.body = body.dump();
  return r;
}

HttpResponse error_response(ErrorCode code, const std::string& message) {
  return json_response({{"error", {{"code", error_code_name(code)}, {"message", message}}}},
                       status_for(code));
}

// ---- query parameters ----

class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& q) : q_(q) {}

  std::optional<std::string> str(const std::string& name) const {
    auto it = q_.find(name);
    if (it == q_.end()) return std::nullopt;
    return it->second;
  }
  std::string required(const std::string& name) const {
    auto v = str(name);
    if (!v || v->empty()) {
      throw Error(ErrorCode::InvalidArgument, "missing query parameter '" + name + "'");
    }
    return *v;
  }
  int integer(const std::string& name, int fallback) const {
    auto v = str(name);
    if (!v) return fallback;
    int out = 0;
    auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc() || ptr != v->data() + v->size()) {
      throw Error(ErrorCode::InvalidArgument, "parameter '" + name + "' must be an integer");
    }
    return out;
  }

 private:
  const std::map<std::string, std::string>& q_;
};

struct Paging {
  int page = 1;
  int page_size = kDefaultPageSize;
};

Paging paging(const Params& p) {
  Paging pg;
  pg.page = p.integer("page", 1);
  pg.page_size = std::min(p.integer("page_size", kDefaultPageSize), kMaxPageSize);
  if (pg.page < 1) throw Error(ErrorCode::InvalidArgument, "page must be >= 1");
  if (pg.page_size < 1) throw Error(ErrorCode::InvalidArgument, "page_size must be >= 1");
  return pg;
}

// Wraps the requested page of `items` as {total, page, page_size, items}.
json page_of(const json& items, const Paging& pg) {
  json out = {{"total", items.size()}, {"page", pg.page}, {"page_size", pg.page_size}};
  json slice = json::array();
  const std::size_t begin = static_cast<std::size_t>(pg.page - 1) * pg.page_size;
  for (std::size_t i = begin; i < items.size() && i < begin + pg.page_size; ++i) {
    slice.push_back(items[i]);
  }
  out["items"] = std::move(slice);
  return out;
}

// ---- entity rendering ----

json author_ref(const KnowledgeGraph& g, const std::string& id) {
  auto a = g.find(EntityKind::Author, id);
  return {{"id", id}, {"display_name", a ? json(g.authors()[*a].display_name) : json(nullptr)}};
}

json work_row(const KnowledgeGraph& g, NodeIndex w) {
  const Work& x = g.works()[w];
  json authors = json::array();
  for (const auto& a : x.authors) authors.push_back(author_ref(g, a));
  json venue = nullptr;
  if (x.venue) {
    auto v = g.find(EntityKind::Venue, *x.venue);
    venue = {{"id", *x.venue},
             {"display_name", v ? json(g.venues()[*v].display_name) : json(nullptr)}};
  }
  return {{"id", x.id},
          {"title", x.title},
          {"publication_year", x.publication_year},
          {"authors", std::move(authors)},
          {"venue", std::move(venue)},
          {"abstract_snippet", x.abstract ? json(snippet(*x.abstract)) : json(nullptr)},
          {"cited_by_count", x.cited_by_count},
          {"is_open_access", x.is_open_access}};
}

json work_page(const KnowledgeGraph& g, NodeIndex w) {
  const Work& x = g.works()[w];
  json out = work_row(g, w);
  out.erase("abstract_snippet");
  out["abstract"] = opt(x.abstract);
  out["doi"] = opt(x.doi);
  out["mag_id"] = opt(x.mag_id);
  json concepts = json::array();
  for (const auto& c : x.concepts) concepts.push_back({{"label", c.label}, {"score", c.score}});
  out["concepts"] = std::move(concepts);
  out["referenced_works"] = x.referenced_works;
  out["citing_works_count"] = g.cites_in(w).size();
  return out;
}

json author_row(const KnowledgeGraph& g, NodeIndex a) {
  const Author& x = g.authors()[a];
  json inst = nullptr;
  if (const auto i = g.author_institution(a); !i.empty()) {
    const Institution& in = g.institutions()[i.front()];
    inst = {{"id", in.id}, {"display_name", in.display_name}};
  }
  return {{"id", x.id},
          {"display_name", x.display_name},
          {"institution", std::move(inst)},
          {"works_count", x.works_count},
          {"cited_by_count", x.cited_by_count},
          {"orcid", opt(x.orcid)}};
}

json institution_row(const KnowledgeGraph& g, NodeIndex i) {
  const Institution& x = g.institutions()[i];
  return {{"id", x.id},
          {"display_name", x.display_name},
          {"location", opt(x.location)},
          {"homepage", opt(x.homepage)},
          {"sector", opt(x.sector)},
          {"acronym", opt(x.acronym)},
          {"wikipedia", opt(x.wikipedia)},
          {"works_count", g.institution_works_count(i)},
          {"cited_by_count", g.institution_cited_by_count(i)}};
}

json venue_row(const KnowledgeGraph& g, NodeIndex v) {
  const Venue& x = g.venues()[v];
  return {{"id", x.id},
          {"display_name", x.display_name},
          {"works_count", x.works_count},
          {"cited_by_count", x.cited_by_count}};
}

json row_for(const KnowledgeGraph& g, EntityKind kind, NodeIndex i) {
  switch (kind) {
    case EntityKind::Work: return work_row(g, i);
    case EntityKind::Author: return author_row(g, i);
    case EntityKind::Institution: return institution_row(g, i);
    case EntityKind::Venue: return venue_row(g, i);
  }
  return nullptr;
}

json comment_json(const KnowledgeGraph& g, const Comment& c) {
  auto a = g.find(EntityKind::Author, c.author_id);
  return {{"id", c.id},
          {"work_id", c.work_id},
          {"author_id", c.author_id},
          {"author_name", a ? json(g.authors()[*a].display_name) : json(nullptr)},
          {"body", c.body},
          {"created_at", c.created_at}};
}

// Works listing order for author and venue pages; citations by default.
std::vector<NodeIndex> sorted_works(const KnowledgeGraph& g, std::span<const NodeIndex> works,
                                    const std::optional<std::string>& sort) {
  std::vector<NodeIndex> v(works.begin(), works.end());
  const std::string s = sort.value_or("citations");
  if (s == "citations") {
    std::stable_sort(v.begin(), v.end(), [&](NodeIndex a, NodeIndex b) {
      return g.works()[a].cited_by_count > g.works()[b].cited_by_count;
    });
  } else if (s == "date") {
    std::stable_sort(v.begin(), v.end(), [&](NodeIndex a, NodeIndex b) {
      return g.works()[a].publication_year > g.works()[b].publication_year;
    });
  } else if (s == "title") {
    std::vector<std::string> keys(g.works().size());
    for (NodeIndex w : v) keys[w] = casefold(g.works()[w].title);
    std::stable_sort(v.begin(), v.end(), [&](NodeIndex a, NodeIndex b) { return keys[a] < keys[b]; });
  } else {
    throw Error(ErrorCode::InvalidSort, "sort must be one of title, date, citations");
  }
  return v;
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    auto next = path.find('/', pos);
    if (next == std::string_view::npos) next = path.size();
    if (next > pos) parts.emplace_back(path.substr(pos, next - pos));
    pos = next + 1;
  }
  return parts;
}

json parse_body(const std::string& body) {
  json j;
  try {
    j = json::parse(body.empty() ? std::string("{}") : body);
  } catch (const json::parse_error&) {
    throw Error(ErrorCode::BodyInvalid, "request body must be a JSON object");
  }
  if (!j.is_object()) throw Error(ErrorCode::BodyInvalid, "request body must be a JSON object");
  return j;
}

std::optional<std::string> body_string(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw Error(ErrorCode::BodyInvalid, std::string("field '") + name + "' must be a string");
  }
  return it->get<std::string>();
}

bool is_loopback(const std::string& addr) {
  return addr == "127.0.0.1" || addr == "::1" || addr == "::ffff:127.0.0.1" ||
         addr == "localhost";
}

[[noreturn]] void no_route(const std::string& path) {
  throw Error(ErrorCode::NoRoute, "no route for " + path);
}

}  // namespace

Service::Service(KnowledgeGraph graph, std::optional<std::filesystem::path> graph_path,
                 Clock clock)
    : corpus_(std::make_shared<const Corpus>(std::move(graph))),
      graph_path_(std::move(graph_path)),
      clock_(clock ? std::move(clock) : Clock(system_seconds)) {}

std::shared_ptr<const Corpus> Service::corpus() const {
  std::lock_guard lock(corpus_mu_);
  return corpus_;
}

void Service::swap_graph(KnowledgeGraph graph) {
  auto next = std::make_shared<const Corpus>(std::move(graph));
  std::lock_guard lock(corpus_mu_);
  corpus_ = std::move(next);
}

std::shared_ptr<const Corpus> Service::reload(const std::optional<std::filesystem::path>& path) {
  const auto source = path ? path : graph_path_;
  if (!source) throw Error(ErrorCode::InvalidArgument, "no graph path to reload from");
  auto next = std::make_shared<const Corpus>(load_graph(*source));
  {
    std::lock_guard lock(corpus_mu_);
    corpus_ = next;
  }
  log::info() << "reloaded graph from " << source->string();
  return next;
}

std::vector<AuthorCandidate> Service::login(const std::string& name,
                                            const std::optional<std::string>& affiliation) const {
  const auto c = corpus();
  return disambiguate_author(c->index, c->graph, name, affiliation);
}

Session Service::claim(const std::string& author_id) {
  const auto c = corpus();
  c->graph.require(EntityKind::Author, author_id);
  Session s;
  s.author_id = author_id;
  s.created_at = clock_();
  std::unique_lock lock(sessions_mu_);
  do {
    s.token = random_token();
  } while (sessions_.contains(s.token));
  sessions_.emplace(s.token, s);
  return s;
}

Session Service::session(const std::string& token) const {
  std::shared_lock lock(sessions_mu_);
  auto it = sessions_.find(token);
  if (token.empty() || it == sessions_.end()) {
    throw Error(ErrorCode::Unauthorized, "a valid X-Session-Token is required");
  }
  return it->second;
}

Comment Service::add_comment(const std::string& token, const std::string& work_id,
                             const std::string& body) {
  const Session s = session(token);
  corpus()->graph.require(EntityKind::Work, work_id);
  const std::size_t length = code_points(body);
  if (length == 0 || length > kMaxCommentLength) {
    throw Error(ErrorCode::BodyInvalid, "comment body must be 1-4096 characters");
  }
  std::unique_lock lock(comments_mu_);
  auto& thread = comments_[work_id];
  Comment c;
  c.id = thread.empty() ? 1 : thread.back().id + 1;
  c.work_id = work_id;
  c.author_id = s.author_id;
  c.body = body;
  // Never earlier than the previous comment, so (created_at, id) order holds.
  c.created_at = std::max(clock_(), thread.empty() ? std::int64_t{0} : thread.back().created_at);
  thread.push_back(c);
  return c;
}

std::vector<Comment> Service::list_comments(const std::string& work_id) const {
  corpus()->graph.require(EntityKind::Work, work_id);
  std::shared_lock lock(comments_mu_);
  auto it = comments_.find(work_id);
  if (it == comments_.end()) return {};
  return it->second;
}

HttpResponse Service::handle(const HttpRequest& request) {
  try {
    return route(request);
  } catch (const Error& e) {
    return error_response(e.code(), e.what());
  } catch (const std::exception& e) {
    log::error() << "internal error on " << request.path << ": " << e.what();
    HttpResponse r = json_response(
        {{"error", {{"code", "INTERNAL"}, {"message", "internal server error"}}}}, 500);
    return r;
  }
}

HttpResponse Service::route(const HttpRequest& req) {
  const auto parts = split_path(req.path);
  if (parts.empty() || parts[0] != "api") no_route(req.path);
  const Params params(req.query);
  const bool get = req.method == "GET" || req.method == "HEAD";
  const bool post = req.method == "POST";
  auto token = [&]() -> std::string {
    auto it = req.headers.find("x-session-token");
    return it == req.headers.end() ? std::string() : it->second;
  };
  auto expect = [&](bool ok) {
    if (!ok) throw Error(ErrorCode::MethodNotAllowed, req.method + " not allowed on " + req.path);
  };

  // Snapshot once: the whole request sees a single graph.
  const auto corpus_ref = corpus();
  const KnowledgeGraph& g = corpus_ref->graph;
  const std::size_t n = parts.size();
  const std::string& head = n > 1 ? parts[1] : std::string();

  if (head == "search" && n == 2) {
    expect(get);
    const auto crit = parse_criterion(params.required("type"));
    if (!crit) throw Error(ErrorCode::InvalidArgument, "type must be works|authors|institutions|venues");
    SearchQuery q;
    q.criterion = *crit;
    q.text = params.str("q").value_or("");
    const Paging pg = paging(params);
    q.page = pg.page;
    q.page_size = pg.page_size;
    if (auto s = params.str("sort")) {
      const auto order = parse_sort_order(*s);
      if (!order) throw Error(ErrorCode::InvalidSort, "unknown sort '" + *s + "'");
      q.sort = *order;
    }
    const auto page = search(corpus_ref->index, g, q);
    json items = json::array();
    for (NodeIndex i : page.items) items.push_back(row_for(g, page.kind, i));
    return json_response({{"total", page.total_hits},
                          {"page", page.page},
                          {"page_size", page.page_size},
                          {"type", criterion_name(q.criterion)},
                          {"sort", sort_order_name(q.sort)},
                          {"items", std::move(items)}});
  }

  if (head == "works" && n >= 3) {
    const std::string& id = parts[2];
    if (n == 4 && parts[3] == "comments" && post) {
      const json body = parse_body(req.body);
      const auto text = body_string(body, "body");
      if (!text) throw Error(ErrorCode::BodyInvalid, "field 'body' is required");
      const Comment c = add_comment(token(), id, *text);
      return json_response(comment_json(g, c), 201);
    }
    expect(get);
    const NodeIndex w = g.require(EntityKind::Work, id);
    if (n == 3) return json_response(work_page(g, w));
    if (n == 4 && parts[3] == "citations") {
      json items = json::array();
      for (NodeIndex c : g.cites_in(w)) items.push_back(work_row(g, c));
      return json_response(page_of(items, paging(params)));
    }
    if (n == 4 && parts[3] == "similar") {
      json items = json::array();
      for (const auto& s : similar_works(g, id, params.integer("k", 10))) {
        json row = work_row(g, *g.find(EntityKind::Work, s.id));
        row["similarity"] = s.score;
        items.push_back(std::move(row));
      }
      return json_response(page_of(items, paging(params)));
    }
    if (n == 4 && parts[3] == "comments") {
      json items = json::array();
      for (const auto& c : list_comments(id)) items.push_back(comment_json(g, c));
      return json_response(page_of(items, paging(params)));
    }
    no_route(req.path);
  }

  if (head == "authors" && n >= 3) {
    expect(get);
    const std::string& id = parts[2];
    const NodeIndex a = g.require(EntityKind::Author, id);
    if (n == 3) return json_response(author_row(g, a));
    if (n == 4 && parts[3] == "works") {
      json items = json::array();
      for (NodeIndex w : sorted_works(g, g.author_works(a), params.str("sort"))) {
        items.push_back(work_row(g, w));
      }
      return json_response(page_of(items, paging(params)));
    }
    if (n == 4 && parts[3] == "coauthors") {
      json items = json::array();
      for (const auto& c : coauthor_network(g, id)) {
        json row = author_row(g, *g.find(EntityKind::Author, c.author_id));
        row["shared_work_count"] = c.shared_work_count;
        row["shared_works"] = c.shared_works;
        items.push_back(std::move(row));
      }
      return json_response(page_of(items, paging(params)));
    }
    if (n == 4 && parts[3] == "focus") {
      json items = json::array();
      for (const auto& f : focus_areas(g, id, params.integer("k", 10))) {
        items.push_back({{"label", f.label}, {"score", f.score}});
      }
      return json_response(page_of(items, paging(params)));
    }
    no_route(req.path);
  }

  if (head == "institutions" && n >= 3) {
    expect(get);
    const NodeIndex i = g.require(EntityKind::Institution, parts[2]);
    if (n == 3) return json_response(institution_row(g, i));
    if (n == 4 && parts[3] == "authors") {
      const auto members = g.institution_authors(i);
      std::vector<NodeIndex> v(members.begin(), members.end());
      std::stable_sort(v.begin(), v.end(), [&](NodeIndex x, NodeIndex y) {
        return g.authors()[x].cited_by_count > g.authors()[y].cited_by_count;
      });
      json items = json::array();
      for (NodeIndex a : v) items.push_back(author_row(g, a));
      return json_response(page_of(items, paging(params)));
    }
    no_route(req.path);
  }

  if (head == "venues" && n >= 3) {
    expect(get);
    const NodeIndex v = g.require(EntityKind::Venue, parts[2]);
    if (n == 3) return json_response(venue_row(g, v));
    if (n == 4 && parts[3] == "works") {
      json items = json::array();
      for (NodeIndex w : sorted_works(g, g.venue_works(v), params.str("sort"))) {
        items.push_back(work_row(g, w));
      }
      return json_response(page_of(items, paging(params)));
    }
    no_route(req.path);
  }

  if (head == "path" && n == 2) {
    expect(get);
    const auto from = params.required("from");
    const auto to = params.required("to");
    const auto path = shortest_authorship_path(g, from, to);
    if (!path) {
      throw Error(ErrorCode::NoPath, "no authorship path between " + from + " and " + to);
    }
    json nodes = json::array();
    for (const auto& node : path->nodes) {
      const NodeIndex i = *g.find(node.kind, node.value);
      nodes.push_back({{"kind", entity_kind_name(node.kind)},
                       {"id", node.value},
                       {"label", node.kind == EntityKind::Author ? g.authors()[i].display_name
                                                                 : g.works()[i].title}});
    }
    return json_response({{"from", from},
                          {"to", to},
                          {"nodes", std::move(nodes)},
                          {"hops", path->hops()},
                          {"coauthor_steps", path->coauthor_steps()}});
  }

  if (head == "common" && n == 2) {
    expect(get);
    json items = json::array();
    for (const auto& id : common_connections(g, params.required("from"), params.required("to"))) {
      items.push_back(author_row(g, *g.find(EntityKind::Author, id)));
    }
    return json_response(page_of(items, paging(params)));
  }

  if (head == "recommend" && n == 4) {
    expect(get);
    const std::string& author = parts[3];
    json items = json::array();
    if (parts[2] == "institution") {
      for (const auto& r : same_institution_researchers(g, author)) {
        items.push_back(author_row(g, *g.find(EntityKind::Author, r.author_id)));
      }
    } else if (parts[2] == "topics") {
      for (const auto& t : trending_subtopics(g, author, params.integer("window", 3),
                                              params.integer("k", 10))) {
        items.push_back({{"label", t.label}, {"count", t.count}});
      }
    } else if (parts[2] == "collaborators") {
      for (const auto& r : recommend_collaborators(g, author, params.integer("k", 10))) {
        json row = author_row(g, *g.find(EntityKind::Author, r.id));
        row["score"] = r.score;
        items.push_back(std::move(row));
      }
    } else {
      no_route(req.path);
    }
    return json_response(page_of(items, paging(params)));
  }

  if (head == "login" && n == 2) {
    expect(post);
    const json body = parse_body(req.body);
    const auto name = body_string(body, "name").value_or("");
    json items = json::array();
    for (const auto& c : login(name, body_string(body, "affiliation"))) {
      items.push_back({{"id", c.author_id},
                       {"display_name", c.name},
                       {"institution_id", opt(c.institution_id)},
                       {"institution_name", opt(c.institution_name)},
                       {"works_count", c.works_count},
                       {"cited_by_count", c.cited_by_count},
                       {"affiliation_match", c.affiliation_match}});
    }
    return json_response(page_of(items, paging(params)));
  }

  if (head == "claim" && n == 2) {
    expect(post);
    const json body = parse_body(req.body);
    const auto id = body_string(body, "author_id");
    if (!id) throw Error(ErrorCode::BodyInvalid, "field 'author_id' is required");
    const Session s = claim(*id);
    json out = author_row(g, *g.find(EntityKind::Author, s.author_id));
    return json_response({{"token", s.token},
                          {"author_id", s.author_id},
                          {"created_at", s.created_at},
                          {"author", std::move(out)}},
                         201);
  }

  if (head == "admin" && n == 3 && parts[2] == "reload") {
    expect(post);
    if (!is_loopback(req.remote_addr)) {
      throw Error(ErrorCode::Forbidden, "reload is only accepted from the local host");
    }
    session(token());
    const json body = parse_body(req.body);
    std::optional<std::filesystem::path> source;
    if (auto p = body_string(body, "graph")) source = *p;
    const auto next = reload(source);
    const auto& st = next->graph.stats();
    return json_response({{"nodes", st.nodes},
                          {"edges", st.edge_total()},
                          {"dropped_dangling", st.dropped_dangling},
                          {"max_year", st.max_year}});
  }

  no_route(req.path);
}

}  // namespace scholargraph
