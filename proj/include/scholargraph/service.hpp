#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "scholargraph/graph.hpp"
#include "scholargraph/search.hpp"

namespace scholargraph {

// Graph plus its index; swapped as a unit on reload.
struct Corpus {
  KnowledgeGraph graph;
  SearchIndex index;

  explicit Corpus(KnowledgeGraph g);
};

struct Session {
  std::string token;  // 128 random bits, hex
  std::string author_id;
  std::int64_t created_at = 0;  // UTC seconds
};

struct Comment {
  std::int64_t id = 0;  // per work, from 1
  std::string work_id;
  std::string author_id;
  std::string body;
  std::int64_t created_at = 0;
};

inline constexpr std::size_t kMaxCommentLength = 4096;  // code points
inline constexpr int kMaxPageSize = 100;

struct HttpRequest {
  std::string method;  // "GET", "POST"
  std::string path;  // decoded, e.g. "/api/works/W1"
  std::map<std::string, std::string> query;  // decoded
  std::map<std::string, std::string> headers;  // lowercase names
  std::string body;
  std::string remote_addr = "127.0.0.1";
};

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json; charset=utf-8";
};

// All /api routes over a shared read-only corpus, with in-memory sessions and
// discussion threads. Sessions and comments are lost on restart.
class Service {
 public:
  using Clock = std::function<std::int64_t()>;  // UTC seconds

  explicit Service(KnowledgeGraph graph, std::optional<std::filesystem::path> graph_path = {},
                   Clock clock = {});

  HttpResponse handle(const HttpRequest& request);

  std::shared_ptr<const Corpus> corpus() const;
  // Atomically replaces the corpus; in-flight requests finish on the old one.
  void swap_graph(KnowledgeGraph graph);
  // Reloads from `path`, or from the startup graph path when empty.
  std::shared_ptr<const Corpus> reload(const std::optional<std::filesystem::path>& path = {});

  std::vector<AuthorCandidate> login(const std::string& name,
                                     const std::optional<std::string>& affiliation) const;
  Session claim(const std::string& author_id);
  // Throws Error(Unauthorized) for unknown tokens.
  Session session(const std::string& token) const;
  Comment add_comment(const std::string& token, const std::string& work_id,
                      const std::string& body);
  std::vector<Comment> list_comments(const std::string& work_id) const;

 private:
  HttpResponse route(const HttpRequest& request);

  mutable std::mutex corpus_mu_;
  std::shared_ptr<const Corpus> corpus_;
  std::optional<std::filesystem::path> graph_path_;
  Clock clock_;

  mutable std::shared_mutex sessions_mu_;
  std::unordered_map<std::string, Session> sessions_;

  mutable std::shared_mutex comments_mu_;
  std::unordered_map<std::string, std::vector<Comment>> comments_;
};

// Blocking HTTP front end over a Service (cpp-httplib). Serves an optional
// static asset directory at "/".
class HttpServer {
 public:
  explicit HttpServer(Service& service, std::optional<std::filesystem::path> static_dir = {});
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds; returns false when the port is unavailable. port 0 picks a free one.
  bool bind(const std::string& host, int port);
  int port() const;
  // Serves until stop(); call after bind().
  void listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace scholargraph
