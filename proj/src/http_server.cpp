#include <algorithm>
#include <cctype>

#include "httplib.h"

#include "log.hpp"
#include "scholargraph/service.hpp"

namespace scholargraph {

namespace {

constexpr std::size_t kWorkerThreads = 32;

HttpRequest convert(const httplib::Request& req) {
  HttpRequest out;
  out.method = req.method;
  out.path = req.path;
  for (const auto& [k, v] : req.params) out.query.emplace(k, v);  // first value wins
  for (const auto& [k, v] : req.headers) {
    std::string name = k;
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    out.headers.emplace(std::move(name), v);
  }
  out.body = req.body;
  out.remote_addr = req.remote_addr;
  return out;
}

}  // namespace

struct HttpServer::Impl {
  Service& service;
  httplib::Server server;
  int port = -1;

  explicit Impl(Service& s) : service(s) {}
};

HttpServer::HttpServer(Service& service, std::optional<std::filesystem::path> static_dir)
    : impl_(std::make_unique<Impl>(service)) {
  auto& srv = impl_->server;
  srv.new_task_queue = [] { return new httplib::ThreadPool(kWorkerThreads); };
  srv.set_tcp_nodelay(true);
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    const HttpResponse r = impl_->service.handle(convert(req));
    res.status = r.status;
    res.set_content(r.body, r.content_type);
    log::debug() << req.method << " " << req.path << " -> " << r.status;
  };
  srv.Get(R"(/api/.*)", handler);
  srv.Post(R"(/api/.*)", handler);
  if (static_dir) {
    if (!srv.set_mount_point("/", static_dir->string())) {
      log::error() << "static asset directory " << static_dir->string() << " not found";
    }
  }
}

HttpServer::~HttpServer() { stop(); }

bool HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    impl_->port = impl_->server.bind_to_any_port(host);
    return impl_->port > 0;
  }
  if (!impl_->server.bind_to_port(host, port)) return false;
  impl_->port = port;
  return true;
}

int HttpServer::port() const { return impl_->port; }

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace scholargraph
