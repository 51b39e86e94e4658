#include "scholargraph/cli.hpp"

#include <csignal>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "log.hpp"
#include "scholargraph/algorithms.hpp"
#include "scholargraph/error.hpp"
#include "scholargraph/graph.hpp"
#include "scholargraph/ingest.hpp"
#include "scholargraph/search.hpp"
#include "scholargraph/service.hpp"

namespace scholargraph {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

std::string stats_line(const BuildStats& st) {
  std::ostringstream os;
  os << st.nodes << " nodes, " << st.edge_total() << " edges (";
  for (EdgeKind k : {EdgeKind::Authored, EdgeKind::PublishedIn, EdgeKind::AffiliatedWith,
                     EdgeKind::Cites, EdgeKind::HasConcept}) {
    if (k != EdgeKind::Authored) os << ' ';
    os << edge_kind_name(k) << '=' << st.edges_of(k);
  }
  os << "), " << st.dropped_dangling << " dangling dropped";
  return os.str();
}

std::string counts(const KindCounts& c) {
  std::ostringstream os;
  os << "works=" << c[EntityKind::Work] << " authors=" << c[EntityKind::Author]
     << " institutions=" << c[EntityKind::Institution] << " venues=" << c[EntityKind::Venue];
  return os.str();
}

HttpServer* g_running_server = nullptr;

extern "C" void on_signal(int) {
  if (g_running_server) g_running_server->stop();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scholarly knowledge graph: ingest, update, serve and query", "scholargraph"};
  app.require_subcommand(1);

  std::string snapshot_dir, out_file, graph_file, delta_dir, from, to, type, text, sort,
      host = "0.0.0.0", static_dir;
  int port = 8080, page = 1, page_size = kDefaultPageSize;

  auto* ingest = app.add_subcommand("ingest", "Parse a snapshot directory, build and persist the graph");
  ingest->add_option("--snapshot", snapshot_dir, "Directory with works/authors/institutions/venues.jsonl")
      ->required();
  ingest->add_option("--out", out_file, "Graph file to write")->required();

  auto* update = app.add_subcommand("update", "Apply a delta directory to a persisted graph");
  update->add_option("--graph", graph_file, "Existing graph file")->required();
  update->add_option("--delta", delta_dir, "Directory with delta .jsonl files")->required();
  update->add_option("--out", out_file, "Graph file to write")->required();

  auto* serve = app.add_subcommand("serve", "Serve the HTTP API over a graph file");
  serve->add_option("--graph", graph_file, "Graph file")->required();
  serve->add_option("--port", port, "TCP port")->required()->check(CLI::Range(0, 65535));
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--static", static_dir, "Directory of web assets served at /");

  auto* query = app.add_subcommand("query", "One-shot queries");
  query->require_subcommand(1);
  auto* qpath = query->add_subcommand("path", "Shortest authorship path between two authors");
  qpath->add_option("--graph", graph_file, "Graph file")->required();
  qpath->add_option("--from", from, "Author id")->required();
  qpath->add_option("--to", to, "Author id")->required();
  auto* qsearch = query->add_subcommand("search", "Search one entity kind");
  qsearch->add_option("--graph", graph_file, "Graph file")->required();
  qsearch->add_option("--type", type, "works|authors|institutions|venues")->required();
  qsearch->add_option("--q", text, "Query text")->required();
  qsearch->add_option("--page", page, "1-based page");
  qsearch->add_option("--page-size", page_size, "Results per page");
  qsearch->add_option("--sort", sort, "relevance|title|date|citations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help("", CLI::AppFormatMode::All);
    return kExitUsage;
  }

  try {
    if (*ingest) {
      const Snapshot snap = parse_snapshot_dir(snapshot_dir);
      const KnowledgeGraph g = build_graph(snap);
      persist_graph(g, out_file);
      out << stats_line(g.stats()) << "; " << snap.report.malformed.size() << " malformed lines, "
          << snap.report.rejected.size() << " rejected records, " << snap.report.dangling.size()
          << " dangling references\n";
      for (const auto& m : snap.report.malformed) {
        log::error() << m.file << ":" << m.line << ": " << m.reason << ": " << m.excerpt;
      }
      return kExitOk;
    }
    if (*update) {
      const KnowledgeGraph base = load_graph(graph_file);
      auto [snap, report] = apply_update_dir(base.to_snapshot(), delta_dir);
      const KnowledgeGraph g = build_graph(snap);
      persist_graph(g, out_file);
      out << "inserted " << counts(report.inserted) << "; updated " << counts(report.updated)
          << "; unchanged " << counts(report.unchanged) << "; " << report.issues.malformed.size()
          << " malformed lines, " << report.issues.rejected.size() << " rejected records; "
          << stats_line(g.stats()) << '\n';
      return kExitOk;
    }
    if (*serve) {
      Service service(load_graph(graph_file), std::filesystem::path(graph_file));
      HttpServer server(service, static_dir.empty()
                                     ? std::nullopt
                                     : std::optional<std::filesystem::path>(static_dir));
      if (!server.bind(host, port)) {
        err << "error: cannot bind " << host << ":" << port << '\n';
        return kExitData;
      }
      g_running_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      err << "serving " << graph_file << " on http://" << host << ":" << server.port() << "/api\n";
      server.listen();
      g_running_server = nullptr;
      return kExitOk;
    }
    if (*qpath) {
      const KnowledgeGraph g = load_graph(graph_file);
      const auto path = shortest_authorship_path(g, from, to);
      if (!path) {
        out << "NOPATH\n";
        return kExitOk;
      }
      for (const auto& node : path->nodes) out << node.value << ' ';
      out << "(hops=" << path->hops() << ")\n";
      return kExitOk;
    }
    if (*qsearch) {
      const auto crit = parse_criterion(type);
      if (!crit) {
        err << "error: --type must be works|authors|institutions|venues\n";
        return kExitUsage;
      }
      SearchQuery q;
      q.criterion = *crit;
      q.text = text;
      q.page = page;
      q.page_size = page_size;
      if (!sort.empty()) {
        const auto order = parse_sort_order(sort);
        if (!order) {
          err << "error: --sort must be relevance|title|date|citations\n";
          return kExitUsage;
        }
        q.sort = *order;
      }
      const KnowledgeGraph g = load_graph(graph_file);
      const SearchIndex index = build_index(g);
      const auto result = search(index, g, q);
      out << "total=" << result.total_hits;
      for (const auto& id : result_ids(g, result)) out << ' ' << id;
      out << '\n';
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error [" << error_code_name(e.code()) << "]: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace scholargraph
