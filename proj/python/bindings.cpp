#include <memory>
#include <optional>
#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "scholargraph/algorithms.hpp"
#include "scholargraph/error.hpp"
#include "scholargraph/graph.hpp"
#include "scholargraph/ingest.hpp"
#include "scholargraph/recommend.hpp"
#include "scholargraph/search.hpp"
#include "scholargraph/service.hpp"

namespace py = pybind11;
using namespace scholargraph;

namespace {

// Graph plus search index, immutable once built.
class PyGraph {
 public:
  explicit PyGraph(KnowledgeGraph g) : corpus_(std::make_shared<const Corpus>(std::move(g))) {}

  const KnowledgeGraph& graph() const { return corpus_->graph; }
  const SearchIndex& index() const { return corpus_->index; }

 private:
  std::shared_ptr<const Corpus> corpus_;
};

py::dict stats_dict(const BuildStats& s) {
  py::dict edges;
  for (auto k : {EdgeKind::Authored, EdgeKind::PublishedIn, EdgeKind::AffiliatedWith,
                 EdgeKind::Cites, EdgeKind::HasConcept}) {
    edges[py::str(std::string(edge_kind_name(k)))] = s.edges_of(k);
  }
  py::dict d;
  d["nodes"] = s.nodes;
  d["edges"] = edges;
  d["dropped_dangling"] = s.dropped_dangling;
  d["max_year"] = s.max_year;
  return d;
}

Criterion criterion_arg(const std::string& type) {
  auto c = parse_criterion(type);
  if (!c) throw Error(ErrorCode::InvalidArgument, "unknown search type '" + type + "'");
  return *c;
}

SortOrder sort_arg(const std::string& sort) {
  auto s = parse_sort_order(sort);
  if (!s) throw Error(ErrorCode::InvalidSort, "unknown sort order '" + sort + "'");
  return *s;
}

template <typename T, typename F>
py::list pairs(const std::vector<T>& v, F f) {
  py::list out;
  for (const auto& x : v) out.append(f(x));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Scholarly knowledge graph: ingest, search, paths and recommendations.";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::tuple args = py::make_tuple(std::string(error_code_name(e.code())), e.what());
      PyErr_SetObject(error.ptr(), args.ptr());
    }
  });

  py::class_<PyGraph>(m, "Graph")
      .def_static(
          "ingest",
          [](const std::filesystem::path& dir) {
            py::gil_scoped_release release;
            return PyGraph(build_graph(parse_snapshot_dir(dir)));
          },
          py::arg("snapshot_dir"), "Parse a JSONL snapshot directory and build the graph.")
      .def_static(
          "load",
          [](const std::filesystem::path& path) {
            py::gil_scoped_release release;
            return PyGraph(load_graph(path));
          },
          py::arg("path"))
      .def(
          "persist",
          [](const PyGraph& g, const std::filesystem::path& path) {
            py::gil_scoped_release release;
            return persist_graph(g.graph(), path);
          },
          py::arg("path"), "Write the binary graph file; returns bytes written.")
      .def("stats", [](const PyGraph& g) { return stats_dict(g.graph().stats()); })
      .def("count",
           [](const PyGraph& g, const std::string& kind) -> std::size_t {
             for (auto k : {EntityKind::Work, EntityKind::Author, EntityKind::Institution,
                            EntityKind::Venue}) {
               if (entity_kind_name(k) == kind) return g.graph().count(k);
             }
             throw Error(ErrorCode::InvalidArgument, "unknown entity kind '" + kind + "'");
           },
           py::arg("kind"))
      .def(
          "search",
          [](const PyGraph& g, const std::string& type, const std::string& q, int page,
             int page_size, const std::string& sort) {
            SearchQuery query{criterion_arg(type), q, page, page_size, sort_arg(sort)};
            const auto res = search(g.index(), g.graph(), query);
            py::dict d;
            d["total"] = res.total_hits;
            d["page"] = res.page;
            d["page_size"] = res.page_size;
            d["ids"] = result_ids(g.graph(), res);
            return d;
          },
          py::arg("type"), py::arg("q"), py::arg("page") = 1,
          py::arg("page_size") = kDefaultPageSize, py::arg("sort") = "relevance")
      .def(
          "path",
          [](const PyGraph& g, const std::string& from, const std::string& to)
              -> std::optional<std::vector<std::string>> {
            auto p = shortest_authorship_path(g.graph(), from, to);
            if (!p) return std::nullopt;
            std::vector<std::string> ids;
            for (const auto& n : p->nodes) ids.push_back(n.value);
            return ids;
          },
          py::arg("from_author"), py::arg("to_author"),
          "Shortest author-work-author chain, or None when disconnected.")
      .def(
          "citations",
          [](const PyGraph& g, const std::string& work, bool incoming) {
            std::vector<std::string> ids;
            for (const auto& n : neighbors(g.graph(), {EntityKind::Work, work}, EdgeKind::Cites,
                                           incoming ? Direction::In : Direction::Out)) {
              ids.push_back(n.value);
            }
            return ids;
          },
          py::arg("work"), py::arg("incoming") = true)
      .def(
          "coauthors",
          [](const PyGraph& g, const std::string& author) {
            return pairs(coauthor_network(g.graph(), author), [](const Coauthor& c) {
              return py::make_tuple(c.author_id, c.shared_work_count);
            });
          },
          py::arg("author"))
      .def(
          "focus",
          [](const PyGraph& g, const std::string& author, int k) {
            return pairs(focus_areas(g.graph(), author, k),
                         [](const LabelScore& s) { return py::make_tuple(s.label, s.score); });
          },
          py::arg("author"), py::arg("k") = 10)
      .def(
          "similar",
          [](const PyGraph& g, const std::string& work, int k) {
            return pairs(similar_works(g.graph(), work, k),
                         [](const ScoredId& s) { return py::make_tuple(s.id, s.score); });
          },
          py::arg("work"), py::arg("k") = 10)
      .def(
          "common",
          [](const PyGraph& g, const std::string& a, const std::string& b) {
            return common_connections(g.graph(), a, b);
          },
          py::arg("a"), py::arg("b"))
      .def(
          "same_institution",
          [](const PyGraph& g, const std::string& author) {
            return pairs(same_institution_researchers(g.graph(), author),
                         [](const AuthorCitations& a) {
                           return py::make_tuple(a.author_id, a.cited_by_count);
                         });
          },
          py::arg("author"))
      .def(
          "trending",
          [](const PyGraph& g, const std::string& author, int window_years, int k) {
            return pairs(trending_subtopics(g.graph(), author, window_years, k),
                         [](const LabelCount& c) { return py::make_tuple(c.label, c.count); });
          },
          py::arg("author"), py::arg("window_years") = 3, py::arg("k") = 10)
      .def(
          "collaborators",
          [](const PyGraph& g, const std::string& author, int k) {
            return pairs(recommend_collaborators(g.graph(), author, k),
                         [](const ScoredId& s) { return py::make_tuple(s.id, s.score); });
          },
          py::arg("author"), py::arg("k") = 10);
}
