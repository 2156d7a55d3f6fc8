#include "dowker/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace dowker {

namespace {

json death_json(const std::optional<double>& death) {
  if (!death) return json("inf");
  return json(*death);
}

std::optional<double> death_from(const json& j, const std::string& where) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return std::nullopt;
    throw std::runtime_error(where + ": death must be a number or \"inf\"");
  }
  return j.get<double>();
}

}  // namespace

json pd_to_json(const PersistenceDiagram& d, int dim) {
  json points = json::array();
  for (const PdPoint& p : d.points) {
    if (p.dim != dim) continue;
    points.push_back(json::array({p.birth, death_json(p.death)}));
  }
  return json{{"dim", dim}, {"points", std::move(points)}};
}

PersistenceDiagram pd_from_json(const json& j) {
  PersistenceDiagram d;
  const int dim = j.at("dim").get<int>();
  if (dim < 0 || dim > 2) throw std::runtime_error("diagram: dim out of range");
  for (const json& p : j.at("points")) {
    if (!p.is_array() || p.size() != 2)
      throw std::runtime_error("diagram: each point is [birth, death]");
    d.points.push_back({p[0].get<double>(), death_from(p[1], "diagram"),
                        static_cast<std::uint8_t>(dim)});
  }
  return d;
}

json edge_map_to_json(const EdgePointMap& m) {
  json out = json::object();
  for (std::size_t e = 0; e < m.size(); ++e) {
    out[std::to_string(e)] = json{{"class", class_name(m[e].cls)},
                                  {"birth", m[e].birth},
                                  {"death", death_json(m[e].death)}};
  }
  return out;
}

json line_graph_to_json(const LineGraph& lg) {
  json nodes = json::array();
  for (std::size_t v = 0; v < lg.adjacency.size(); ++v)
    nodes.push_back(json{{"id", v}, {"weight", lg.node_weight[v]}});
  json edges = json::array();
  for (std::size_t v = 0; v < lg.adjacency.size(); ++v)
    for (EdgeId u : lg.adjacency[v])
      if (v < u) edges.push_back(json::array({v, u}));
  return json{{"kind", kind_name(lg.kind)},
              {"nodes", std::move(nodes)},
              {"edges", std::move(edges)}};
}

json skeleton_to_json(const DowkerSkeleton& sk) {
  json simplices = json::array();
  for (const FilteredSimplex& s : sk.simplices) {
    json v = json::array();
    for (int i = 0; i <= s.dim; ++i) v.push_back(s.vertices[static_cast<std::size_t>(i)]);
    simplices.push_back(json{{"v", std::move(v)}, {"value", s.value}, {"dim", s.dim}});
  }
  return json{{"kind", kind_name(sk.kind)}, {"simplices", std::move(simplices)}};
}

json wdist_record(const std::string& a, const std::string& b, int dim, double wd) {
  return json{{"a", a}, {"b", b}, {"dim", dim}, {"wd", wd}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);
}

void write_text(const std::string& path, const std::string& text) {
  std::string payload = text;
  if (payload.empty() || payload.back() != '\n') payload += '\n';
  if (path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << payload;
}

}  // namespace dowker
