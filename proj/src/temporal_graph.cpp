#include "dowker/temporal_graph.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace dowker {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Strict double parse; rejects trailing garbage.
bool parse_double(const std::string& tok, double& out) {
  errno = 0;
  char* end = nullptr;
  out = std::strtod(tok.c_str(), &end);
  return !tok.empty() && end == tok.c_str() + tok.size() && errno == 0;
}

bool parse_u64(const std::string& tok, unsigned long long& out) {
  if (tok.empty() || tok[0] == '-') return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtoull(tok.c_str(), &end, 10);
  return end == tok.c_str() + tok.size() && errno == 0;
}

std::optional<int> lookup_sidecar_label(const std::string& path) {
  namespace fs = std::filesystem;
  fs::path p(path);
  fs::path sidecar = p.parent_path() / "labels.tsv";
  std::ifstream in(sidecar);
  if (!in) throw ParseError("label sidecar not found: " + sidecar.string());
  const std::string stem = p.stem().string();
  std::string id;
  int label;
  while (in >> id >> label) {
    if (id == stem) return label;
  }
  return std::nullopt;
}

struct RawEdge {
  unsigned long long source;
  unsigned long long target;
  double time;
};

}  // namespace

TemporalDigraph parse_edge_list(const std::string& text, const std::string& name) {
  std::vector<RawEdge> raw;
  std::istringstream lines(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string s_tok, t_tok, w_tok, extra;
    if (!(fields >> s_tok)) continue;  // blank or comment-only line
    if (!(fields >> t_tok >> w_tok) || (fields >> extra)) {
      throw ParseError(name + ":" + std::to_string(line_no) +
                       ": expected \"source target time\"");
    }
    RawEdge e;
    if (!parse_u64(s_tok, e.source) || !parse_u64(t_tok, e.target) ||
        !parse_double(w_tok, e.time)) {
      throw ParseError(name + ":" + std::to_string(line_no) +
                       ": malformed field in \"" + line + "\"");
    }
    raw.push_back(e);
  }

  // Dense ids follow ascending raw id, so an exported graph (already dense)
  // re-ingests with the identity mapping. Self-loop endpoints count as seen.
  std::vector<unsigned long long> ids;
  ids.reserve(raw.size() * 2);
  for (const auto& e : raw) {
    ids.push_back(e.source);
    ids.push_back(e.target);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::unordered_map<unsigned long long, NodeId> dense;
  dense.reserve(ids.size());
  for (NodeId i = 0; i < ids.size(); ++i) dense.emplace(ids[i], i);

  std::map<std::pair<NodeId, NodeId>, double> retained;
  for (const auto& e : raw) {
    NodeId s = dense.at(e.source);
    NodeId t = dense.at(e.target);
    if (s == t) continue;  // self-loop dropped
    auto [it, inserted] = retained.emplace(std::make_pair(s, t), e.time);
    if (!inserted && e.time < it->second) it->second = e.time;
  }
  if (retained.empty()) {
    throw ParseError(name + ": empty edge set");
  }

  TemporalDigraph g;
  g.node_count = static_cast<NodeId>(ids.size());
  g.edges.reserve(retained.size());
  for (const auto& [key, time] : retained) {
    g.edges.push_back({key.first, key.second, time});
  }
  return g;
}

TemporalDigraph load_edge_list(const std::string& path, bool has_labels) {
  TemporalDigraph g = parse_edge_list(read_file(path), path);
  if (has_labels) g.label = lookup_sidecar_label(path);
  return g;
}

std::string format_edge_list(const TemporalDigraph& g) {
  std::string out;
  char buf[64];
  for (const auto& e : g.edges) {
    std::snprintf(buf, sizeof(buf), "%u %u %.17g\n", e.source, e.target, e.time);
    out += buf;
  }
  return out;
}

void save_edge_list(const TemporalDigraph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << format_edge_list(g);
}

WeightedDigraph normalize_weights(const TemporalDigraph& g) {
  if (g.edges.empty()) throw std::invalid_argument("normalize_weights: empty graph");
  double t_min = g.edges.front().time, t_max = g.edges.front().time;
  for (const auto& e : g.edges) {
    t_min = std::min(t_min, e.time);
    t_max = std::max(t_max, e.time);
  }
  WeightedDigraph w;
  w.node_count = g.node_count;
  w.label = g.label;
  w.edges.reserve(g.edges.size());
  const double span = t_max - t_min;
  for (const auto& e : g.edges) {
    double weight = span > 0.0 ? (e.time - t_min) / span : 0.0;
    w.edges.push_back({e.source, e.target, weight});
  }
  return w;
}

WeightedDigraph as_weighted(const TemporalDigraph& g) {
  WeightedDigraph w;
  w.node_count = g.node_count;
  w.label = g.label;
  w.edges.reserve(g.edges.size());
  for (const auto& e : g.edges) {
    if (!(e.time >= 0.0 && e.time <= 1.0)) {
      throw std::invalid_argument("as_weighted: time outside [0,1]");
    }
    w.edges.push_back({e.source, e.target, e.time});
  }
  return w;
}

WeightedDigraph transpose(const WeightedDigraph& g) {
  WeightedDigraph t;
  t.node_count = g.node_count;
  t.label = g.label;
  t.edges.reserve(g.edges.size());
  for (const auto& e : g.edges) t.edges.push_back({e.target, e.source, e.weight});
  return t;
}

}  // namespace dowker
