#include "anisolay/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "anisolay/error.hpp"
#include "anisolay/parallel.hpp"

namespace anisolay {

// ---------------------------------------------------------------------------
// Graph

Graph::Graph(std::size_t node_count) : node_count_(node_count) {}

std::uint64_t Graph::key(std::size_t u, std::size_t v) {
  const auto lo = static_cast<std::uint64_t>(std::min(u, v));
  const auto hi = static_cast<std::uint64_t>(std::max(u, v));
  return (hi << 32) | lo;
}

void Graph::add_edge(std::size_t u, std::size_t v, double weight) {
  if (u >= node_count_ || v >= node_count_) {
    throw DataError("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") references a node outside [0, " +
                    std::to_string(node_count_) + ")");
  }
  if (u == v) throw DataError("self-loop on node " + std::to_string(u));
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw DataError("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") has nonpositive weight");
  }
  if (!edge_keys_.insert(key(u, v)).second) {
    throw DataError("duplicate edge (" + std::to_string(u) + ", " + std::to_string(v) + ")");
  }
  edges_.push_back({u, v, weight});
}

bool Graph::has_edge(std::size_t u, std::size_t v) const { return edge_keys_.contains(key(u, v)); }

bool Graph::unit_weights() const noexcept {
  return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.weight == 1.0; });
}

void Graph::set_labels(std::vector<std::string> labels) {
  if (!labels.empty() && labels.size() != node_count_) throw DataError("label count does not match node count");
  labels_ = std::move(labels);
}

void Graph::set_groups(std::vector<std::string> groups) {
  if (!groups.empty() && groups.size() != node_count_) throw DataError("group count does not match node count");
  groups_ = std::move(groups);
}

std::vector<Graph::Neighbors> Graph::adjacency() const {
  std::vector<Neighbors> adj(node_count_);
  for (const Edge& e : edges_) {
    adj[e.u].emplace_back(e.v, e.weight);
    adj[e.v].emplace_back(e.u, e.weight);
  }
  return adj;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

Graph parse_edge_list(std::string_view source) {
  struct Row {
    std::size_t u, v;
    double w;
    std::size_t line;
  };
  std::vector<Row> rows;
  std::size_t max_node = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= source.size()) {
    const std::size_t end = std::min(source.find('\n', pos), source.size());
    std::string_view line = source.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      const std::size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    if (tokens.empty()) {
      if (end == source.size()) break;
      continue;
    }
    if (tokens.size() < 2 || tokens.size() > 3) {
      throw ParseError("expected `u v [weight]`, got " + std::to_string(tokens.size()) + " fields", line_no);
    }
    auto parse_index = [&](std::string_view tok) {
      std::size_t value = 0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError("invalid node index '" + std::string(tok) + "'", line_no);
      }
      return value;
    };
    Row row{parse_index(tokens[0]), parse_index(tokens[1]), 1.0, line_no};
    if (tokens.size() == 3) {
      const auto [ptr, ec] = std::from_chars(tokens[2].data(), tokens[2].data() + tokens[2].size(), row.w);
      if (ec != std::errc() || ptr != tokens[2].data() + tokens[2].size()) {
        throw ParseError("invalid weight '" + std::string(tokens[2]) + "'", line_no);
      }
    }
    max_node = std::max({max_node, row.u, row.v});
    rows.push_back(row);
    if (end == source.size()) break;
  }
  if (rows.empty()) throw ParseError("edge list contains no edges", 0);

  Graph g(max_node + 1);
  for (const Row& r : rows) {
    try {
      g.add_edge(r.u, r.v, r.w);
    } catch (const DataError& e) {
      throw ParseError(e.what(), r.line);
    }
  }
  return g;
}

Graph parse_json(std::string_view source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(source);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
  }
  try {
    if (!doc.is_object() || !doc.contains("edges")) throw ParseError("JSON graph needs an \"edges\" array", 0);

    std::size_t n = 0;
    std::vector<std::string> labels;
    std::vector<std::string> groups;
    bool any_label = false;
    bool any_group = false;
    if (doc.contains("nodes")) {
      const auto& nodes = doc.at("nodes");
      n = nodes.size();
      labels.assign(n, "");
      groups.assign(n, "");
      std::vector<bool> seen(n, false);
      for (const auto& node : nodes) {
        const auto id = node.at("id").get<long long>();
        if (id < 0 || static_cast<std::size_t>(id) >= n) {
          throw ParseError("node id " + std::to_string(id) + " outside [0, " + std::to_string(n) + ")", 0);
        }
        if (seen[static_cast<std::size_t>(id)]) throw ParseError("duplicate node id " + std::to_string(id), 0);
        seen[static_cast<std::size_t>(id)] = true;
        if (node.contains("label")) {
          labels[static_cast<std::size_t>(id)] = node.at("label").get<std::string>();
          any_label = true;
        }
        if (node.contains("group")) {
          groups[static_cast<std::size_t>(id)] = node.at("group").get<std::string>();
          any_group = true;
        }
      }
    } else {
      for (const auto& e : doc.at("edges")) {
        n = std::max<std::size_t>({n, e.at("u").get<std::size_t>() + 1, e.at("v").get<std::size_t>() + 1});
      }
    }

    Graph g(n);
    for (const auto& e : doc.at("edges")) {
      const auto u = e.at("u").get<long long>();
      const auto v = e.at("v").get<long long>();
      if (u < 0 || v < 0) throw ParseError("negative node index in edge", 0);
      const double w = e.contains("w") ? e.at("w").get<double>() : 1.0;
      try {
        g.add_edge(static_cast<std::size_t>(u), static_cast<std::size_t>(v), w);
      } catch (const DataError& err) {
        throw ParseError(err.what(), 0);
      }
    }
    if (any_label) g.set_labels(std::move(labels));
    if (any_group) g.set_groups(std::move(groups));
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed JSON graph: ") + e.what(), 0);
  }
}

}  // namespace

Graph parse_graph(std::string_view source, GraphFormat format) {
  return format == GraphFormat::json ? parse_json(source) : parse_edge_list(source);
}

Graph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const auto format = path.extension() == ".json" ? GraphFormat::json : GraphFormat::edge_list;
  return parse_graph(buf.str(), format);
}

Graph edge_lengths(const Graph& g, LengthMode mode) {
  Graph out(g.node_count());
  for (const Edge& e : g.edges()) out.add_edge(e.u, e.v, mode == LengthMode::inverse ? 1.0 / e.weight : e.weight);
  out.set_labels(g.labels());
  out.set_groups(g.groups());
  return out;
}

// ---------------------------------------------------------------------------
// Distances

DistanceMatrix::DistanceMatrix(Eigen::MatrixXd d) : d_(std::move(d)) {
  if (d_.rows() != d_.cols()) throw std::invalid_argument("distance matrix must be square");
}

double DistanceMatrix::max() const { return d_.size() ? d_.maxCoeff() : 0.0; }

namespace {

constexpr double kTieTolerance = 1e-12;

// Lengths equal up to accumulated rounding count as ties.
bool same_length(double a, double b) { return std::abs(a - b) <= kTieTolerance * std::max(a, b); }

struct SingleSource {
  std::vector<double> dist;
  std::vector<double> sigma;                    // number of shortest paths from the source
  std::vector<std::vector<std::size_t>> preds;  // shortest-path predecessors
  std::vector<std::size_t> order;               // nodes in non-decreasing distance
};

SingleSource dijkstra(const std::vector<Graph::Neighbors>& adj, std::size_t source, bool track_paths) {
  const std::size_t n = adj.size();
  SingleSource r;
  r.dist.assign(n, std::numeric_limits<double>::infinity());
  if (track_paths) {
    r.sigma.assign(n, 0.0);
    r.preds.assign(n, {});
  }
  r.order.reserve(n);
  std::vector<bool> done(n, false);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  r.dist[source] = 0.0;
  if (track_paths) r.sigma[source] = 1.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    const auto [dv, v] = heap.top();
    heap.pop();
    if (done[v]) continue;
    done[v] = true;
    r.order.push_back(v);
    for (const auto& [w, len] : adj[v]) {
      if (done[w]) continue;
      const double nd = dv + len;
      if (r.dist[w] == std::numeric_limits<double>::infinity() || (nd < r.dist[w] && !same_length(nd, r.dist[w]))) {
        r.dist[w] = nd;
        heap.emplace(nd, w);
        if (track_paths) {
          r.sigma[w] = r.sigma[v];
          r.preds[w].assign(1, v);
        }
      } else if (track_paths && same_length(nd, r.dist[w])) {
        r.sigma[w] += r.sigma[v];
        r.preds[w].push_back(v);
      }
    }
  }
  return r;
}

[[noreturn]] void throw_unreachable(std::size_t s, const std::vector<double>& dist) {
  const auto it = std::find(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
  throw DataError("graph is disconnected: unreachable pair (" + std::to_string(s) + ", " +
                  std::to_string(static_cast<std::size_t>(it - dist.begin())) + ")");
}

}  // namespace

DistanceMatrix shortest_paths(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n == 0) throw DataError("graph has no nodes");
  const auto adj = g.adjacency();
  Eigen::MatrixXd d(n, n);
  parallel_for(n, [&](std::size_t s) {
    const SingleSource r = dijkstra(adj, s, false);
    if (r.order.size() != n) throw_unreachable(s, r.dist);
    for (std::size_t t = 0; t < n; ++t) d(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(s)) = r.dist[t];
  });
  // Symmetrize exactly; Dijkstra from either end may round differently.
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    d(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < d.cols(); ++j) {
      const double m = std::min(d(i, j), d(j, i));
      d(i, j) = m;
      d(j, i) = m;
    }
  }
  return DistanceMatrix(std::move(d));
}

// ---------------------------------------------------------------------------
// Betweenness

std::vector<double> normalize_centrality(std::span<const double> raw) {
  if (raw.empty()) return {};
  const auto [lo_it, hi_it] = std::minmax_element(raw.begin(), raw.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  std::vector<double> out(raw.size());
  if (hi - lo <= 1e-12 * std::max(1.0, std::abs(hi))) {
    std::fill(out.begin(), out.end(), 0.5);
    return out;
  }
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = (raw[i] - lo) / (hi - lo);
  return out;
}

CentralityVector betweenness(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n == 0) throw DataError("graph has no nodes");
  const auto adj = g.adjacency();

  // One dependency vector per source, summed in source order afterwards so the
  // result does not depend on the worker count.
  std::vector<std::vector<double>> dependency(n);
  parallel_for(n, [&](std::size_t s) {
    const SingleSource r = dijkstra(adj, s, true);
    if (r.order.size() != n) throw_unreachable(s, r.dist);
    std::vector<double> delta(n, 0.0);
    for (auto it = r.order.rbegin(); it != r.order.rend(); ++it) {
      const std::size_t w = *it;
      for (const std::size_t v : r.preds[w]) delta[v] += r.sigma[v] / r.sigma[w] * (1.0 + delta[w]);
    }
    delta[s] = 0.0;
    dependency[s] = std::move(delta);
  });

  CentralityVector c;
  c.raw.assign(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t v = 0; v < n; ++v) c.raw[v] += dependency[s][v];
  }
  for (double& v : c.raw) v *= 0.5;  // each unordered pair was counted from both ends
  c.normalized = normalize_centrality(c.raw);
  return c;
}

// ---------------------------------------------------------------------------
// Generators

Graph generate_barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m < 1 || m >= n) {
    throw DataError("Barabasi-Albert needs 1 <= m < n (got n=" + std::to_string(n) + ", m=" + std::to_string(m) + ")");
  }
  Graph g(n);
  std::vector<std::size_t> endpoints;  // each node repeated once per incident edge
  for (std::size_t u = 0; u <= m; ++u) {
    for (std::size_t v = u + 1; v <= m; ++v) {
      g.add_edge(u, v);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  std::mt19937_64 rng(seed);
  for (std::size_t v = m + 1; v < n; ++v) {
    std::vector<std::size_t> targets;
    std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
    while (targets.size() < m) {
      const std::size_t t = endpoints[pick(rng)];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (const std::size_t t : targets) {
      g.add_edge(t, v);
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return g;
}

}  // namespace anisolay
