#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace anisolay {

struct Edge {
  std::size_t u;
  std::size_t v;
  double weight;
};

/// Weighted undirected simple graph. Every mutation validates the invariants:
/// endpoints in range, no self-loops, no parallel edges, strictly positive weights.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t node_count);

  void add_edge(std::size_t u, std::size_t v, double weight = 1.0);

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  bool has_edge(std::size_t u, std::size_t v) const;

  /// True when every weight equals 1.
  bool unit_weights() const noexcept;

  // Labels and groups are either empty or sized node_count().
  void set_labels(std::vector<std::string> labels);
  void set_groups(std::vector<std::string> groups);
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<std::string>& groups() const noexcept { return groups_; }

  using Neighbors = std::vector<std::pair<std::size_t, double>>;
  std::vector<Neighbors> adjacency() const;

 private:
  static std::uint64_t key(std::size_t u, std::size_t v);

  std::size_t node_count_ = 0;
  std::vector<Edge> edges_;
  std::unordered_set<std::uint64_t> edge_keys_;
  std::vector<std::string> labels_;
  std::vector<std::string> groups_;
};

enum class GraphFormat { edge_list, json };
enum class LengthMode { direct, inverse };

Graph parse_graph(std::string_view source, GraphFormat format);

/// Reads a graph file; `.json` selects the JSON format, anything else is an edge list.
Graph load_graph(const std::filesystem::path& path);

/// Copy of `g` whose weights are edge lengths: unchanged (direct) or 1/w (inverse).
Graph edge_lengths(const Graph& g, LengthMode mode);

/// All-pairs graph-theoretic distances of a connected graph.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(Eigen::MatrixXd d);

  std::size_t size() const noexcept { return static_cast<std::size_t>(d_.rows()); }
  double operator()(std::size_t u, std::size_t v) const { return d_(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)); }
  double max() const;
  const Eigen::MatrixXd& matrix() const noexcept { return d_; }

 private:
  Eigen::MatrixXd d_;
};

/// Dijkstra from every source. Throws DataError naming an unreachable pair.
DistanceMatrix shortest_paths(const Graph& g);

struct CentralityVector {
  std::vector<double> raw;
  std::vector<double> normalized;  // min-max scaled to [0,1]; 0.5 everywhere if raw is constant
};

/// Min-max normalization with the constant-input rule.
std::vector<double> normalize_centrality(std::span<const double> raw);

/// Betweenness centrality with fractional counting over multiple geodesics
/// (Brandes accumulation), treating edge weights as lengths.
CentralityVector betweenness(const Graph& g);

/// Preferential attachment: starts from K_{m+1}; every later node attaches to m
/// distinct existing nodes chosen proportionally to degree. Unit weights.
Graph generate_barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed);

struct DatasetInfo {
  std::string name;
  std::string description;
  std::size_t nodes;
  std::size_t edges;
};

std::vector<DatasetInfo> builtin_datasets();
Graph load_builtin(std::string_view name);

/// Zachary's karate club with "instructor"/"administrator" group tags.
Graph karate_club();

}  // namespace anisolay
