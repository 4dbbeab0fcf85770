#include <array>
#include <string>
#include <utility>

#include "anisolay/error.hpp"
#include "anisolay/graph.hpp"

namespace anisolay {
namespace {

// Zachary (1977), 0-indexed. Node 0 is the instructor, node 33 the administrator.
constexpr std::array<std::pair<int, int>, 78> kKarateEdges{{
    {0, 1},   {0, 2},   {0, 3},   {0, 4},   {0, 5},   {0, 6},   {0, 7},   {0, 8},   {0, 10},  {0, 11},
    {0, 12},  {0, 13},  {0, 17},  {0, 19},  {0, 21},  {0, 31},  {1, 2},   {1, 3},   {1, 7},   {1, 13},
    {1, 17},  {1, 19},  {1, 21},  {1, 30},  {2, 3},   {2, 7},   {2, 8},   {2, 9},   {2, 13},  {2, 27},
    {2, 28},  {2, 32},  {3, 7},   {3, 12},  {3, 13},  {4, 6},   {4, 10},  {5, 6},   {5, 10},  {5, 16},
    {6, 16},  {8, 30},  {8, 32},  {8, 33},  {9, 33},  {13, 33}, {14, 32}, {14, 33}, {15, 32}, {15, 33},
    {18, 32}, {18, 33}, {19, 33}, {20, 32}, {20, 33}, {22, 32}, {22, 33}, {23, 25}, {23, 27}, {23, 29},
    {23, 32}, {23, 33}, {24, 25}, {24, 27}, {24, 31}, {25, 31}, {26, 29}, {26, 33}, {27, 33}, {28, 31},
    {28, 33}, {29, 32}, {29, 33}, {30, 32}, {30, 33}, {31, 32}, {31, 33}, {32, 33},
}};

// Faction after the split: members who followed the instructor.
constexpr std::array<int, 17> kInstructorFaction{0, 1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12, 13, 16, 17, 19, 21};

}  // namespace

Graph karate_club() {
  Graph g(34);
  for (const auto& [u, v] : kKarateEdges) g.add_edge(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
  std::vector<std::string> groups(34, "administrator");
  for (const int v : kInstructorFaction) groups[static_cast<std::size_t>(v)] = "instructor";
  std::vector<std::string> labels(34);
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = std::to_string(i);
  g.set_labels(std::move(labels));
  g.set_groups(std::move(groups));
  return g;
}

std::vector<DatasetInfo> builtin_datasets() {
  return {{"karate", "Zachary's karate club friendship network (instructor/administrator factions)", 34, 78}};
}

Graph load_builtin(std::string_view name) {
  if (name == "karate") return karate_club();
  throw DataError("unknown dataset '" + std::string(name) + "' (see `datasets list`)");
}

}  // namespace anisolay
