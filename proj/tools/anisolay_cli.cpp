#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "anisolay/arl.hpp"
#include "anisolay/error.hpp"
#include "anisolay/graph.hpp"
#include "anisolay/kernels.hpp"
#include "anisolay/mds.hpp"
#include "anisolay/monotone_field.hpp"
#include "anisolay/parallel.hpp"
#include "anisolay/render.hpp"

namespace {

using namespace anisolay;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string input;
  std::string dataset;
  std::string mode = "arl";
  double w_rho = 1.0;
  int lag = 25;
  int iters = 2000;
  double alpha = 0.05;
  double tol = 0.0;
  int rays = 360;
  int samples = 128;
  double bandwidth = 0.1;
  std::uint64_t seed = 0;
  std::optional<bool> invert_weights;
  std::string output;
  std::string trace;
  std::string field;
  std::string svg;
  std::vector<std::string> compare;
  bool labels = false;

  ArlConfig arl() const {
    ArlConfig cfg;
    cfg.w_rho = w_rho;
    cfg.lag = lag;
    cfg.max_iters = iters;
    cfg.descent.step = alpha;
    cfg.descent.tol = tol;
    cfg.descent.max_iters = iters;
    cfg.field.rays = rays;
    cfg.field.samples = samples;
    cfg.field.bandwidth = bandwidth;
    return cfg;
  }
};

void add_run_options(CLI::App& cmd, RunConfig& cfg) {
  auto* input = cmd.add_option("--input,-i", cfg.input, "Graph file: edge list, or JSON when the name ends in .json");
  auto* dataset = cmd.add_option("--dataset,-d", cfg.dataset, "Bundled dataset name (see `datasets list`)");
  input->excludes(dataset);
  cmd.add_option("--mode,-m", cfg.mode, "Layout mode")
      ->check(CLI::IsMember({"mds", "arl", "arl-project"}))
      ->capture_default_str();
  cmd.add_option("--w-rho", cfg.w_rho, "Penalty weight")->capture_default_str();
  cmd.add_option("--lag", cfg.lag, "Iterations between field rebuilds")->capture_default_str();
  cmd.add_option("--iters", cfg.iters, "Maximum iterations for MDS and ARL")->capture_default_str();
  cmd.add_option("--alpha", cfg.alpha, "Gradient step size")->capture_default_str();
  cmd.add_option("--tol", cfg.tol, "Displacement tolerance; 0 means 1e-4 x max distance")->capture_default_str();
  cmd.add_option("--rays", cfg.rays, "Rays of the polar field")->capture_default_str();
  cmd.add_option("--samples", cfg.samples, "Radial samples per ray")->capture_default_str();
  cmd.add_option("--bandwidth", cfg.bandwidth, "Monotonization bandwidth as a fraction of each ray's range")
      ->capture_default_str();
  cmd.add_option("--seed", cfg.seed, "Seed for the MDS initialization")->capture_default_str();
  cmd.add_flag("--invert-weights,!--no-invert-weights", cfg.invert_weights,
               "Use 1/weight as edge length (default: on for weighted graphs)");
  cmd.add_option("--output,-o", cfg.output, "Layout JSON output");
  cmd.add_option("--trace", cfg.trace, "ARL energy trace CSV output");
  cmd.add_option("--field", cfg.field, "Monotonic field JSON output");
  cmd.add_flag("--labels", cfg.labels, "Draw node labels in the SVG");
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << content;
  if (!out.flush()) throw DataError("failed writing '" + path + "'");
}

struct Prepared {
  Graph graph;
  DistanceMatrix distances;
  CentralityVector centrality;
  bool inverted = false;
};

Prepared prepare(const RunConfig& cfg) {
  if (cfg.input.empty() == cfg.dataset.empty()) throw UsageError("exactly one of --input or --dataset is required");
  Graph g = cfg.input.empty() ? load_builtin(cfg.dataset) : load_graph(cfg.input);
  Prepared p;
  p.inverted = cfg.invert_weights.value_or(!g.unit_weights());
  p.graph = edge_lengths(g, p.inverted ? LengthMode::inverse : LengthMode::direct);
  p.distances = shortest_paths(p.graph);
  p.centrality = betweenness(p.graph);
  return p;
}

void print_config(const std::string& command, const RunConfig& cfg, const Prepared& p) {
  const ArlConfig arl = cfg.arl();
  const std::string source = cfg.input.empty() ? "dataset:" + cfg.dataset : "file:" + cfg.input;
  std::string modes = cfg.mode;
  if (!cfg.compare.empty()) {
    modes.clear();
    for (const auto& m : cfg.compare) modes += (modes.empty() ? "" : ",") + m;
  }
  std::cerr << fmt::format(
      "anisolay {}: input={} nodes={} edges={} mode={} w_rho={} lag={} iters={} alpha={} tol={} rays={} samples={} "
      "bandwidth={} seed={} invert_weights={} simd={} threads={}\n",
      command, source, p.graph.node_count(), p.graph.edge_count(), modes, arl.w_rho, arl.lag, arl.max_iters,
      arl.descent.step, arl.descent.resolved_tol(p.distances), arl.field.rays, arl.field.samples, arl.field.bandwidth,
      cfg.seed, p.inverted ? "on" : "off", kernels::isa_name(kernels::active_isa()), worker_count());
}

struct Outcome {
  MdsResult mds;
  std::optional<ArlResult> arl;
  std::optional<Layout> projected;
};

Outcome run_layout(const RunConfig& cfg, const Prepared& p, bool need_arl, bool need_projection) {
  const ArlConfig arl_cfg = cfg.arl();
  arl_cfg.validate();
  Outcome out;
  out.mds = mds_layout(p.distances, cfg.seed, arl_cfg.descent);
  const StressWeights w = StressWeights::elastic(p.distances);
  std::cerr << fmt::format("mds: iterations={} converged={} sigma={:.6f}\n", out.mds.iterations,
                           out.mds.converged ? "yes" : "no", stress(out.mds.layout, p.distances, w));
  if (!need_arl) return out;

  out.arl = arl_layout(p.distances, p.centrality.normalized, out.mds.layout, arl_cfg);
  const TraceRecord& first = out.arl->trace.records.front();
  const TraceRecord& last = out.arl->trace.records.back();
  std::cerr << fmt::format("arl: iterations={} converged={} sigma={:.6f} rho={:.6f} (initial rho={:.6f})\n", last.iter,
                           out.arl->converged ? "yes" : "no", last.sigma, last.rho, first.rho);
  if (!need_projection) return out;

  out.projected = project_to_contours(out.arl->layout, out.arl->field, p.centrality.normalized);
  const double before = penalty(out.arl->field, out.arl->layout, p.centrality.normalized);
  const double after = penalty(out.arl->field, *out.projected, p.centrality.normalized);
  std::cerr << fmt::format("projection: rho before={:.6g} after={:.6g} sigma after={:.6f}\n", before, after,
                           stress(*out.projected, p.distances, w));
  return out;
}

SceneStyle style_for(const RunConfig& cfg) {
  SceneStyle style;
  style.labels = cfg.labels;
  return style;
}

int cmd_layout(const RunConfig& cfg, bool render) {
  if (render && cfg.svg.empty()) throw UsageError("render requires --svg");
  const bool arl_mode = cfg.mode != "mds";
  if (!cfg.trace.empty() && !arl_mode) throw UsageError("--trace requires --mode arl or arl-project");

  const Prepared p = prepare(cfg);
  print_config(render ? "render" : "layout", cfg, p);
  const Outcome out = run_layout(cfg, p, arl_mode, cfg.mode == "arl-project");

  const Layout& final_layout = out.projected ? *out.projected : out.arl ? out.arl->layout : out.mds.layout;
  std::optional<MonotonicField> field;
  if (out.arl) {
    field = out.arl->field;
  } else if (!cfg.field.empty()) {
    field = build_field(final_layout, p.centrality.normalized, cfg.arl().field);
  }

  if (!cfg.output.empty()) {
    write_file(cfg.output, layout_to_json(final_layout));
  } else if (!render) {
    std::cout << layout_to_json(final_layout);
  }
  if (!cfg.trace.empty()) write_file(cfg.trace, trace_to_csv(out.arl->trace));
  if (!cfg.field.empty()) write_file(cfg.field, field_to_json(*field));
  if (!cfg.svg.empty()) {
    const MonotonicField* shown = arl_mode ? &*field : nullptr;
    write_file(cfg.svg, render_svg(final_layout, shown, p.graph, p.centrality.normalized, style_for(cfg)));
  }
  return 0;
}

int cmd_compare(RunConfig cfg) {
  if (cfg.compare.empty()) throw UsageError("--compare needs at least one mode");
  bool need_arl = false;
  bool need_projection = false;
  for (const auto& m : cfg.compare) {
    if (m != "mds" && m != "arl" && m != "arl-project") throw UsageError("unknown mode in --compare: " + m);
    need_arl = need_arl || m != "mds";
    need_projection = need_projection || m == "arl-project";
  }
  if (!cfg.trace.empty() && !need_arl) throw UsageError("--trace requires an arl mode in --compare");

  const Prepared p = prepare(cfg);
  print_config("compare", cfg, p);
  const Outcome out = run_layout(cfg, p, need_arl, need_projection);

  std::vector<Panel> panels;
  for (const auto& m : cfg.compare) {
    if (m == "mds") panels.push_back({m, out.mds.layout, nullptr});
    if (m == "arl") panels.push_back({m, out.arl->layout, &out.arl->field});
    if (m == "arl-project") panels.push_back({m, *out.projected, &out.arl->field});
  }
  write_file(cfg.svg, render_comparison(panels, p.graph, p.centrality.normalized, style_for(cfg)));
  if (!cfg.trace.empty()) write_file(cfg.trace, trace_to_csv(out.arl->trace));
  if (!cfg.field.empty() && out.arl) write_file(cfg.field, field_to_json(out.arl->field));
  if (!cfg.output.empty()) write_file(cfg.output, layout_to_json(panels.back().layout));
  return 0;
}

int cmd_datasets() {
  for (const DatasetInfo& info : builtin_datasets()) {
    std::cout << fmt::format("{}\t{} nodes\t{} edges\t{}\n", info.name, info.nodes, info.edges, info.description);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic radial graph layouts"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* layout = app.add_subcommand("layout", "Compute a layout and write JSON (and optional trace, field, SVG)");
  add_run_options(*layout, cfg);
  layout->add_option("--svg", cfg.svg, "SVG output");

  auto* render = app.add_subcommand("render", "Compute a layout and render it as SVG");
  add_run_options(*render, cfg);
  render->add_option("--svg", cfg.svg, "SVG output")->required();

  auto* compare = app.add_subcommand("compare", "Render several layout modes side by side");
  add_run_options(*compare, cfg);
  compare->add_option("--svg", cfg.svg, "SVG output")->required();
  compare->add_option("--compare", cfg.compare, "Comma-separated modes, e.g. mds,arl,arl-project")
      ->delimiter(',')
      ->required();

  auto* datasets = app.add_subcommand("datasets", "Bundled datasets");
  datasets->require_subcommand(1);
  auto* list = datasets->add_subcommand("list", "List bundled datasets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*layout) return cmd_layout(cfg, false);
    if (*render) return cmd_layout(cfg, true);
    if (*compare) return cmd_compare(cfg);
    if (*list) return cmd_datasets();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
