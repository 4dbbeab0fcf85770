#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "anisolay/graph.hpp"
#include "anisolay/mds.hpp"
#include "anisolay/monotone_field.hpp"

namespace anisolay {

struct SceneStyle {
  int width = 800;
  int height = 800;
  int margin = 40;
  double node_radius_min = 3.0;
  double node_radius_max = 14.0;
  std::vector<double> contour_levels = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::string colormap = "viridis";
  double background_alpha = 0.35;
  int raster_step = 2;  // pixels per background sample
  bool labels = false;
  bool colorbar = true;

  void validate() const;
};

/// 256-entry RGB lookup for `name` ("viridis" or "grayscale").
struct Rgb {
  unsigned char r, g, b;
};
std::span<const Rgb, 256> colormap(const std::string& name);
Rgb colormap_lookup(std::span<const Rgb, 256> lut, double value);

/// Fill color for a categorical group tag, stable for a given tag set.
std::string group_color(const std::vector<std::string>& groups, std::size_t node);

double node_radius(const SceneStyle& style, double centrality);

/// Levels drawn for `f`: style levels that do not exceed the field maximum,
/// minus a level equal to it (degenerate point).
std::vector<double> drawable_levels(const SceneStyle& style, const MonotonicField& f);

/// Layout-to-canvas similarity transform (uniform scale, y flipped).
struct CanvasMap {
  double scale = 1.0;
  double offset_x = 0.0;
  double offset_y = 0.0;
  double x(double lx) const { return offset_x + scale * lx; }
  double y(double ly) const { return offset_y - scale * ly; }
};
/// Fits the field disk when given, otherwise the layout bounding box.
CanvasMap fit_canvas(const Layout& x, const MonotonicField* field, const SceneStyle& style);

/// Colormap background, contours, edges, nodes, labels, colorbar. `field` may
/// be null, which drops the background, contours and colorbar. Throws
/// DataError if a node lies outside the field disk.
std::string render_svg(const Layout& x, const MonotonicField* field, const Graph& g,
                       std::span<const double> centrality, const SceneStyle& style = {});

struct Panel {
  std::string name;
  Layout layout;
  const MonotonicField* field = nullptr;
};

/// Horizontally tiled panels of equal width. A single field-less panel
/// renders exactly as render_svg without a field.
std::string render_comparison(std::span<const Panel> panels, const Graph& g,
                              std::span<const double> centrality, const SceneStyle& style = {});

}  // namespace anisolay
