#include "anisolay/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

#include "anisolay/error.hpp"
#include "anisolay/parallel.hpp"
#include "png.hpp"

namespace anisolay {

namespace {

constexpr int kColorbarWidth = 70;
constexpr std::array<const char*, 8> kGroupPalette{"#1f77b4", "#2ca02c", "#d62728", "#ff7f0e",
                                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};
constexpr const char* kDefaultNodeColor = "#4c72b0";

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (const char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(ch);
    }
  }
  return out;
}

std::string hex(Rgb c) { return fmt::format("#{:02x}{:02x}{:02x}", c.r, c.g, c.b); }

std::map<std::string, std::string> palette_for(const std::vector<std::string>& groups) {
  std::vector<std::string> tags(groups.begin(), groups.end());
  std::sort(tags.begin(), tags.end());
  tags.erase(std::unique(tags.begin(), tags.end()), tags.end());
  std::map<std::string, std::string> palette;
  for (std::size_t i = 0; i < tags.size(); ++i) palette[tags[i]] = kGroupPalette[i % kGroupPalette.size()];
  return palette;
}

bool draws_colorbar(const MonotonicField* field, const SceneStyle& style) { return field && style.colorbar; }

void check_inputs(const Layout& x, const Graph& g, std::span<const double> centrality) {
  if (static_cast<std::size_t>(x.rows()) != g.node_count() || centrality.size() != g.node_count()) {
    throw std::invalid_argument("layout, graph and centrality sizes disagree");
  }
}

// One panel at the origin of its own coordinate frame. `id` keeps gradient
// ids unique when panels share a document.
void render_body(std::string& out, const Layout& x, const MonotonicField* field, const Graph& g,
                 std::span<const double> centrality, const SceneStyle& style, const std::string& id) {
  const CanvasMap map = fit_canvas(x, field, style);
  const auto lut = colormap(style.colormap);

  if (field) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double dist = (x.row(i).transpose() - field->center()).norm();
      if (dist > field->r_max() * (1.0 + 1e-9)) {
        throw DataError(fmt::format("node {} lies outside the field extent (radius {:.6g} > {:.6g})", i, dist,
                                    field->r_max()));
      }
    }

    // Background raster sampled from the field, transparent outside its disk.
    const int step = style.raster_step;
    const int cols = (style.width + step - 1) / step;
    const int rows = (style.height + step - 1) / step;
    std::vector<std::uint8_t> rgba(static_cast<std::size_t>(cols) * rows * 4, 0);
    parallel_for(static_cast<std::size_t>(rows), [&](std::size_t r) {
      for (int c = 0; c < cols; ++c) {
        const double px = (c + 0.5) * step;
        const double py = (static_cast<double>(r) + 0.5) * step;
        const Vec2 p((px - map.offset_x) / map.scale, (map.offset_y - py) / map.scale);
        if ((p - field->center()).norm() > field->r_max()) continue;
        const Rgb color = colormap_lookup(lut, eval_field(*field, p));
        std::uint8_t* px_out = rgba.data() + (r * static_cast<std::size_t>(cols) + static_cast<std::size_t>(c)) * 4;
        px_out[0] = color.r;
        px_out[1] = color.g;
        px_out[2] = color.b;
        px_out[3] = 255;
      }
    });
    const std::string png = detail::encode_png_rgba(cols, rows, rgba);
    out += fmt::format(
        "<image class=\"field\" x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" opacity=\"{:.2f}\" "
        "preserveAspectRatio=\"none\" xlink:href=\"data:image/png;base64,{}\"/>\n",
        cols * step, rows * step, style.background_alpha, detail::base64_encode(png));

    out += "<g class=\"contours\" fill=\"none\" stroke=\"#303030\" stroke-opacity=\"0.55\" stroke-width=\"1\">\n";
    for (const double level : drawable_levels(style, *field)) {
      const Contour contour = extract_contour(*field, level);
      out += fmt::format("<polyline data-level=\"{:.2f}\" points=\"", level);
      for (std::size_t k = 0; k < contour.points.size(); ++k) {
        if (k) out.push_back(' ');
        out += fmt::format("{:.2f},{:.2f}", map.x(contour.points[k].x()), map.y(contour.points[k].y()));
      }
      out += "\"/>\n";
    }
    out += "</g>\n";
  }

  out += "<g class=\"edges\" stroke=\"#7f7f7f\" stroke-opacity=\"0.7\" stroke-width=\"1\">\n";
  for (const Edge& e : g.edges()) {
    const auto u = static_cast<Eigen::Index>(e.u);
    const auto v = static_cast<Eigen::Index>(e.v);
    out += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\"/>\n", map.x(x(u, 0)),
                       map.y(x(u, 1)), map.x(x(v, 0)), map.y(x(v, 1)));
  }
  out += "</g>\n";

  const auto palette = palette_for(g.groups());
  out += "<g class=\"nodes\" stroke=\"#202020\" stroke-width=\"0.8\">\n";
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const auto node = static_cast<std::size_t>(i);
    const std::string& fill = g.groups().empty() ? std::string(kDefaultNodeColor) : palette.at(g.groups()[node]);
    out += fmt::format("<circle data-node=\"{}\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{:.2f}\" fill=\"{}\"/>\n", i,
                       map.x(x(i, 0)), map.y(x(i, 1)), node_radius(style, centrality[node]), fill);
  }
  out += "</g>\n";

  if (style.labels) {
    out += "<g class=\"labels\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#101010\">\n";
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const auto node = static_cast<std::size_t>(i);
      const std::string text = g.labels().empty() || g.labels()[node].empty() ? std::to_string(i) : g.labels()[node];
      const double offset = node_radius(style, centrality[node]) + 2.0;
      out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", map.x(x(i, 0)) + offset,
                         map.y(x(i, 1)) - offset, xml_escape(text));
    }
    out += "</g>\n";
  }

  if (draws_colorbar(field, style)) {
    const double bar_x = style.width - kColorbarWidth + 15;
    const double bar_top = style.margin;
    const double bar_h = style.height - 2.0 * style.margin;
    out += fmt::format("<defs><linearGradient id=\"{}-colorbar\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">\n", id);
    for (int k = 0; k <= 10; ++k) {
      const double t = k / 10.0;
      out += fmt::format("<stop offset=\"{:.1f}\" stop-color=\"{}\"/>\n", t, hex(colormap_lookup(lut, t)));
    }
    out += "</linearGradient></defs>\n";
    out += fmt::format(
        "<g class=\"colorbar\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#101010\">\n"
        "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"14\" height=\"{:.2f}\" fill=\"url(#{}-colorbar)\" stroke=\"#404040\" "
        "stroke-width=\"0.5\"/>\n",
        bar_x, bar_top, bar_h, id);
    for (const auto& [value, label] : {std::pair{1.0, "1.0"}, std::pair{0.5, "0.5"}, std::pair{0.0, "0.0"}}) {
      out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", bar_x + 18.0,
                         bar_top + (1.0 - value) * bar_h + 4.0, label);
    }
    out += "</g>\n";
  }
}

std::string document_open(int width, int height) {
  return fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" xmlns:xlink=\"http://www.w3.org/1999/xlink\" version=\"1.1\" "
      "width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<rect width=\"{0}\" height=\"{1}\" fill=\"#ffffff\"/>\n",
      width, height);
}

}  // namespace

void SceneStyle::validate() const {
  if (width <= 0 || height <= 0) throw std::invalid_argument("canvas size must be positive");
  if (margin < 0 || 2 * margin >= std::min(width, height)) throw std::invalid_argument("margin too large for canvas");
  if (!(node_radius_min > 0.0) || node_radius_max < node_radius_min) {
    throw std::invalid_argument("node radius range must satisfy 0 < min <= max");
  }
  for (std::size_t i = 0; i < contour_levels.size(); ++i) {
    if (contour_levels[i] < 0.0 || contour_levels[i] > 1.0) throw std::invalid_argument("contour levels must lie in [0,1]");
    if (i && contour_levels[i] < contour_levels[i - 1]) throw std::invalid_argument("contour levels must be ascending");
  }
  if (background_alpha < 0.0 || background_alpha > 1.0) throw std::invalid_argument("background alpha must lie in [0,1]");
  if (raster_step < 1) throw std::invalid_argument("raster step must be positive");
  anisolay::colormap(colormap);
}

std::string group_color(const std::vector<std::string>& groups, std::size_t node) {
  if (groups.empty()) return kDefaultNodeColor;
  return palette_for(groups).at(groups.at(node));
}

double node_radius(const SceneStyle& style, double centrality) {
  return style.node_radius_min + std::clamp(centrality, 0.0, 1.0) * (style.node_radius_max - style.node_radius_min);
}

std::vector<double> drawable_levels(const SceneStyle& style, const MonotonicField& f) {
  std::vector<double> out;
  for (const double level : style.contour_levels) {
    if (level < f.max_value()) out.push_back(level);
  }
  return out;
}

CanvasMap fit_canvas(const Layout& x, const MonotonicField* field, const SceneStyle& style) {
  double min_x, max_x, min_y, max_y;
  if (field) {
    min_x = field->center().x() - field->r_max();
    max_x = field->center().x() + field->r_max();
    min_y = field->center().y() - field->r_max();
    max_y = field->center().y() + field->r_max();
  } else if (x.rows() > 0) {
    min_x = x.col(0).minCoeff();
    max_x = x.col(0).maxCoeff();
    min_y = x.col(1).minCoeff();
    max_y = x.col(1).maxCoeff();
  } else {
    min_x = min_y = -1.0;
    max_x = max_y = 1.0;
  }
  const double span_x = std::max(max_x - min_x, 1e-9);
  const double span_y = std::max(max_y - min_y, 1e-9);
  const double left = style.margin;
  const double right = style.width - style.margin - (draws_colorbar(field, style) ? kColorbarWidth : 0);
  const double top = style.margin;
  const double bottom = style.height - style.margin;
  CanvasMap m;
  m.scale = std::min((right - left) / span_x, (bottom - top) / span_y);
  m.offset_x = 0.5 * (left + right) - m.scale * 0.5 * (min_x + max_x);
  m.offset_y = 0.5 * (top + bottom) + m.scale * 0.5 * (min_y + max_y);
  return m;
}

std::string render_svg(const Layout& x, const MonotonicField* field, const Graph& g, std::span<const double> centrality,
                       const SceneStyle& style) {
  style.validate();
  check_inputs(x, g, centrality);
  std::string out = document_open(style.width, style.height);
  render_body(out, x, field, g, centrality, style, "p0");
  out += "</svg>\n";
  return out;
}

std::string render_comparison(std::span<const Panel> panels, const Graph& g, std::span<const double> centrality,
                              const SceneStyle& style) {
  if (panels.empty()) throw std::invalid_argument("comparison needs at least one layout");
  style.validate();
  for (const Panel& p : panels) check_inputs(p.layout, g, centrality);
  if (panels.size() == 1 && !panels[0].field) return render_svg(panels[0].layout, nullptr, g, centrality, style);

  std::string out = document_open(style.width * static_cast<int>(panels.size()), style.height);
  for (std::size_t k = 0; k < panels.size(); ++k) {
    out += fmt::format("<g class=\"panel\" transform=\"translate({},0)\">\n", style.width * static_cast<int>(k));
    render_body(out, panels[k].layout, panels[k].field, g, centrality, style, fmt::format("p{}", k));
    out += fmt::format(
        "<text class=\"caption\" x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"16\" "
        "text-anchor=\"middle\" fill=\"#101010\">{}</text>\n",
        style.width / 2.0, style.margin * 0.6, xml_escape(panels[k].name));
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace anisolay
