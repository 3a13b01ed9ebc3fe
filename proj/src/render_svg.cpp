#include "qpbraid/render_svg.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "qpbraid/errors.hpp"

namespace qpbraid {

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

const char* colour(int label) { return kPalette[(label - 1) % 8]; }

std::string fmt(double v) {
  char buf[64];
  if (v == 0.0) v = 0.0;  // no "-0.000000"
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

struct View {
  Region r;
  double scale;  // px per unit
  double margin = 20.0;
  double legend = 120.0;

  double px(cplx z) const { return margin + (z.real() - r.x0) * scale; }
  double py(cplx z) const { return margin + (r.y1 - z.imag()) * scale; }
  std::string pt(cplx z) const { return fmt(px(z)) + "," + fmt(py(z)); }
  double width() const { return 2 * margin + (r.x1 - r.x0) * scale + legend; }
  double height() const { return 2 * margin + (r.y1 - r.y0) * scale; }
};

std::string polyline(const View& v, const std::vector<cplx>& pts, const std::string& attrs) {
  std::string s = "<polyline points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) s += (i ? " " : "") + v.pt(pts[i]);
  return s + "\" fill=\"none\" " + attrs + "/>\n";
}

// Short segment ending in an arrowhead from z along unit direction d.
std::string arrow(const View& v, cplx z, cplx d, double len_px, const std::string& stroke,
                  const std::string& marker) {
  const cplx tip = z + d * (len_px / v.scale);
  return "<line x1=\"" + fmt(v.px(z)) + "\" y1=\"" + fmt(v.py(z)) + "\" x2=\"" + fmt(v.px(tip)) +
         "\" y2=\"" + fmt(v.py(tip)) + "\" stroke=\"" + stroke +
         "\" stroke-width=\"1.5\" marker-end=\"url(#" + marker + ")\"/>\n";
}

}  // namespace

std::string render_plane_svg(const BPlusGraph& graph, const std::optional<LoopPath>& loop,
                             const BranchData& branch) {
  const Region& r = graph.region;
  if (!(r.x1 > r.x0) || !(r.y1 > r.y0)) throw InputError("cannot render an empty region");
  View v{r, 600.0 / std::max(r.x1 - r.x0, r.y1 - r.y0)};

  std::set<int> labels;
  for (const auto& e : graph.edges) labels.insert(e.label);

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(v.width())
    << "\" height=\"" << fmt(v.height()) << "\" viewBox=\"0 0 " << fmt(v.width()) << " "
    << fmt(v.height()) << "\">\n<defs>\n";
  for (int l : labels)
    o << "<marker id=\"arrow" << l << "\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" "
      << "markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\""
      << colour(l) << "\"/></marker>\n";
  o << "<marker id=\"arrowloop\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"6\" "
       "markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#000000\"/></marker>\n"
    << "</defs>\n";
  o << "<rect x=\"" << fmt(v.margin) << "\" y=\"" << fmt(v.margin) << "\" width=\""
    << fmt((r.x1 - r.x0) * v.scale) << "\" height=\"" << fmt((r.y1 - r.y0) * v.scale)
    << "\" fill=\"#ffffff\" stroke=\"#cccccc\"/>\n";

  o << "<g id=\"bplus\">\n";
  for (const auto& e : graph.edges) {
    o << polyline(v, e.points,
                  std::string("stroke=\"") + colour(e.label) + "\" stroke-width=\"2\" class=\"edge label" +
                      std::to_string(e.label) + "\"");
    // co-orientation arrow at the middle segment
    const std::size_t m = (e.points.size() - 1) / 2;
    const cplx a = e.points[m], b = e.points[m + 1], d = b - a;
    if (std::abs(d) > 0)
      o << arrow(v, 0.5 * (a + b), cplx(0, 1) * d / std::abs(d), 12.0, colour(e.label),
                 "arrow" + std::to_string(e.label));
  }
  o << "</g>\n";

  if (loop) {
    std::vector<cplx> pts;
    for (const auto& s : loop->polyline()) pts.push_back(s.z);
    o << "<g id=\"loop\">\n"
      << polyline(v, pts, "stroke=\"#000000\" stroke-width=\"1.5\"");
    for (int k = 1; k <= 8; ++k) {
      const double t = (k - 0.5) / 8.0;
      o << arrow(v, loop->point_at(t), loop->tangent_at(t), 10.0, "#000000", "arrowloop");
    }
    const cplx b = loop->point_at(0.0);
    o << "<rect class=\"basepoint\" x=\"" << fmt(v.px(b) - 4) << "\" y=\"" << fmt(v.py(b) - 4)
      << "\" width=\"8\" height=\"8\" fill=\"#000000\"/>\n</g>\n";
  }

  o << "<g id=\"branch\">\n";
  for (const auto& p : branch.points)
    if (r.contains(p.z))
      o << "<circle class=\"branch-point\" cx=\"" << fmt(v.px(p.z)) << "\" cy=\"" << fmt(v.py(p.z))
        << "\" r=\"4\" fill=\"#000000\"/>\n";
  o << "</g>\n";

  const double lx = v.width() - v.legend + 10;
  o << "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
  double ly = v.margin + 10;
  for (int l : labels) {
    o << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(lx + 24) << "\" y2=\""
      << fmt(ly) << "\" stroke=\"" << colour(l) << "\" stroke-width=\"2\"/>\n"
      << "<text x=\"" << fmt(lx + 30) << "\" y=\"" << fmt(ly + 4) << "\">&#963;" << l << "</text>\n";
    ly += 18;
  }
  o << "<circle cx=\"" << fmt(lx + 12) << "\" cy=\"" << fmt(ly) << "\" r=\"4\" fill=\"#000000\"/>\n"
    << "<text x=\"" << fmt(lx + 30) << "\" y=\"" << fmt(ly + 4) << "\">branch point</text>\n";
  if (loop) {
    ly += 18;
    o << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(lx + 24)
      << "\" y2=\"" << fmt(ly) << "\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n"
      << "<text x=\"" << fmt(lx + 30) << "\" y=\"" << fmt(ly + 4) << "\">loop</text>\n";
  }
  o << "</g>\n</svg>\n";
  return o.str();
}

std::string render_braid_svg(const BraidWord& word) {
  const int n = word.strands();
  const double dx = 40, dy = 30, x0 = 20, y0 = 20;
  const std::size_t m = word.size();
  const double width = 2 * x0 + dx * std::max<std::size_t>(m, 1);
  const double height = 2 * y0 + dy * (n - 1);
  auto y = [&](int pos) { return y0 + dy * (pos - 1); };
  auto line = [](double xa, double ya, double xb, double yb, const std::string& attrs) {
    return "<line x1=\"" + fmt(xa) + "\" y1=\"" + fmt(ya) + "\" x2=\"" + fmt(xb) + "\" y2=\"" +
           fmt(yb) + "\" " + attrs + "/>\n";
  };
  const std::string strand = "stroke=\"#000000\" stroke-width=\"2\"";
  const std::string gap = "stroke=\"#ffffff\" stroke-width=\"8\"";

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(width)
    << "\" height=\"" << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << " " << fmt(height)
    << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  if (m == 0) {
    for (int p = 1; p <= n; ++p) o << line(x0, y(p), width - x0, y(p), strand);
  }
  for (std::size_t i = 0; i < m; ++i) {
    const auto& l = word.letters()[i];
    const double xa = x0 + dx * i, xb = xa + dx;
    o << "<g class=\"crossing " << (l.sign > 0 ? "positive" : "negative") << "\">\n";
    for (int p = 1; p <= n; ++p)
      if (p != l.index && p != l.index + 1) o << line(xa, y(p), xb, y(p), strand);
    // under strand first, then a white gap and the over strand on top
    const int over_from = l.sign > 0 ? l.index + 1 : l.index;
    const int under_from = l.sign > 0 ? l.index : l.index + 1;
    const int over_to = under_from, under_to = over_from;
    o << line(xa, y(under_from), xb, y(under_to), strand)
      << line(xa + 0.25 * dx, y(over_from) + 0.25 * (y(over_to) - y(over_from)), xb - 0.25 * dx,
              y(over_to) - 0.25 * (y(over_to) - y(over_from)), gap)
      << line(xa, y(over_from), xb, y(over_to), strand) << "</g>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace qpbraid
