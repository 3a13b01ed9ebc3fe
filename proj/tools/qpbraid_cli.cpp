// qpbraid command line: analyze, braid, bplus, realize, verify.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qpbraid/bplus_graph.hpp"
#include "qpbraid/errors.hpp"
#include "qpbraid/expr_parser.hpp"
#include "qpbraid/json_io.hpp"
#include "qpbraid/monodromy.hpp"
#include "qpbraid/realization.hpp"
#include "qpbraid/render_svg.hpp"

using namespace qpbraid;

namespace {

constexpr const char* kVersion = "qpbraid 0.1.0";

struct Globals {
  double theta = 0.0;
  CLI::Option* theta_opt = nullptr;
  std::uint64_t seed = 0;  // reserved
  double tol = 1e-10;
  std::string validate;
};

BivariatePolynomial load_polynomial(const std::string& arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) {
    std::ifstream in(arg);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
      json j;
      try {
        j = json::parse(text);
      } catch (const json::parse_error& e) {
        throw InputError(arg + ": " + e.what());
      }
      return polynomial_from_json(j);
    }
    return parse_polynomial_expression(text);
  }
  return parse_polynomial_expression(arg);
}

LocusOptions locus_options(const Globals& g) {
  LocusOptions o;
  o.roots.tol = g.tol;
  return o;
}

TrackOptions track_options(const Globals& g) {
  TrackOptions o;
  o.roots.tol = g.tol;
  return o;
}

Analysis run_analysis(const Globals& g, const std::string& poly, double budget) {
  std::optional<double> theta;
  if (g.theta_opt && *g.theta_opt) theta = g.theta;
  return analyze(load_polynomial(poly), budget, theta, locus_options(g));
}

void emit(const json& doc, const std::string& json_out) {
  const std::string text = doc.dump(2) + "\n";
  std::cout << text;
  if (!json_out.empty()) write_text_file(json_out, text);
}

Region region_from(const std::vector<double>& v) {
  if (v.size() != 4) throw InputError("--region needs x0,y0,x1,y1");
  Region r{v[0], v[1], v[2], v[3]};
  if (!(r.x1 > r.x0) || !(r.y1 > r.y0)) throw InputError("--region is empty");
  return r;
}

// Square region around the loop with a 15% margin.
Region region_around(const LoopPath& loop, const BranchData& b) {
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  auto add = [&](cplx z) {
    x0 = std::min(x0, z.real()), x1 = std::max(x1, z.real());
    y0 = std::min(y0, z.imag()), y1 = std::max(y1, z.imag());
  };
  for (const auto& s : loop.polyline()) add(s.z);
  for (const auto& p : b.points) add(p.z);
  const double half = 0.5 * std::max(x1 - x0, y1 - y0) * 1.15 + 1e-3;
  const cplx c{0.5 * (x0 + x1), 0.5 * (y0 + y1)};
  return {c.real() - half, c.imag() - half, c.real() + half, c.imag() + half};
}

int print_error(const char* type, const std::string& what, const std::string& diagnostics) {
  json d;
  try {
    d = json::parse(diagnostics);
  } catch (const json::parse_error&) {
    d = diagnostics;
  }
  std::cerr << json{{"error", what}, {"type", type}, {"diagnostics", d}}.dump() << "\n";
  return std::string(type) == "input" ? 2 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Braid monodromy of plane algebraic curves"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(0, 1);
  app.fallthrough();  // global flags may follow the subcommand

  Globals g;
  g.theta_opt = app.add_option("--theta", g.theta, "Fixed w-rotation angle (radians)");
  app.add_option("--seed", g.seed, "Reserved; all defaults are deterministic");
  app.add_option("--tol", g.tol, "Root finder backward-error tolerance")->check(CLI::PositiveNumber);
  app.add_option("--validate", g.validate, "Check a JSON document produced by this tool");

  std::string poly, loop_file, json_out, svg_out, qpf_file, events_out;
  double budget = 0.1, radius = 0.1, eps = 0.05;
  int res = 128;
  bool qp = false;
  std::vector<double> region_v, basepoint_v;
  std::vector<int> targets;

  auto* analyze_cmd = app.add_subcommand("analyze", "Branch points, genericity, rotation");
  analyze_cmd->add_option("--poly", poly, "Polynomial expression or file")->required();
  analyze_cmd->add_option("--budget", budget, "Perturbation budget");
  analyze_cmd->add_option("--json", json_out);

  auto* braid_cmd = app.add_subcommand("braid", "Braid word along a loop");
  braid_cmd->add_option("--poly", poly)->required();
  braid_cmd->add_option("--loop", loop_file, "Loop JSON file");
  braid_cmd->add_flag("--qp", qp, "Build a lollipop loop and read off its factorization");
  braid_cmd->add_option("--targets", targets, "Branch point indices (0-based)")->delimiter(',');
  braid_cmd->add_option("--basepoint", basepoint_v, "re,im")->delimiter(',');
  braid_cmd->add_option("--radius", radius, "Lollipop circle radius");
  braid_cmd->add_option("--budget", budget);
  braid_cmd->add_option("--events", events_out, "Write crossing events as JSON lines");
  braid_cmd->add_option("--json", json_out);

  auto* bplus_cmd = app.add_subcommand("bplus", "Sample the labelled graph B+");
  bplus_cmd->add_option("--poly", poly)->required();
  bplus_cmd->add_option("--region", region_v, "x0,y0,x1,y1")->delimiter(',')->required();
  bplus_cmd->add_option("--res", res, "Grid lines per axis")->check(CLI::Range(2, 4096));
  bplus_cmd->add_option("--loop", loop_file, "Loop to draw and cross-check");
  bplus_cmd->add_option("--budget", budget);
  bplus_cmd->add_option("--svg", svg_out);
  bplus_cmd->add_option("--json", json_out);

  auto* realize_cmd = app.add_subcommand("realize", "Curve and loop for a factorization");
  realize_cmd->add_option("--qpf", qpf_file, "Factorization JSON file")->required();
  realize_cmd->add_option("--epsilon", eps, "Constant term of the curve");
  realize_cmd->add_option("--svg", svg_out);
  realize_cmd->add_option("--json", json_out);

  auto* verify_cmd = app.add_subcommand("verify", "Refinement and exponent-sum checks");
  verify_cmd->add_option("--poly", poly)->required();
  verify_cmd->add_option("--loop", loop_file)->required();
  verify_cmd->add_option("--budget", budget);
  verify_cmd->add_option("--json", json_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!g.validate.empty()) {
      const std::string kind = validate_document(read_json_file(g.validate));
      std::cout << json{{"valid", true}, {"kind", kind}}.dump() << "\n";
      return 0;
    }

    if (*analyze_cmd) {
      auto a = run_analysis(g, poly, budget);
      emit({{"kind", "analysis"}, {"polynomial", to_json(a.f)}, {"branch", to_json(a.branch)}},
           json_out);
      return 0;
    }

    if (*braid_cmd) {
      auto a = run_analysis(g, poly, budget);
      const auto topts = track_options(g);
      json doc{{"kind", "braid"}};
      LoopPath loop;
      BraidWord word;
      if (qp) {
        if (targets.empty() || basepoint_v.size() != 2)
          throw InputError("--qp needs --targets and --basepoint re,im");
        for (int t : targets)
          if (t < 0 || t >= static_cast<int>(a.branch.points.size()))
            throw InputError("target index out of range");
        auto q = qp_factorization(a.f, a.branch, {{basepoint_v[0], basepoint_v[1]}, targets, radius},
                                  topts);
        loop = q.loop.path;
        word = q.word;
        doc["factorization"] = to_json(q.factorization);
        doc["radius"] = q.loop.spec.radius;
      } else {
        if (loop_file.empty()) throw InputError("braid needs --loop (or --qp)");
        loop = loop_from_json(read_json_file(loop_file));
      }
      const auto tr = track_roots(a.f, a.branch, loop, topts);
      if (!qp) word = word_from_events(a.f.n(), tr.events);
      if (!events_out.empty()) {
        std::string lines;
        for (const auto& e : tr.events) lines += to_json(e).dump() + "\n";
        write_text_file(events_out, lines);
      }
      doc["word"] = to_json(word);
      doc["text"] = word.to_string();
      doc["exponent_sum"] = exponent_sum(word);
      doc["enclosed"] = enclosed_count(loop, a.branch);
      doc["closure_components"] = closure_components(word);
      doc["simple"] = is_simple(loop);
      doc["theta"] = a.branch.rotation_theta;
      if (qp) doc["loop"] = to_json(loop);
      emit(doc, json_out);
      return 0;
    }

    if (*bplus_cmd) {
      auto a = run_analysis(g, poly, budget);
      BPlusOptions bo;
      bo.track.roots.tol = g.tol;
      const auto graph = sample_bplus(a.f, a.branch, region_from(region_v), res, bo);
      json doc = to_json(graph);
      doc["kind"] = "bplus_graph";
      std::optional<LoopPath> loop;
      if (!loop_file.empty()) {
        loop = loop_from_json(read_json_file(loop_file));
        const auto w = crossings_of(graph, *loop);
        doc["loop_word"] = to_json(w);
      }
      if (!svg_out.empty()) write_text_file(svg_out, render_plane_svg(graph, loop, a.branch));
      emit(doc, json_out);
      return 0;
    }

    if (*realize_cmd) {
      const auto qpf = factorization_from_json(read_json_file(qpf_file));
      const auto r = realize(qpf, eps);
      json doc{{"kind", "realization"},
               {"polynomial", to_json(r.f)},
               {"branch", to_json(r.branch)},
               {"factorization", to_json(qpf)},
               {"loop", to_json(r.loop)},
               {"simple", is_simple(r.loop)},
               {"verification", to_json(r.verification)},
               {"verification_text", r.verification.to_string()},
               {"expanded_text", expand_factorization(qpf).to_string()}};
      if (!svg_out.empty()) {
        const auto graph = sample_bplus(r.f, r.branch, region_around(r.loop, r.branch), 160);
        write_text_file(svg_out, render_plane_svg(graph, r.loop, r.branch));
      }
      emit(doc, json_out);
      return 0;
    }

    if (*verify_cmd) {
      auto a = run_analysis(g, poly, budget);
      const auto loop = loop_from_json(read_json_file(loop_file));
      auto topts = track_options(g);
      const auto w1 = braid_along(a.f, a.branch, loop, topts);
      topts.max_step /= 2;
      topts.t_tol /= 2;
      const auto w2 = braid_along(a.f, a.branch, loop, topts);
      const int enclosed = enclosed_count(loop, a.branch);
      const bool refine_ok = w1 == w2;
      const bool sum_ok = exponent_sum(w1) == enclosed;
      json doc{{"kind", "verify"},
               {"ok", refine_ok && sum_ok},
               {"word", to_json(w1)},
               {"text", w1.to_string()},
               {"checks",
                {{{"name", "refinement_invariance"}, {"ok", refine_ok}, {"refined", w2.to_string()}},
                 {{"name", "exponent_sum"},
                  {"ok", sum_ok},
                  {"exponent_sum", exponent_sum(w1)},
                  {"enclosed", enclosed}}}}};
      emit(doc, json_out);
      return refine_ok && sum_ok ? 0 : 1;
    }

    std::cout << app.help();
    return 0;
  } catch (const InputError& e) {
    return print_error("input", e.what(), "{}");
  } catch (const NumericalError& e) {
    return print_error("numerical", e.what(), e.diagnostics());
  } catch (const std::exception& e) {
    return print_error("numerical", e.what(), "{}");
  }
}
