#include "qpbraid/json_io.hpp"

#include <fstream>
#include <sstream>

#include "qpbraid/errors.hpp"

namespace qpbraid {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw InputError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

int int_field(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number_integer()) throw InputError(std::string("field \"") + key + "\" must be an integer");
  return v.get<int>();
}

double number(const json& v, const char* what) {
  if (!v.is_number()) throw InputError(std::string(what) + " must be a number");
  return v.get<double>();
}

std::vector<BraidLetter> letters_from_json(const json& arr) {
  if (!arr.is_array()) throw InputError("letters must be an array");
  std::vector<BraidLetter> out;
  for (const auto& l : arr) {
    if (!l.is_array() || l.size() != 2 || !l[0].is_number_integer() || !l[1].is_number_integer())
      throw InputError("a letter must be an [index, sign] pair of integers");
    const int sign = l[1].get<int>();
    if (sign != 1 && sign != -1) throw InputError("letter sign must be 1 or -1");
    out.push_back({l[0].get<int>(), sign});
  }
  return out;
}

json letters_to_json(const BraidWord& w) {
  json arr = json::array();
  for (const auto& l : w.letters()) arr.push_back({l.index, l.sign});
  return arr;
}

}  // namespace

json to_json(cplx z) { return {z.real(), z.imag()}; }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw InputError("complex number must be [re, im]");
  return {number(j[0], "real part"), number(j[1], "imaginary part")};
}

json to_json(const BraidWord& w) { return {{"n", w.strands()}, {"letters", letters_to_json(w)}}; }

BraidWord word_from_json(const json& j) {
  return BraidWord(int_field(j, "n"), letters_from_json(field(j, "letters")));
}

json to_json(const QuasipositiveFactorization& q) {
  json factors = json::array();
  for (const auto& f : q.factors)
    factors.push_back({{"conjugator", letters_to_json(f.conjugator)}, {"k", f.index}});
  return {{"n", q.strands}, {"factors", factors}};
}

QuasipositiveFactorization factorization_from_json(const json& j) {
  QuasipositiveFactorization q;
  q.strands = int_field(j, "n");
  if (q.strands < 1) throw InputError("n must be positive");
  const auto& fs = field(j, "factors");
  if (!fs.is_array()) throw InputError("factors must be an array");
  for (const auto& f : fs) {
    q.factors.push_back(
        {BraidWord(q.strands, letters_from_json(field(f, "conjugator"))), int_field(f, "k")});
  }
  q.validate();
  return q;
}

json to_json(const BivariatePolynomial& f) {
  json desc = json::array();
  const auto& c = f.w_coefficients();
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    json zc = json::array();
    for (cplx a : it->coeffs()) zc.push_back(to_json(a));
    desc.push_back(zc);
  }
  return {{"n", f.n()}, {"coeffs_w_desc", desc}};
}

BivariatePolynomial polynomial_from_json(const json& j) {
  const int n = int_field(j, "n");
  const auto& desc = field(j, "coeffs_w_desc");
  if (!desc.is_array() || static_cast<int>(desc.size()) != n + 1)
    throw InputError("coeffs_w_desc must list n + 1 coefficient polynomials");
  std::vector<UnivariatePolynomial> asc;
  for (auto it = desc.rbegin(); it != desc.rend(); ++it) {
    if (!it->is_array()) throw InputError("each coefficient must be a list of [re, im]");
    std::vector<cplx> zc;
    for (const auto& a : *it) zc.push_back(complex_from_json(a));
    asc.push_back(UnivariatePolynomial(zc));
  }
  return BivariatePolynomial(asc);
}

json to_json(const LoopPath& loop) {
  json segs = json::array();
  for (const auto& p : loop.primitives()) {
    if (const auto* s = std::get_if<Segment>(&p)) {
      segs.push_back({{"kind", "seg"}, {"a", to_json(s->a)}, {"b", to_json(s->b)}});
    } else {
      const auto& a = std::get<Arc>(p);
      segs.push_back({{"kind", "arc"},
                      {"center", to_json(a.center)},
                      {"radius", a.radius},
                      {"from", a.from},
                      {"to", a.to}});
    }
  }
  return {{"segments", segs}};
}

LoopPath loop_from_json(const json& j) {
  const auto& segs = field(j, "segments");
  if (!segs.is_array() || segs.empty()) throw InputError("segments must be a non-empty array");
  std::vector<PathPrimitive> prims;
  for (const auto& s : segs) {
    const auto& kind = field(s, "kind");
    if (kind == "seg") {
      prims.push_back(Segment{complex_from_json(field(s, "a")), complex_from_json(field(s, "b"))});
    } else if (kind == "arc") {
      prims.push_back(Arc{complex_from_json(field(s, "center")), number(field(s, "radius"), "radius"),
                          number(field(s, "from"), "from"), number(field(s, "to"), "to")});
    } else {
      throw InputError("segment kind must be \"seg\" or \"arc\"");
    }
  }
  return LoopPath(std::move(prims));
}

json to_json(const BranchData& b) {
  json pts = json::array();
  for (const auto& p : b.points) pts.push_back({{"z", to_json(p.z)}, {"multiplicity", p.multiplicity}});
  return {{"points", pts},
          {"generic", b.generic},
          {"theta", b.rotation_theta},
          {"rotation_margin", b.rotation_margin},
          {"epsilon", b.perturbation ? to_json(*b.perturbation) : json(nullptr)}};
}

BranchData branch_from_json(const json& j) {
  BranchData b;
  const auto& pts = field(j, "points");
  if (!pts.is_array()) throw InputError("points must be an array");
  for (const auto& p : pts) b.points.push_back({complex_from_json(field(p, "z")), int_field(p, "multiplicity")});
  const auto& g = field(j, "generic");
  if (!g.is_boolean()) throw InputError("generic must be a boolean");
  b.generic = g.get<bool>();
  b.rotation_theta = number(field(j, "theta"), "theta");
  if (j.contains("rotation_margin")) b.rotation_margin = number(j["rotation_margin"], "rotation_margin");
  const auto& e = field(j, "epsilon");
  if (!e.is_null()) b.perturbation = complex_from_json(e);
  return b;
}

json to_json(const BPlusGraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges) {
    json pts = json::array();
    for (cplx z : e.points) pts.push_back(to_json(z));
    edges.push_back({{"label", e.label}, {"coorientation", to_json(e.coorientation)}, {"points", pts}});
  }
  json verts = json::array();
  for (cplx z : g.vertices) verts.push_back(to_json(z));
  auto cells = [](const std::vector<GridCell>& cs) {
    json arr = json::array();
    for (const auto& c : cs) arr.push_back({{"i", c.i}, {"j", c.j}, {"reason", c.reason}});
    return arr;
  };
  return {{"region", {g.region.x0, g.region.y0, g.region.x1, g.region.y1}},
          {"resolution", g.resolution},
          {"n", g.strands},
          {"theta", g.theta},
          {"edges", edges},
          {"vertices", verts},
          {"flagged", cells(g.flagged)},
          {"excluded", cells(g.excluded)}};
}

json to_json(const CrossingEvent& e) {
  return {{"t", e.t},
          {"k", e.position_index},
          {"sign", e.sign},
          {"strands", {e.strand1, e.strand2}},
          {"z", to_json(e.z)},
          {"u", {to_json(e.u1), to_json(e.u2)}}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

namespace {

void check_graph(const json& j) {
  const auto& r = field(j, "region");
  if (!r.is_array() || r.size() != 4) throw InputError("region must have 4 numbers");
  for (const auto& v : r) number(v, "region bound");
  if (int_field(j, "resolution") < 2) throw InputError("resolution must be at least 2");
  const int n = int_field(j, "n");
  number(field(j, "theta"), "theta");
  for (const auto& e : field(j, "edges")) {
    const int label = int_field(e, "label");
    if (label < 1 || label >= n) throw InputError("edge label out of range");
    complex_from_json(field(e, "coorientation"));
    const auto& pts = field(e, "points");
    if (!pts.is_array() || pts.size() < 2) throw InputError("edge needs at least two points");
    for (const auto& p : pts) complex_from_json(p);
  }
  for (const auto& v : field(j, "vertices")) complex_from_json(v);
  for (const char* key : {"flagged", "excluded"})
    for (const auto& c : field(j, key)) int_field(c, "i"), int_field(c, "j");
}

}  // namespace

std::string validate_document(const json& j) {
  if (!j.is_object()) throw InputError("document must be a JSON object");
  std::string kind;
  if (j.contains("kind")) {
    if (!j["kind"].is_string()) throw InputError("kind must be a string");
    kind = j["kind"].get<std::string>();
  } else if (j.contains("coeffs_w_desc")) {
    kind = "polynomial";
  } else if (j.contains("factors")) {
    kind = "factorization";
  } else if (j.contains("letters")) {
    kind = "word";
  } else if (j.contains("segments")) {
    kind = "loop";
  } else {
    throw InputError("cannot tell the document kind");
  }

  if (kind == "polynomial") {
    polynomial_from_json(j);
  } else if (kind == "factorization") {
    factorization_from_json(j);
  } else if (kind == "word") {
    word_from_json(j);
  } else if (kind == "loop") {
    loop_from_json(j);
  } else if (kind == "analysis") {
    polynomial_from_json(field(j, "polynomial"));
    branch_from_json(field(j, "branch"));
  } else if (kind == "braid") {
    const auto w = word_from_json(field(j, "word"));
    if (!field(j, "text").is_string()) throw InputError("text must be a string");
    if (int_field(j, "exponent_sum") != exponent_sum(w))
      throw InputError("exponent_sum does not match the word");
    int_field(j, "enclosed");
    if (j.contains("factorization")) factorization_from_json(j["factorization"]);
  } else if (kind == "bplus_graph") {
    check_graph(j);
  } else if (kind == "realization") {
    const auto f = polynomial_from_json(field(j, "polynomial"));
    loop_from_json(field(j, "loop"));
    const auto q = factorization_from_json(field(j, "factorization"));
    const auto v = word_from_json(field(j, "verification"));
    if (v.strands() != f.n() || q.strands != f.n()) throw InputError("strand counts disagree");
  } else if (kind == "verify") {
    if (!field(j, "ok").is_boolean()) throw InputError("ok must be a boolean");
    for (const auto& c : field(j, "checks")) {
      if (!field(c, "name").is_string() || !field(c, "ok").is_boolean())
        throw InputError("each check needs a name and an ok flag");
    }
  } else {
    throw InputError("unknown document kind \"" + kind + "\"");
  }
  return kind;
}

}  // namespace qpbraid
