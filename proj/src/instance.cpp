#include "instance.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace trivar {

using nlohmann::json;

Rational rational_from_json_text(const std::string& field, const std::string& text) {
  try {
    return Rational::from_string(text);
  } catch (const Error& e) {
    throw input_error(field + ": " + e.what());
  }
}

namespace {

Rational parse_rational(const std::string& field, const json& j) {
  if (j.is_string()) return rational_from_json_text(field, j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw input_error(field + ": expected a rational as \"p/q\" string or integer");
}

std::vector<Rational> parse_rational_list(const std::string& field, const json& j) {
  if (!j.is_array()) throw input_error(field + ": expected an array");
  std::vector<Rational> out;
  out.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(parse_rational(field + "[" + std::to_string(i) + "]", j[i]));
  return out;
}

UniPoly parse_unipoly(const std::string& field, const json& j) {
  return UniPoly(parse_rational_list(field, j));
}

std::vector<std::array<Rational, 2>> parse_points(const std::string& field, const json& j) {
  if (!j.is_array()) throw input_error(field + ": expected an array of points");
  std::vector<std::array<Rational, 2>> out;
  out.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    const json& p = j[i];
    std::string at = field + "[" + std::to_string(i) + "]";
    if (!p.is_array() || p.size() != 2) throw input_error(at + ": expected [x, y]");
    out.push_back({parse_rational(at + "[0]", p[0]), parse_rational(at + "[1]", p[1])});
  }
  return out;
}

ParamCurve parse_curve(const std::string& field, const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "x-axis") return ParamCurve::x_axis();
    throw input_error(field + ": unknown curve marker \"" + j.get<std::string>() + "\"");
  }
  if (!j.is_object()) throw input_error(field + ": expected a curve object or \"x-axis\"");
  if (!j.contains("x") || !j.contains("y")) throw input_error(field + ": needs x and y coefficient lists");
  UniPoly x = parse_unipoly(field + ".x", j["x"]);
  UniPoly y = parse_unipoly(field + ".y", j["y"]);
  UniPoly dx = j.contains("den_x") ? parse_unipoly(field + ".den_x", j["den_x"])
                                   : UniPoly::constant(Rational(1));
  UniPoly dy = j.contains("den_y") ? parse_unipoly(field + ".den_y", j["den_y"])
                                   : UniPoly::constant(Rational(1));
  if (dx.is_zero() || dy.is_zero()) throw input_error(field + ": denominator is the zero polynomial");
  return ParamCurve(std::move(x), std::move(dx), std::move(y), std::move(dy));
}

MultiPoly parse_multipoly(const std::string& field, const json& j) {
  if (!j.is_object() || !j.contains("variables") || !j.contains("terms"))
    throw input_error(field + ": expected {variables, terms}");
  std::vector<std::string> vars;
  for (const auto& v : j["variables"]) {
    if (!v.is_string()) throw input_error(field + ".variables: expected names");
    vars.push_back(v.get<std::string>());
  }
  std::vector<MultiPoly::Term> terms;
  const json& jt = j["terms"];
  if (!jt.is_array()) throw input_error(field + ".terms: expected an array");
  for (size_t i = 0; i < jt.size(); ++i) {
    std::string at = field + ".terms[" + std::to_string(i) + "]";
    const json& t = jt[i];
    if (!t.is_object() || !t.contains("exps") || !t.contains("coef"))
      throw input_error(at + ": expected {exps, coef}");
    MultiPoly::Term term;
    for (const auto& e : t["exps"]) {
      if (!e.is_number_unsigned() && !e.is_number_integer())
        throw input_error(at + ".exps: expected nonnegative integers");
      long long v = e.get<long long>();
      if (v < 0) throw input_error(at + ".exps: negative exponent");
      term.exps.push_back(static_cast<unsigned>(v));
    }
    if (term.exps.size() != vars.size()) throw input_error(at + ".exps: length must match variables");
    term.coef = parse_rational(at + ".coef", t["coef"]);
    terms.push_back(std::move(term));
  }
  return MultiPoly::from_terms(std::move(vars), std::move(terms));
}

json unipoly_to_json(const UniPoly& p) {
  json out = json::array();
  for (int i = 0; i <= p.degree(); ++i) out.push_back(p.coef(static_cast<size_t>(i)).to_string());
  if (p.is_zero()) out.push_back("0");
  return out;
}

json curve_to_json(const ParamCurve& c) {
  if (c.is_x_axis()) return json("x-axis");
  json out;
  out["x"] = unipoly_to_json(c.x_num());
  out["y"] = unipoly_to_json(c.y_num());
  if (c.x_den().degree() > 0 || !(c.x_den().coef(0) == Rational(1))) out["den_x"] = unipoly_to_json(c.x_den());
  if (c.y_den().degree() > 0 || !(c.y_den().coef(0) == Rational(1))) out["den_y"] = unipoly_to_json(c.y_den());
  return out;
}

json multipoly_to_json(const MultiPoly& p) {
  json out;
  out["variables"] = p.vars();
  json terms = json::array();
  for (const auto& t : p.terms()) {
    json exps = json::array();
    for (unsigned e : t.exps) exps.push_back(e);
    terms.push_back({{"exps", std::move(exps)}, {"coef", t.coef.to_string()}});
  }
  out["terms"] = std::move(terms);
  return out;
}

json points_to_json(const std::vector<std::array<Rational, 2>>& pts) {
  json out = json::array();
  for (const auto& p : pts) out.push_back(json::array({p[0].to_string(), p[1].to_string()}));
  return out;
}

json rationals_to_json(const std::vector<Rational>& v) {
  json out = json::array();
  for (const auto& r : v) out.push_back(r.to_string());
  return out;
}

std::vector<std::vector<Rational>> parse_vectors(const std::string& field, const json& j, int d) {
  if (!j.is_array()) throw input_error(field + ": expected an array of points");
  std::vector<std::vector<Rational>> out;
  for (size_t i = 0; i < j.size(); ++i) {
    auto v = parse_rational_list(field + "[" + std::to_string(i) + "]", j[i]);
    if (static_cast<int>(v.size()) != d)
      throw input_error(field + "[" + std::to_string(i) + "]: expected " + std::to_string(d) + " coordinates");
    out.push_back(std::move(v));
  }
  return out;
}

json vectors_to_json(const std::vector<std::vector<Rational>>& pts) {
  json out = json::array();
  for (const auto& p : pts) out.push_back(rationals_to_json(p));
  return out;
}

}  // namespace

std::vector<std::array<Rational, 2>> Instance::B_points() const {
  std::vector<std::array<Rational, 2>> out;
  out.reserve(T.size());
  for (const auto& t : T) out.push_back(curveB.eval(t));
  return out;
}

std::vector<std::array<Rational, 2>> Instance::C_points() const {
  std::vector<std::array<Rational, 2>> out;
  out.reserve(S.size());
  for (const auto& s : S) out.push_back(curveC.eval(s));
  return out;
}

size_t Instance::n() const {
  if (highdim) return std::max({highdim->A.size(), highdim->B.size(), highdim->C.size()});
  return std::max({A.size(), T.size(), S.size()});
}

void Instance::mark_tainted() {
  for (auto& p : A) {
    p[0].mark_tainted();
    p[1].mark_tainted();
  }
  for (auto& t : T) t.mark_tainted();
  for (auto& s : S) s.mark_tainted();
  curveB.mark_tainted();
  curveC.mark_tainted();
  if (F) F->mark_tainted();
  if (G) G->mark_tainted();
  if (highdim) {
    auto mark_all = [](std::vector<std::vector<Rational>>& pts) {
      for (auto& p : pts)
        for (auto& c : p) c.mark_tainted();
    };
    mark_all(highdim->A);
    mark_all(highdim->B);
    mark_all(highdim->C);
    for (auto& c : highdim->h1) c.mark_tainted();
    for (auto& c : highdim->h2) c.mark_tainted();
  }
}

std::string Instance::to_json(int indent) const {
  json j;
  j["A"] = points_to_json(A);
  j["curveB"] = curve_to_json(curveB);
  j["T"] = rationals_to_json(T);
  j["curveC"] = curve_to_json(curveC);
  j["S"] = rationals_to_json(S);
  if (F) j["F"] = multipoly_to_json(*F);
  if (G) j["G"] = multipoly_to_json(*G);
  if (highdim) {
    json h;
    h["d"] = highdim->d;
    h["A"] = vectors_to_json(highdim->A);
    h["B"] = vectors_to_json(highdim->B);
    h["C"] = vectors_to_json(highdim->C);
    h["h1"] = rationals_to_json(highdim->h1);
    h["h2"] = rationals_to_json(highdim->h2);
    j["highdim"] = std::move(h);
  }
  return j.dump(indent);
}

Instance Instance::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw input_error(std::string("instance JSON: ") + e.what());
  }
  if (!j.is_object()) throw input_error("instance JSON: expected an object");

  Instance inst;
  bool has_highdim = j.contains("highdim");
  if (j.contains("A")) inst.A = parse_points("A", j["A"]);
  if (j.contains("curveB")) inst.curveB = parse_curve("curveB", j["curveB"]);
  if (j.contains("T")) inst.T = parse_rational_list("T", j["T"]);
  if (j.contains("curveC")) {
    inst.curveC = parse_curve("curveC", j["curveC"]);
  } else if (j.contains("x-axis")) {
    inst.curveC = ParamCurve::x_axis();
  }
  if (j.contains("S")) inst.S = parse_rational_list("S", j["S"]);
  if (!has_highdim) {
    for (const char* k : {"A", "T", "S"})
      if (!j.contains(k)) throw input_error(std::string(k) + ": required field missing");
  }
  if (j.contains("F")) inst.F = parse_multipoly("F", j["F"]);
  if (j.contains("G")) inst.G = parse_multipoly("G", j["G"]);
  if (has_highdim) {
    const json& h = j["highdim"];
    if (!h.is_object() || !h.contains("d")) throw input_error("highdim: expected {d, A, B, C, h1, h2}");
    HighDimInstance hd;
    hd.d = h["d"].get<int>();
    if (hd.d < 3) throw input_error("highdim.d: need d >= 3");
    hd.A = parse_vectors("highdim.A", h.value("A", json::array()), hd.d);
    hd.B = parse_vectors("highdim.B", h.value("B", json::array()), hd.d);
    hd.C = parse_vectors("highdim.C", h.value("C", json::array()), hd.d);
    hd.h1 = parse_rational_list("highdim.h1", h.value("h1", json::array()));
    hd.h2 = parse_rational_list("highdim.h2", h.value("h2", json::array()));
    if (static_cast<int>(hd.h1.size()) != hd.d + 1 || static_cast<int>(hd.h2.size()) != hd.d + 1)
      throw input_error("highdim.h1/h2: expected d+1 coefficients (c0, c1, ..., cd)");
    inst.highdim = std::move(hd);
  }

  // Instance invariant: parameters evaluate to finite points.
  for (size_t i = 0; i < inst.T.size(); ++i)
    if (inst.curveB.is_pole(inst.T[i]))
      throw input_error("T[" + std::to_string(i) + "]: parameter hits a curveB pole");
  for (size_t i = 0; i < inst.S.size(); ++i)
    if (inst.curveC.is_pole(inst.S[i]))
      throw input_error("S[" + std::to_string(i) + "]: parameter hits a curveC pole");

  inst.mark_tainted();
  return inst;
}

Instance Instance::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void Instance::save(const std::string& path, int indent) const {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write " + path);
  out << to_json(indent) << "\n";
}

uint64_t Instance::digest() const {
  std::string canon = to_json(-1);
  return hash_bytes(canon.data(), canon.size());
}

}  // namespace trivar
