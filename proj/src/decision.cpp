#include "decision.hpp"

namespace trivar {

namespace {

nlohmann::json rat(const Rational& v) { return v.to_string(); }

nlohmann::json rat_list(const std::vector<Rational>& vs) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& v : vs) a.push_back(rat(v));
  return a;
}

}  // namespace

nlohmann::json Witness::to_json() const {
  nlohmann::json j{{"ia", ia}, {"ib", ib}, {"ic", ic}};
  if (a_d.empty()) {
    j["a"] = {rat(a[0]), rat(a[1])};
    j["t"] = rat(t);
    j["s"] = rat(s);
  } else {
    j["a"] = rat_list(a_d);
    j["b"] = rat_list(b_d);
    j["c"] = rat_list(c_d);
  }
  return j;
}

std::string Decision::to_json(int indent) const {
  nlohmann::json j;
  j["verdict"] = found ? "found" : "not_found";
  if (witness) j["witness"] = witness->to_json();
  j["ledger"] = nlohmann::json::parse(ledger.report_json());
  j["diagnostics"] = diagnostics;
  return j.dump(indent);
}

}  // namespace trivar
