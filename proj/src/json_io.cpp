#include "pi2/json_io.hpp"

#include <algorithm>

namespace pi2 {

namespace {

Signature sig_from_json(const Json& j) {
  if (!j.contains("variety")) throw std::invalid_argument("missing \"variety\"");
  auto v = variety_from_name(j.at("variety").get<std::string>());
  if (!v) throw std::invalid_argument("unknown variety " + j.at("variety").dump());
  return Signature{*v};
}

VarSet vars_from_json(const Json& j, const char* key) {
  std::vector<std::string> names;
  if (j.contains(key))
    for (const auto& e : j.at(key)) names.push_back(e.get<std::string>());
  return VarSet(names);
}

}  // namespace

UnificationProblem problem_from_json(const Json& j) {
  Signature sig = sig_from_json(j);
  VarSet vars = vars_from_json(j, "vars");
  VarSet restriction = vars_from_json(j, "restriction");
  std::vector<std::pair<Term, Term>> pairs;
  for (const auto& e : j.at("pairs")) {
    if (!e.is_array() || e.size() != 2)
      throw std::invalid_argument("each pair must be a two-element array");
    pairs.emplace_back(parse_term(e.at(0).get<std::string>(), sig),
                       parse_term(e.at(1).get<std::string>(), sig));
  }
  if (vars.empty()) {
    std::vector<Term> ts;
    for (auto& [l, r] : pairs) {
      ts.push_back(l);
      ts.push_back(r);
    }
    vars = terms_vars(ts).unite(restriction);
  }
  return UnificationProblem(sig, vars, restriction, std::move(pairs));
}

Json problem_to_json(const UnificationProblem& p) {
  Json j;
  j["variety"] = variety_name(p.sig.variety);
  j["vars"] = p.vars.names();
  j["restriction"] = p.restriction.names();
  Json pairs = Json::array();
  for (const auto& [l, r] : p.pairs) pairs.push_back({print_term(l), print_term(r)});
  j["pairs"] = pairs;
  return j;
}

Pi2Rule rule_from_json(const Json& j) {
  Signature sig = sig_from_json(j);
  VarSet bound = vars_from_json(j, "bound");
  std::vector<Term> premises;
  for (const auto& e : j.at("premises")) premises.push_back(parse_term(e.get<std::string>(), sig));
  Term conclusion = parse_term(j.at("conclusion").get<std::string>(), sig);
  return Pi2Rule(sig, bound, premises, conclusion);
}

std::optional<std::vector<std::vector<Term>>> factorization_from_json(const Json& j,
                                                                      const Signature& sig) {
  if (!j.contains("factorization")) return std::nullopt;
  std::vector<std::vector<Term>> out;
  for (const auto& factor : j.at("factorization")) {
    std::vector<Term> theta;
    for (const auto& e : factor) theta.push_back(parse_term(e.get<std::string>(), sig));
    out.push_back(std::move(theta));
  }
  return out;
}

SPoset sposet_from_json(const Json& j) {
  std::vector<std::string> labels;
  for (const auto& e : j.at("elements")) labels.push_back(e.get<std::string>());
  const int n = static_cast<int>(labels.size());
  if (n > 31) throw std::invalid_argument("S-posets limited to 31 elements");
  auto index = [&](const std::string& name) {
    auto it = std::find(labels.begin(), labels.end(), name);
    if (it == labels.end()) throw std::invalid_argument("unknown element " + name);
    return static_cast<int>(it - labels.begin());
  };
  Poset p{n, std::vector<std::uint32_t>(n, 0)};
  for (int i = 0; i < n; i++) p.up[i] = 1u << i;
  if (j.contains("leq"))
    for (const auto& e : j.at("leq")) {
      int a = index(e.at(0).get<std::string>());
      int b = index(e.at(1).get<std::string>());
      p.up[a] |= 1u << b;
    }
  // reflexive-transitive closure of the generating pairs
  bool changed = true;
  while (changed) {
    changed = false;
    for (int a = 0; a < n; a++)
      for (int b = 0; b < n; b++)
        if ((p.up[a] >> b & 1) && (p.up[b] & ~p.up[a])) {
          p.up[a] |= p.up[b];
          changed = true;
        }
  }
  for (int a = 0; a < n; a++)
    for (int b = 0; b < n; b++)
      if (a != b && p.leq(a, b) && p.leq(b, a))
        throw std::invalid_argument("leq closure is not antisymmetric");
  std::uint32_t s = 0;
  if (j.contains("S"))
    for (const auto& e : j.at("S")) s |= 1u << index(e.get<std::string>());
  return SPoset{p, s, labels};
}

Json sposet_to_json(const SPoset& x) {
  Json j;
  std::vector<std::string> labels = x.labels;
  if (static_cast<int>(labels.size()) != x.size()) {
    labels.clear();
    for (int i = 0; i < x.size(); i++) labels.push_back("e" + std::to_string(i));
  }
  j["elements"] = labels;
  Json leq = Json::array();
  for (int a = 0; a < x.size(); a++)
    for (int b = 0; b < x.size(); b++)
      if (a != b && x.poset.leq(a, b)) leq.push_back({labels[a], labels[b]});
  j["leq"] = leq;
  Json s = Json::array();
  for (int a = 0; a < x.size(); a++)
    if (x.in_s(a)) s.push_back(labels[a]);
  j["S"] = s;
  return j;
}

PartialMap partial_map_from_json(const Json& source, const Json& target, const Json& map) {
  SPoset src = sposet_from_json(source);
  SPoset dst = sposet_from_json(target);
  auto index = [](const SPoset& x, const std::string& name) {
    auto it = std::find(x.labels.begin(), x.labels.end(), name);
    if (it == x.labels.end()) throw std::invalid_argument("unknown element " + name);
    return static_cast<int>(it - x.labels.begin());
  };
  PartialMap f{src, dst, 0, std::vector<int>(src.size(), -1)};
  if (map.contains("map"))
    for (const auto& [k, v] : map.at("map").items()) {
      int a = index(src, k);
      f.dom |= 1u << a;
      f.map[a] = index(dst, v.get<std::string>());
    }
  if (map.contains("dom"))
    for (const auto& e : map.at("dom")) {
      int a = index(src, e.get<std::string>());
      if (!f.defined(a)) throw std::invalid_argument("dom lists an element without an image");
    }
  return f;
}

Json substitution_to_json(const Substitution& s) {
  Json j;
  j["domain"] = s.domain().names();
  j["codomain"] = s.codomain().names();
  Json m = Json::object();
  for (const auto& v : s.domain()) m[v] = print_term(s(v));
  j["map"] = m;
  return j;
}

Json basis_to_json(const UnifierBasis& b) {
  Json j;
  j["problem"] = problem_to_json(b.problem);
  Json us = Json::array();
  for (const Substitution& s : b.unifiers) us.push_back(substitution_to_json(s));
  j["unifiers"] = us;
  j["count"] = b.unifiers.size();
  j["certificate"] = certificate_name(b.certificate);
  j["notes"] = b.notes;
  j["outcome"] = b.unifiers.empty() ? "NOT_UNIFIABLE" : "UNIFIABLE";
  return j;
}

Json verdict_to_json(const AdmissibilityVerdict& v) {
  Json j;
  j["verdict"] = verdict_name(v.verdict);
  if (v.witness) j["witness"] = substitution_to_json(*v.witness);
  j["certification"] = certification_path_name(v.path);
  j["notes"] = v.notes;
  return j;
}

}  // namespace pi2
