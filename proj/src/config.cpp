#include "blockadapt/config.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace blockadapt {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
}

}  // namespace

std::string ExperimentConfig::to_json() const {
  json j;
  json jop;
  jop["variant"] = op.variant;
  jop["nodes"] = op.nodes;
  jop["k"] = op.k;
  jop["space"] = op.space;
  j["operator"] = jop;
  j["function"] = function;
  if (std::isinf(p))
    j["p"] = "inf";
  else
    j["p"] = p;
  if (domain_lo && domain_hi) {
    json dj;
    dj["lo"] = *domain_lo;
    dj["hi"] = *domain_hi;
    j["domain"] = dj;
  }
  j["kind"] = kind;
  j["budgets"] = budgets;
  j["M"] = M;
  j["weight"] = weight;
  j["quad_order"] = quad_order;
  j["grid_points"] = grid_points;
  j["out"] = out;
  return j.dump(2) + "\n";
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  json j = json::parse(text);
  reject_unknown(j,
                 {"operator", "function", "p", "domain", "kind", "budgets", "M", "weight",
                  "quad_order", "grid_points", "out"},
                 "the top level");
  ExperimentConfig c;
  if (j.contains("operator")) {
    const json& jop = j["operator"];
    reject_unknown(jop, {"variant", "nodes", "k", "space"}, "operator");
    if (jop.contains("variant")) c.op.variant = jop["variant"].get<std::string>();
    if (jop.contains("nodes")) c.op.nodes = jop["nodes"].get<std::string>();
    if (jop.contains("k")) c.op.k = jop["k"].get<int>();
    if (jop.contains("space")) c.op.space = jop["space"].get<std::string>();
  }
  if (j.contains("function")) c.function = j["function"].get<std::string>();
  if (j.contains("p")) {
    if (j["p"].is_string()) {
      if (j["p"].get<std::string>() != "inf")
        throw std::invalid_argument("config: p must be a number or \"inf\"");
      c.p = std::numeric_limits<double>::infinity();
    } else {
      c.p = j["p"].get<double>();
    }
  }
  if (j.contains("domain")) {
    const json& dj = j["domain"];
    reject_unknown(dj, {"lo", "hi"}, "domain");
    c.domain_lo = dj["lo"].get<std::vector<double>>();
    c.domain_hi = dj["hi"].get<std::vector<double>>();
  }
  if (j.contains("kind")) c.kind = j["kind"].get<std::string>();
  if (j.contains("budgets")) c.budgets = j["budgets"].get<std::vector<long long>>();
  if (j.contains("M")) c.M = j["M"].get<double>();
  if (j.contains("weight")) c.weight = j["weight"].get<std::string>();
  if (j.contains("quad_order")) c.quad_order = j["quad_order"].get<int>();
  if (j.contains("grid_points")) c.grid_points = j["grid_points"].get<int>();
  if (j.contains("out")) c.out = j["out"].get<std::string>();
  return c;
}

}  // namespace blockadapt
