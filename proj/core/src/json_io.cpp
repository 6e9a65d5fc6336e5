#include "evodyn/json_io.hpp"

#include <cstdio>
#include <ostream>
#include <set>

#include "json.hpp"

namespace evodyn {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& where) {
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw ParseError(where + ": unknown field \"" + key + "\"");
}

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ParseError("invalid JSON");
  return j;
}

}  // namespace

GameTree parse_game_json(const std::string& text) {
  json j = parse(text);
  if (!j.is_object()) throw ParseError("game file: top level must be an object");
  require_keys(j, {"players", "root", "nodes"}, "game file");
  if (!j.contains("players") || !j.contains("root") || !j.contains("nodes"))
    throw ParseError("game file: players, root and nodes are required");
  if (!j["players"].is_array() || j["players"].size() != 2)
    throw ParseError("game file: players must list exactly two names");

  GameTree g;
  g.players[0] = j["players"][0].get<std::string>();
  g.players[1] = j["players"][1].get<std::string>();

  const json& nodes = j["nodes"];
  if (!nodes.is_object()) throw ParseError("game file: nodes must be an object");
  std::map<std::string, int> index;
  for (const auto& [id, node] : nodes.items()) {
    index[id] = static_cast<int>(index.size());
    (void)node;
  }
  g.nodes.resize(index.size());
  for (const auto& [id, node] : nodes.items()) {
    GameNode& n = g.nodes[static_cast<std::size_t>(index[id])];
    n.name = id;
    if (!node.is_object() || !node.contains("type"))
      throw ParseError("game file: node " + id + " must be an object with a type");
    std::string type = node["type"].get<std::string>();
    if (type == "decision") {
      require_keys(node, {"type", "player", "infoset", "actions"}, "node " + id);
      if (!node.contains("player") || !node.contains("infoset") || !node.contains("actions"))
        throw ParseError("node " + id + ": player, infoset and actions are required");
      n.kind = NodeKind::decision;
      std::string player = node["player"].get<std::string>();
      if (player == g.players[0])
        n.agent = 0;
      else if (player == g.players[1])
        n.agent = 1;
      else
        throw ParseError("node " + id + ": unknown player \"" + player +
                         "\" (chance nodes are not supported)");
      n.infoset = node["infoset"].get<int>();
      if (!node["actions"].is_array() || node["actions"].empty())
        throw ParseError("node " + id + ": actions must be a nonempty array");
      for (const json& act : node["actions"]) {
        require_keys(act, {"label", "child"}, "node " + id + " action");
        if (!act.contains("label") || !act.contains("child"))
          throw ParseError("node " + id + ": each action needs label and child");
        std::string child = act["child"].get<std::string>();
        auto it = index.find(child);
        if (it == index.end()) throw ParseError("node " + id + ": unknown child \"" + child + "\"");
        n.actions.push_back(act["label"].get<std::string>());
        n.children.push_back(it->second);
      }
    } else if (type == "terminal") {
      require_keys(node, {"type", "payoffs"}, "node " + id);
      if (!node.contains("payoffs") || !node["payoffs"].is_array() ||
          node["payoffs"].size() != 2)
        throw ParseError("node " + id + ": payoffs must be an array of two numbers");
      n.kind = NodeKind::terminal;
      n.payoffs = {node["payoffs"][0].get<double>(), node["payoffs"][1].get<double>()};
    } else {
      throw ParseError("node " + id + ": unknown type \"" + type + "\"");
    }
  }
  std::string root = j["root"].get<std::string>();
  auto it = index.find(root);
  if (it == index.end()) throw ParseError("game file: unknown root \"" + root + "\"");
  g.root = it->second;
  return g;
}

std::string game_to_json(const GameTree& g) {
  json nodes = json::object();
  for (int id = 0; id < g.num_nodes(); ++id) {
    const GameNode& n = g.node(id);
    std::string name = n.name.empty() ? "n" + std::to_string(id) : n.name;
    json node;
    if (n.kind == NodeKind::decision) {
      node["type"] = "decision";
      node["player"] = g.players[static_cast<std::size_t>(n.agent)];
      node["infoset"] = n.infoset;
      json actions = json::array();
      for (std::size_t a = 0; a < n.actions.size(); ++a) {
        const GameNode& child = g.node(n.children[a]);
        actions.push_back({{"label", n.actions[a]},
                           {"child", child.name.empty()
                                         ? "n" + std::to_string(n.children[a])
                                         : child.name}});
      }
      node["actions"] = actions;
    } else {
      node["type"] = "terminal";
      node["payoffs"] = {n.payoffs[0], n.payoffs[1]};
    }
    nodes[name] = node;
  }
  const GameNode& r = g.node(g.root);
  json out{{"players", {g.players[0], g.players[1]}},
           {"root", r.name.empty() ? "n" + std::to_string(g.root) : r.name},
           {"nodes", nodes}};
  return out.dump(2);
}

ProfileFile parse_profile_json(const std::string& text) {
  json j = parse(text);
  if (!j.is_object()) throw ParseError("profile file: top level must be an object");
  require_keys(j, {"agent1", "agent2"}, "profile file");
  if (!j.contains("agent1") || !j.contains("agent2"))
    throw ParseError("profile file: agent1 and agent2 are required");
  ProfileFile p;
  for (int agent = 0; agent < 2; ++agent) {
    const json& obj = j[agent == 0 ? "agent1" : "agent2"];
    if (!obj.is_object()) throw ParseError("profile file: agent entries must be objects");
    for (const auto& [label, prob] : obj.items())
      p.entries[static_cast<std::size_t>(agent)][label] = prob.get<double>();
  }
  return p;
}

SequenceStrategy profile_to_sequence(const ProfileFile& p, const SequenceForm& sf, int agent) {
  SequenceStrategy x;
  x.agent = agent;
  x.x.assign(static_cast<std::size_t>(sf.num_seqs(agent)), 0.0);
  for (const auto& [label, prob] : p.entries[static_cast<std::size_t>(agent)]) {
    int q = sf.find(agent, label);
    if (q < 0) throw ParseError("strategy: unknown sequence label \"" + label + "\"");
    x.x[static_cast<std::size_t>(q)] = prob;
  }
  return x;
}

NormalStrategy profile_to_normal(const ProfileFile& p, const PlanSet& plans, int agent) {
  NormalStrategy pi;
  pi.agent = agent;
  pi.pi.assign(plans.plans.size(), 0.0);
  for (const auto& [label, prob] : p.entries[static_cast<std::size_t>(agent)]) {
    int idx = plans.find(label);
    if (idx < 0) throw ParseError("strategy: unknown plan label \"" + label + "\"");
    pi.pi[static_cast<std::size_t>(idx)] = prob;
  }
  return pi;
}

BehavioralStrategy profile_to_behavioral(const ProfileFile& p, const GameTree& g, int agent) {
  BehavioralStrategy s = uniform_behavioral(g, agent);
  for (auto& row : s.sigma) row.assign(row.size(), 0.0);
  std::map<int, std::vector<std::string>> labels;
  for (const GameNode& n : g.nodes)
    if (n.kind == NodeKind::decision && n.agent == agent) labels[n.infoset] = n.actions;
  for (const auto& [label, prob] : p.entries[static_cast<std::size_t>(agent)]) {
    auto colon = label.find(':');
    if (colon == std::string::npos)
      throw ParseError("strategy: behavioral label \"" + label + "\" must be infoset:action");
    int h = std::stoi(label.substr(0, colon));
    std::string action = label.substr(colon + 1);
    int pos = s.infoset_pos(h);
    if (pos < 0) throw ParseError("strategy: agent does not own infoset " + std::to_string(h));
    const auto& acts = labels.at(h);
    auto it = std::find(acts.begin(), acts.end(), action);
    if (it == acts.end())
      throw ParseError("strategy: unknown action \"" + action + "\" at infoset " +
                       std::to_string(h));
    s.sigma[static_cast<std::size_t>(pos)][static_cast<std::size_t>(it - acts.begin())] = prob;
  }
  return s;
}

std::string normal_form_to_json(const NormalForm& nf) {
  json out;
  for (int agent = 0; agent < 2; ++agent) {
    json plans = json::array();
    const PlanSet& ps = nf.plans[static_cast<std::size_t>(agent)];
    for (std::size_t i = 0; i < ps.plans.size(); ++i) plans.push_back(ps.label(i));
    out[agent == 0 ? "plans1" : "plans2"] = plans;
  }
  json u1 = json::array();
  json u2 = json::array();
  for (int i = 0; i < nf.u1.rows; ++i) {
    json r1 = json::array();
    json r2 = json::array();
    for (int jcol = 0; jcol < nf.u1.cols; ++jcol) {
      r1.push_back(nf.u1(i, jcol));
      r2.push_back(nf.u2(i, jcol));
    }
    u1.push_back(r1);
    u2.push_back(r2);
  }
  out["u1"] = u1;
  out["u2"] = u2;
  return out.dump(2);
}

std::string sequence_form_to_json(const SequenceForm& sf) {
  json out;
  for (int agent = 0; agent < 2; ++agent) {
    json seqs = json::array();
    for (const auto& si : sf.seqs[static_cast<std::size_t>(agent)]) seqs.push_back(si.label);
    out[agent == 0 ? "sequences1" : "sequences2"] = seqs;
  }
  json constraints = json::array();
  for (const auto& ext : sf.infosets) {
    json children = json::array();
    for (int e : ext.ext)
      children.push_back(sf.seqs[static_cast<std::size_t>(ext.agent)][static_cast<std::size_t>(e)]
                             .label);
    constraints.push_back({{"agent", ext.agent + 1},
                           {"infoset", ext.infoset},
                           {"parent", sf.seqs[static_cast<std::size_t>(ext.agent)]
                                          [static_cast<std::size_t>(ext.parent_seq)]
                                              .label},
                           {"children", children}});
  }
  out["constraints"] = constraints;
  for (int agent = 0; agent < 2; ++agent) {
    json entries = json::array();
    for (const auto& e : sf.payoff[static_cast<std::size_t>(agent)].entries)
      entries.push_back({{"row", sf.seqs[0][static_cast<std::size_t>(e.row)].label},
                         {"col", sf.seqs[1][static_cast<std::size_t>(e.col)].label},
                         {"value", e.value}});
    out[agent == 0 ? "payoffs1" : "payoffs2"] = entries;
  }
  return out.dump(2);
}

std::string stability_report_to_json(const StabilityReport& rep) {
  json evs = json::array();
  for (const auto& ev : rep.eigenvalues) evs.push_back({ev.real(), ev.imag()});
  json ties = json::array();
  for (const auto& [agent, infoset, chosen] : rep.tiebreaks)
    ties.push_back({{"agent", agent + 1}, {"infoset", infoset}, {"chosen", chosen}});
  json out{{"eigenvalues", evs},
           {"classification", to_string(rep.classification)},
           {"tiebreaks", ties}};
  return out.dump(2);
}

std::string equivalence_to_json(const EquivalenceResult& res) {
  json out{{"equivalent", res.equivalent}, {"max_discrepancy", res.max_discrepancy}};
  return out.dump(2);
}

std::string validation_report_to_json(const ValidationReport& rep) {
  json out{{"valid", rep.ok()}, {"violations", rep.violations}};
  return out.dump(2);
}

void write_trajectory_csv(std::ostream& os, const std::vector<std::string>& labels1,
                          const std::vector<std::string>& labels2,
                          const std::vector<TrajectoryPoint>& traj) {
  os << "t";
  for (const auto& l : labels1) os << ",1:" << l;
  for (const auto& l : labels2) os << ",2:" << l;
  os << ",u1,u2,residual\n";
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << ',' << buf;
  };
  for (const auto& p : traj) {
    std::snprintf(buf, sizeof(buf), "%.17g", p.t);
    os << buf;
    for (double v : p.x1) put(v);
    for (double v : p.x2) put(v);
    put(p.u1);
    put(p.u2);
    put(p.residual);
    os << '\n';
  }
}

}  // namespace evodyn
