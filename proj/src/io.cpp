#include "twosided/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "twosided/error.hpp"

namespace twosided {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& origin, const std::string& path, const std::string& what) {
  fail(ErrorKind::kSchema, origin + ": " + (path.empty() ? "" : path + ": ") + what);
}

json parse_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail(ErrorKind::kSchema, origin + ": line " + std::to_string(line) + ", column " + std::to_string(col) +
                                 ": malformed JSON");
  }
}

const json& field(const json& obj, const char* key, const std::string& origin, const std::string& path) {
  if (!obj.is_object()) schema(origin, path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema(origin, path, std::string("missing field \"") + key + "\"");
  return *it;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t k) { return path + "[" + std::to_string(k) + "]"; }

Rat rat_of(const json& v, const std::string& origin, const std::string& path) {
  if (v.is_number_integer()) return Rat(v.get<std::int64_t>());
  if (!v.is_string()) schema(origin, path, "expected a rational as a \"num/den\" string or an integer");
  try {
    return Rat::parse(v.get<std::string>());
  } catch (const Error& e) {
    schema(origin, path, e.what());
  }
}

int count_of(const json& v, const std::string& origin, const std::string& path) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0 || v.get<std::int64_t>() > 1000000)
    schema(origin, path, "expected a nonnegative integer");
  return static_cast<int>(v.get<std::int64_t>());
}

Distribution dist_of(const json& v, const std::string& origin, const std::string& path) {
  const json& type = field(v, "type", origin, path);
  if (!type.is_string()) schema(origin, join(path, "type"), "expected a string");
  std::string t = type.get<std::string>();
  try {
    if (t == "discrete") {
      const json& atoms = field(v, "atoms", origin, path);
      if (!atoms.is_array() || atoms.empty()) schema(origin, join(path, "atoms"), "expected a nonempty array");
      std::vector<Atom> out;
      for (std::size_t k = 0; k < atoms.size(); ++k) {
        std::string p = at(join(path, "atoms"), k);
        if (!atoms[k].is_array() || atoms[k].size() != 2) schema(origin, p, "expected [value, probability]");
        out.push_back({rat_of(atoms[k][0], origin, p + "[0]"), rat_of(atoms[k][1], origin, p + "[1]")});
      }
      std::sort(out.begin(), out.end(), [](const Atom& x, const Atom& y) { return x.value < y.value; });
      return Distribution::discrete(std::move(out));
    }
    if (t == "uniform")
      return Distribution::uniform(rat_of(field(v, "lo", origin, path), origin, join(path, "lo")),
                                   rat_of(field(v, "hi", origin, path), origin, join(path, "hi")));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kSchema) throw;
    schema(origin, path, e.what());
  }
  schema(origin, join(path, "type"), "unknown distribution type \"" + t + "\"");
}

std::vector<Distribution> dists_of(const json& v, const std::string& origin, const std::string& path, int expected) {
  if (!v.is_array()) schema(origin, path, "expected an array");
  std::vector<Distribution> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(dist_of(v[k], origin, at(path, k)));
  if (static_cast<int>(out.size()) != expected)
    schema(origin, path, "expected " + std::to_string(expected) + " entries, got " + std::to_string(out.size()));
  return out;
}

json dist_to_json(const Distribution& d) {
  json j;
  if (d.is_discrete()) {
    j["type"] = "discrete";
    j["atoms"] = json::array();
    for (const auto& a : d.atoms()) j["atoms"].push_back({a.value.str(), a.prob.str()});
  } else {
    j["type"] = "uniform";
    j["lo"] = d.lo().str();
    j["hi"] = d.hi().str();
  }
  return j;
}

json rats(const std::vector<Rat>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.str());
  return a;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  json root = parse_text(text, origin);
  const json& graph = field(root, "graph", origin, "");
  int n = count_of(field(graph, "buyers", origin, "graph"), origin, "graph.buyers");
  int m = count_of(field(graph, "sellers", origin, "graph"), origin, "graph.sellers");
  bool complete = false;
  if (auto it = graph.find("complete"); it != graph.end()) {
    if (!it->is_boolean()) schema(origin, "graph.complete", "expected true or false");
    complete = it->get<bool>();
  }
  bool has_edges = graph.contains("edges");
  if (complete && has_edges) schema(origin, "graph", "give either \"edges\" or \"complete\": true, not both");
  if (!complete && !has_edges) schema(origin, "graph", "missing field \"edges\" (or \"complete\": true)");

  std::vector<Edge> edges;
  if (complete) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) edges.emplace_back(i, j);
  } else {
    const json& e = graph["edges"];
    if (!e.is_array()) schema(origin, "graph.edges", "expected an array of [buyer, seller] pairs");
    for (std::size_t k = 0; k < e.size(); ++k) {
      std::string p = at("graph.edges", k);
      if (!e[k].is_array() || e[k].size() != 2 || !e[k][0].is_number_integer() || !e[k][1].is_number_integer())
        schema(origin, p, "expected [buyer, seller]");
      edges.emplace_back(e[k][0].get<int>(), e[k][1].get<int>());
    }
  }
  Scenario sc{MarketGraph(0, 0, {}), {}, {}};
  try {
    sc.graph = complete ? MarketGraph::complete(n, m) : MarketGraph(n, m, edges);
  } catch (const Error& e) {
    schema(origin, "graph", e.what());
  }
  sc.buyer_dists = dists_of(field(root, "buyer_dists", origin, ""), origin, "buyer_dists", n);
  sc.seller_dists = dists_of(field(root, "seller_dists", origin, ""), origin, "seller_dists", m);
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::kIo, "cannot open scenario file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

std::string scenario_json(const Scenario& sc) {
  json j;
  j["graph"]["buyers"] = sc.graph.buyer_count();
  j["graph"]["sellers"] = sc.graph.seller_count();
  if (sc.graph.is_complete()) {
    j["graph"]["complete"] = true;
  } else {
    j["graph"]["edges"] = json::array();
    for (const auto& [i, k] : sc.graph.edges()) j["graph"]["edges"].push_back({i, k});
  }
  j["buyer_dists"] = json::array();
  for (const auto& d : sc.buyer_dists) j["buyer_dists"].push_back(dist_to_json(d));
  j["seller_dists"] = json::array();
  for (const auto& d : sc.seller_dists) j["seller_dists"].push_back(dist_to_json(d));
  return j.dump(2) + "\n";
}

Distribution parse_distribution(const std::string& text) {
  return dist_of(parse_text(text, "distribution"), "distribution", "");
}

std::string distribution_json(const Distribution& d) { return dist_to_json(d).dump(); }

ValuationProfile parse_profile(const std::string& text) {
  const std::string origin = "profile";
  json root = parse_text(text, origin);
  ValuationProfile p;
  for (const char* side : {"b", "s"}) {
    const json& v = field(root, side, origin, "");
    if (!v.is_array()) schema(origin, side, "expected an array");
    auto& out = side[0] == 'b' ? p.b : p.s;
    for (std::size_t k = 0; k < v.size(); ++k) out.push_back(rat_of(v[k], origin, at(side, k)));
  }
  return p;
}

std::string profile_json(const ValuationProfile& p) {
  json j;
  j["b"] = rats(p.b);
  j["s"] = rats(p.s);
  return j.dump();
}

std::string outcome_json(const TradeOutcome& o) {
  json j;
  j["mechanism"] = o.mechanism;
  j["coin"] = o.coin ? json(coin_name(*o.coin)) : json(nullptr);
  j["trades"] = json::array();
  std::vector<Trade> trades = o.trades;
  std::sort(trades.begin(), trades.end(), [](const Trade& x, const Trade& y) { return x.buyer < y.buyer; });
  for (const auto& t : trades)
    j["trades"].push_back({{"buyer", t.buyer},
                           {"seller", t.seller},
                           {"buyer_payment", t.buyer_payment.str()},
                           {"seller_receipt", t.seller_receipt.str()}});
  return j.dump(2) + "\n";
}

std::string audit_json(const std::vector<AuditReport>& reports) {
  json j;
  bool all = true;
  j["reports"] = json::array();
  for (const auto& r : reports) {
    all = all && (r.passed || r.advisory);
    j["reports"].push_back({{"property", r.property},
                            {"instance", r.instance},
                            {"passed", r.passed},
                            {"advisory", r.advisory},
                            {"witness", r.witness ? json(*r.witness) : json(nullptr)},
                            {"margin", r.margin.str()},
                            {"checks", r.checks}});
  }
  j["passed"] = all;
  return j.dump(2) + "\n";
}

}  // namespace twosided
