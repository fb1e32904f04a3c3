#include "nlbound/json_io.hpp"

#include <stdexcept>

namespace nlbound {

namespace {

Rational entry_from_json(const Json& e) {
  if (e.is_string()) return Rational::parse(e.get<std::string>());
  if (e.is_number_integer()) return Rational(e.get<long>());
  throw std::invalid_argument("box: entries must be \"n/d\" strings or integers");
}

Json table_to_json(const TruthTable& t) {
  Json out = Json::array();
  for (auto b : t) out.push_back(static_cast<int>(b));
  return out;
}

TruthTable table_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("protocol: truth table must be an array of bits");
  TruthTable t;
  for (const auto& b : j) {
    const int v = b.get<int>();
    if (v != 0 && v != 1) throw std::invalid_argument("protocol: truth table entries must be 0 or 1");
    t.push_back(static_cast<std::uint8_t>(v));
  }
  return t;
}

Json plan_to_json(const InputPlan& plan) {
  Json inputs = Json::array();
  for (const auto& t : plan.inputs) inputs.push_back(table_to_json(t));
  return {{"order", plan.order}, {"inputs", inputs}};
}

InputPlan plan_from_json(const Json& j) {
  InputPlan plan;
  plan.order = j.at("order").get<std::vector<int>>();
  for (const auto& t : j.at("inputs")) plan.inputs.push_back(table_from_json(t));
  return plan;
}

Json profile_to_json(const ClassProfile& p) { return {{"k0", p.k0}, {"k1", p.k1}, {"l0", p.l0}, {"l1", p.l1}}; }

}  // namespace

Json box_to_json(const BinarySystem& p) {
  Json rows = Json::array();
  for (int x = 0; x < 2; ++x) {
    Json row = Json::array();
    for (int y = 0; y < 2; ++y) {
      Json cell = Json::array();
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) cell.push_back(p(x, y, a, b).fraction_str());
      row.push_back(cell);
    }
    rows.push_back(row);
  }
  return {{"p", rows}};
}

BinarySystem box_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("p")) throw std::invalid_argument("box: expected an object with key \"p\"");
  const Json& rows = j.at("p");
  if (!rows.is_array() || rows.size() != 2) throw std::invalid_argument("box: \"p\" must have 2 rows (x)");
  BinarySystem p;
  for (int x = 0; x < 2; ++x) {
    if (!rows[x].is_array() || rows[x].size() != 2) throw std::invalid_argument("box: each row must have 2 cells (y)");
    for (int y = 0; y < 2; ++y) {
      const Json& cell = rows[x][y];
      if (!cell.is_array() || cell.size() != 4) throw std::invalid_argument("box: each cell must have 4 entries (a,b)");
      for (int i = 0; i < 4; ++i) p(x, y, i >> 1, i & 1) = entry_from_json(cell[i]);
    }
  }
  return p;
}

Json protocol_to_json(const Protocol& protocol) {
  Json alice = Json::array(), bob = Json::array(), f = Json::array(), g = Json::array();
  for (int x = 0; x < 2; ++x) {
    alice.push_back(plan_to_json(protocol.alice.plans[x]));
    bob.push_back(plan_to_json(protocol.bob.plans[x]));
    f.push_back(table_to_json(protocol.f[x]));
    g.push_back(table_to_json(protocol.g[x]));
  }
  return {{"n", protocol.n}, {"alice", alice}, {"bob", bob}, {"f", f}, {"g", g}};
}

Protocol protocol_from_json(const Json& j) {
  try {
    Protocol pr;
    pr.n = j.at("n").get<int>();
    for (const char* key : {"alice", "bob", "f", "g"})
      if (!j.at(key).is_array() || j.at(key).size() != 2)
        throw std::invalid_argument(std::string("protocol: \"") + key + "\" must have one entry per input bit");
    for (int x = 0; x < 2; ++x) {
      pr.alice.plans[x] = plan_from_json(j.at("alice")[x]);
      pr.bob.plans[x] = plan_from_json(j.at("bob")[x]);
      pr.f[x] = table_from_json(j.at("f")[x]);
      pr.g[x] = table_from_json(j.at("g")[x]);
    }
    check_protocol(pr);
    return pr;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("protocol: ") + e.what());
  }
}

Json validation_to_json(const ValidationReport& report) {
  static const char* kinds[] = {"negative_entry", "normalization", "alice_signaling", "bob_signaling"};
  Json list = Json::array();
  for (const auto& v : report.violations) {
    Json where = Json::array();
    for (int i : v.where)
      if (i >= 0) where.push_back(i);
    list.push_back({{"kind", kinds[static_cast<int>(v.kind)]}, {"where", where}, {"message", v.describe()}});
  }
  return {{"valid", report.ok()}, {"violations", list}};
}

Json decomposition_to_json(const Decomposition& d) {
  Json weights = Json::array();
  for (const auto& w : d.weights) weights.push_back(w.fraction_str());
  Json out = {{"epsilon", d.epsilon.fraction_str()},
              {"q", d.q.fraction_str()},
              {"p_f", d.facet_weight.fraction_str()},
              {"local_part", d.local_part.fraction_str()},
              {"weights", weights},
              {"facet", {{"id", d.facet.index()}, {"expression", d.facet.str()}}},
              {"p_iso", box_to_json(d.p_iso).at("p")}};
  if (d.p_local) out["p_local"] = box_to_json(*d.p_local).at("p");
  return out;
}

Json bound_to_json(const BoundReport& r) {
  Json out = {{"n", r.n},
              {"system", r.system},
              {"nl", r.nl.fraction_str()},
              {"bound", r.raw_bound.fraction_str()},
              {"bound_clamped", r.clamped_bound.fraction_str()},
              {"witness", profile_to_json(r.witness)}};
  if (r.decomposition) out["decomposition"] = decomposition_to_json(*r.decomposition);
  return out;
}

Json search_to_json(const SearchReport& r) {
  return {{"n", r.n},
          {"D", r.value.fraction_str()},
          {"nl", r.nl.fraction_str()},
          {"distills", r.distills},
          {"protocols", r.protocols},
          {"pairs_total", r.pairs_total},
          {"pairs_exact", r.pairs_exact},
          {"seconds_approx", r.seconds},
          {"witness", protocol_to_json(r.witness)}};
}

}  // namespace nlbound
