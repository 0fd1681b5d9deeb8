#pragma once

// JSON ingestion and emission for algebras, spaces and verdicts; DOT output
// for Hasse diagrams.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "mvlat/duality.hpp"

namespace mvlat::io {

using nlohmann::json;

namespace detail {

[[noreturn]] inline void schema(const std::string& where, const std::string& what) {
  throw input_error(where + ": " + what);
}

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) schema(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema(where, std::string("missing field '") + key + "'");
  return *it;
}

inline std::string str_at(const json& j, const std::string& where) {
  if (!j.is_string()) schema(where, "expected a string");
  return j.get<std::string>();
}

inline int int_at(const json& j, const std::string& where) {
  if (!j.is_number_integer()) schema(where, "expected an integer");
  return j.get<int>();
}

inline const json& array_at(const json& j, const std::string& where) {
  if (!j.is_array()) schema(where, "expected an array");
  return j;
}

inline UnitRational rational_at(const json& j, const std::string& where) {
  if (j.is_number_integer()) {
    auto v = j.get<long long>();
    if (v != 0 && v != 1) schema(where, "integer values must be 0 or 1");
    return UnitRational(v, 1);
  }
  try {
    return UnitRational::parse(str_at(j, where));
  } catch (const input_error& e) {
    schema(where, e.what());
  }
}

inline Tuple tuple_at(const json& j, const std::string& where) {
  Tuple t;
  const auto& arr = array_at(j, where);
  for (std::size_t i = 0; i < arr.size(); ++i) t.push_back(rational_at(arr[i], where + "[" + std::to_string(i) + "]"));
  return t;
}

inline std::vector<int> chains_at(const json& j, const std::string& where) {
  std::vector<int> out;
  const auto& arr = array_at(j, where);
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(int_at(arr[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline json tuple_json(const Tuple& t) {
  json a = json::array();
  for (const auto& v : t) a.push_back(v.str());
  return a;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Algebras

inline FinAlgebra algebra_from_json(const json& j) {
  using namespace detail;
  const std::string kind = str_at(field(j, "kind", "algebra"), "algebra.kind");
  Signature sig = Signature::mv;
  if (j.contains("signature")) sig = parse_signature(str_at(j["signature"], "algebra.signature"));
  if (kind == "product") {
    auto a = FinAlgebra::product_of_chains(chains_at(field(j, "chains", "algebra"), "algebra.chains"));
    return sig == Signature::mvlat ? a.as_mvlat() : a;
  }
  if (kind == "subset") {
    auto chains = chains_at(field(j, "chains", "algebra"), "algebra.chains");
    std::vector<Tuple> elems;
    const auto& arr = array_at(field(j, "elements", "algebra"), "algebra.elements");
    for (std::size_t i = 0; i < arr.size(); ++i)
      elems.push_back(tuple_at(arr[i], "algebra.elements[" + std::to_string(i) + "]"));
    if (!j.contains("signature")) sig = Signature::mvlat;
    return FinAlgebra::subset(chains, std::move(elems), sig);
  }
  if (kind == "tables") {
    std::vector<std::string> names;
    const auto& arr = array_at(field(j, "elements", "algebra"), "algebra.elements");
    for (std::size_t i = 0; i < arr.size(); ++i) names.push_back(str_at(arr[i], "algebra.elements[" + std::to_string(i) + "]"));
    auto index = [&](const json& v, const std::string& where) {
      auto s = str_at(v, where);
      auto it = std::find(names.begin(), names.end(), s);
      if (it == names.end()) schema(where, "unknown element '" + s + "'");
      return static_cast<int>(it - names.begin());
    };
    auto table = [&](const char* key) {
      std::vector<std::vector<int>> t;
      if (!j.contains(key)) return t;
      const std::string where = std::string("algebra.") + key;
      const auto& rows = array_at(j[key], where);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = array_at(rows[r], where + "[" + std::to_string(r) + "]");
        std::vector<int> out;
        for (std::size_t c = 0; c < row.size(); ++c)
          out.push_back(index(row[c], where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]"));
        t.push_back(std::move(out));
      }
      return t;
    };
    std::vector<int> neg;
    if (j.contains("neg")) {
      const auto& n = array_at(j["neg"], "algebra.neg");
      for (std::size_t i = 0; i < n.size(); ++i) neg.push_back(index(n[i], "algebra.neg[" + std::to_string(i) + "]"));
    }
    int zero = index(field(j, "zero", "algebra"), "algebra.zero");
    int one = index(field(j, "one", "algebra"), "algebra.one");
    if (!j.contains("add")) schema("algebra", "missing field 'add'");
    if (sig == Signature::mvlat)
      for (const char* k : {"mul", "join", "meet"})
        if (!j.contains(k)) schema("algebra", std::string("mvlat tables need '") + k + "'");
    if (sig == Signature::mv) {
      if (!j.contains("neg")) schema("algebra", "mv tables need 'neg'");
      return FinAlgebra::from_tables(sig, std::move(names), zero, one, table("add"), {}, {}, {}, std::move(neg));
    }
    return FinAlgebra::from_tables(sig, std::move(names), zero, one, table("add"), table("mul"), table("join"),
                                   table("meet"), std::move(neg));
  }
  schema("algebra.kind", "expected product, subset or tables, got '" + kind + "'");
}

inline json algebra_to_json(const FinAlgebra& a) {
  json j;
  if (a.is_tuples()) {
    j["kind"] = "subset";
    j["chains"] = a.chains();
    j["signature"] = std::string(signature_name(a.signature()));
    json elems = json::array();
    for (const auto& t : a.elements()) elems.push_back(detail::tuple_json(t));
    j["elements"] = elems;
    return j;
  }
  j["kind"] = "tables";
  j["signature"] = std::string(signature_name(a.signature()));
  j["elements"] = a.names();
  j["zero"] = a.name(a.zero());
  j["one"] = a.name(a.one());
  auto named = [&](Op op) {
    json rows = json::array();
    for (const auto& row : a.table(op)) {
      json r = json::array();
      for (int v : row) r.push_back(a.name(v));
      rows.push_back(r);
    }
    return rows;
  };
  j["add"] = named(Op::add);
  if (a.signature() == Signature::mvlat) {
    j["mul"] = named(Op::mul);
    j["join"] = named(Op::join);
    j["meet"] = named(Op::meet);
  }
  if (a.has_neg()) {
    json n = json::array();
    for (int v : a.neg_table()) n.push_back(a.name(v));
    j["neg"] = n;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Spaces

/// "opens" is taken as a base (closed under join and constants, validated
/// for ⊕, ⊙, ∧); "subbase" may be given instead. "order" lists pairs x ≤ y;
/// reflexivity is added and the result must be a partial order.
inline MVSpace space_from_json(const json& j, std::size_t max_opens = 4096) {
  using namespace detail;
  std::vector<std::string> points;
  const auto& pts = array_at(field(j, "points", "space"), "space.points");
  for (std::size_t i = 0; i < pts.size(); ++i) points.push_back(str_at(pts[i], "space.points[" + std::to_string(i) + "]"));
  const std::int64_t grid = int_at(field(j, "grid", "space"), "space.grid");
  if (grid < 1) schema("space.grid", "must be at least 1");
  auto point_index = [&](const std::string& s, const std::string& where) {
    auto it = std::find(points.begin(), points.end(), s);
    if (it == points.end()) schema(where, "unknown point '" + s + "'");
    return static_cast<std::size_t>(it - points.begin());
  };
  auto fuzzy_list = [&](const char* key) {
    std::vector<Fuzzy> out;
    const std::string where = std::string("space.") + key;
    const auto& arr = array_at(j[key], where);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string w = where + "[" + std::to_string(i) + "]";
      if (!arr[i].is_object()) schema(w, "expected an object of point values");
      Fuzzy f(points.size(), UnitRational(0, 1));
      for (auto it = arr[i].begin(); it != arr[i].end(); ++it)
        f[point_index(it.key(), w)] = rational_at(it.value(), w + "." + it.key());
      out.push_back(std::move(f));
    }
    return out;
  };
  std::optional<Relation> order;
  if (j.contains("order")) {
    Relation r(points.size(), std::vector<bool>(points.size(), false));
    for (std::size_t i = 0; i < points.size(); ++i) r[i][i] = true;
    const auto& arr = array_at(j["order"], "space.order");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string w = "space.order[" + std::to_string(i) + "]";
      const auto& pr = array_at(arr[i], w);
      if (pr.size() != 2) schema(w, "expected a pair");
      r[point_index(str_at(pr[0], w), w)][point_index(str_at(pr[1], w), w)] = true;
    }
    if (!is_partial_order(r)) schema("space.order", "not a partial order (pairs must be transitively closed)");
    order = std::move(r);
  }
  const bool has_opens = j.contains("opens"), has_subbase = j.contains("subbase");
  if (has_opens == has_subbase) schema("space", "give exactly one of 'opens' or 'subbase'");
  if (has_opens) return generate_topology(points, fuzzy_list("opens"), GenMode::base, grid, order, max_opens);
  return generate_topology(points, fuzzy_list("subbase"), GenMode::subbase, grid, order, max_opens);
}

inline json fuzzy_to_json(const MVSpace& x, const Fuzzy& f) {
  json o = json::object();
  for (std::size_t i = 0; i < x.size(); ++i) o[x.points[i]] = f[i].str();
  return o;
}

inline json space_to_json(const MVSpace& x) {
  json j;
  j["points"] = x.points;
  j["grid"] = x.grid;
  json opens = json::array();
  for (const auto& f : x.opens) opens.push_back(fuzzy_to_json(x, f));
  j["opens"] = opens;
  if (x.order) {
    json pairs = json::array();
    for (auto [p, q] : strict_pairs(*x.order))
      pairs.push_back({x.points[static_cast<std::size_t>(p)], x.points[static_cast<std::size_t>(q)]});
    j["order"] = pairs;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Verdicts

inline json verdict_to_json(const DualityVerdict& v, const FinAlgebra* a = nullptr) {
  json j;
  j["lcc"] = v.lcc;
  j["h_complete"] = v.h_complete;
  if (!v.lcc_vacuous) j["counit_iso"] = v.counit_iso;
  j["unit_order_homeo"] = v.unit_order_homeo;
  j["triangles"] = v.triangles;
  j["priestley"] = v.priestley;
  if (v.lcc_vacuous) j["lcc_vacuous"] = true;
  j["failed"] = v.failed;
  json c = json::object();
  if (v.counit_map) c["counit"] = *v.counit_map;
  if (v.counit_inverse) c["counit_inverse"] = *v.counit_inverse;
  if (v.unit_map) c["unit"] = *v.unit_map;
  if (v.enlargement) {
    json e = json::array();
    for (const auto& t : *v.enlargement) e.push_back(detail::tuple_json(t));
    c["enlargement"] = e;
  }
  if (a) {
    json names = json::array();
    for (int i = 0; i < a->size(); ++i) names.push_back(a->name(i));
    c["elements"] = names;
  }
  j["certificates"] = c;
  return j;
}

// ---------------------------------------------------------------------------
// Files

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw input_error(path + ": " + e.what());
  }
}

/// An input file holds an algebra (has "kind") or a space (has "points").
inline bool is_space_json(const json& j) { return j.is_object() && j.contains("points"); }

// ---------------------------------------------------------------------------
// DOT

/// Hasse diagram of a partial order; edges run from lower to upper.
inline std::string hasse_dot(const Relation& leq, const std::vector<std::string>& names, const std::string& graph) {
  std::ostringstream os;
  os << "digraph " << graph << " {\n  rankdir=BT;\n";
  for (const auto& n : names) os << "  " << n << ";\n";
  for (auto [i, j] : hasse_edges(leq))
    os << "  " << names[static_cast<std::size_t>(i)] << " -> " << names[static_cast<std::size_t>(j)] << ";\n";
  os << "}\n";
  return os.str();
}

/// Max≤ re-indexed so that node i is the trace of the kernel of the i-th
/// canonical hom of the ambient.
inline Relation max_le_by_hom(const Subreduct& s) {
  auto m = max_le(s);
  auto pairing = hom_ideal_bijection(s.b);
  const auto n = pairing.size();
  Relation r(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      r[i][j] = m.incl[static_cast<std::size_t>(pairing[i])][static_cast<std::size_t>(pairing[j])];
  return r;
}

}  // namespace mvlat::io
