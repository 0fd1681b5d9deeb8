#pragma once

// Command-line front end. run() is the whole program minus process setup so
// tests can drive it in-process.

#include <unistd.h>

#include <cstdlib>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mvlat/io.hpp"
#include "mvlat/worked_examples.hpp"

namespace mvlat::cli {

enum Exit { ok = 0, check_failed = 1, bad_input = 2 };

struct RunConfig {
  std::vector<std::string> inputs;
  std::string command;
  std::optional<std::int64_t> bound;
  int max_carrier = 64;
  std::size_t max_opens = 4096;
  std::string format = "text";
  std::uint64_t seed = 20240601;
  bool color = false;
  // separate
  std::vector<std::string> pair;
  int samples = 0;
  int max_den = 20;
};

namespace detail {

using io::json;

struct Out {
  std::ostream& os;
  const RunConfig& cfg;

  void verdict(const std::string& label, bool pass) {
    const char* word = pass ? "PASS" : "FAIL";
    if (cfg.color) os << (pass ? "\033[32m" : "\033[31m") << word << "\033[0m";
    else os << word;
    os << " " << label << "\n";
  }
  void emit(const json& j) { os << j.dump(2) << "\n"; }
};

inline FinAlgebra load_algebra(const RunConfig& cfg, std::size_t i = 0) {
  if (cfg.inputs.size() <= i) throw input_error(cfg.command + ": needs --input FILE");
  auto j = io::read_json_file(cfg.inputs[i]);
  if (io::is_space_json(j)) throw input_error(cfg.inputs[i] + ": expected an algebra, got a space");
  return io::algebra_from_json(j);
}

inline FinAlgebra load_mvlat(const RunConfig& cfg, std::size_t i = 0) {
  auto a = load_algebra(cfg, i);
  return a.signature() == Signature::mvlat ? a : a.as_mvlat();
}

inline std::string names_of(const FinAlgebra& a, const ElementSet& s) {
  std::string out = "{";
  bool first = true;
  for (int m : members(s)) {
    if (!first) out += ", ";
    first = false;
    out += a.name(m);
  }
  return out + "}";
}

inline json set_json(const FinAlgebra& a, const ElementSet& s) {
  json arr = json::array();
  for (int m : members(s)) arr.push_back(a.name(m));
  return arr;
}

inline void require_format(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed)
    if (cfg.format == f) return;
  throw input_error(cfg.command + ": format '" + cfg.format + "' is not supported here");
}

// Hom i of the ambient ↦ coordinate j when f_i is the j-th projection.
inline std::vector<int> projection_of(const FinAlgebra& a, const std::vector<Hom>& homs) {
  std::vector<int> out;
  for (const auto& h : homs) {
    int found = -1;
    for (std::size_t j = 0; j < a.chains().size() && found < 0; ++j) {
      bool same = true;
      for (int x = 0; x < a.size() && same; ++x) same = h.values[static_cast<std::size_t>(x)] == a.element(x)[j];
      if (same) found = static_cast<int>(j);
    }
    out.push_back(found);
  }
  return out;
}

inline examples::Edges edges_in_projection(const Relation& r, const std::vector<int>& proj) {
  examples::Edges e;
  for (auto [i, j] : hasse_edges(r)) e.emplace(proj[static_cast<std::size_t>(i)], proj[static_cast<std::size_t>(j)]);
  return e;
}

// ---------------------------------------------------------------------------
// Commands

inline int cmd_check(const RunConfig& cfg, Out& out) {
  require_format(cfg, {"text", "json"});
  if (cfg.inputs.empty()) throw input_error("check: needs --input FILE");
  auto j = io::read_json_file(cfg.inputs[0]);
  if (io::is_space_json(j)) {
    auto x = io::space_from_json(j, cfg.max_opens);
    auto t = check_topology_axioms(x);
    if (cfg.format == "json")
      out.emit({{"kind", "space"}, {"points", x.size()}, {"opens", x.opens.size()}, {"ok", t.ok()}});
    else
      out.verdict("MV-topology on " + std::to_string(x.size()) + " points, " + std::to_string(x.opens.size()) +
                      " opens",
                  t.ok());
    return t.ok() ? ok : check_failed;
  }
  auto a = io::algebra_from_json(j);
  auto r = check_axioms(a);
  const std::string sig(signature_name(a.signature()));
  if (cfg.format == "json") {
    json fails = json::array();
    for (const auto& f : r.failures) fails.push_back({{"law", f.law}, {"args", f.args}});
    out.emit({{"kind", "algebra"}, {"signature", sig}, {"size", a.size()}, {"ok", r.ok}, {"failures", fails}});
  } else {
    out.verdict(sig + " axioms on " + std::to_string(a.size()) + " elements", r.ok);
    for (const auto& f : r.failures) {
      out.os << "  " << f.law << " at";
      for (int x : f.args) out.os << " " << a.name(x);
      out.os << "\n";
    }
  }
  return r.ok ? ok : check_failed;
}

inline int cmd_homs(const RunConfig& cfg, Out& out) {
  auto a = load_algebra(cfg);
  auto p = hom_poset(a, cfg.bound);
  const auto names = default_point_names(p.homs.homs.size());
  if (cfg.format == "dot") {
    out.os << io::hasse_dot(p.leq, names, "H");
    return ok;
  }
  if (cfg.format == "json") {
    json homs = json::array();
    for (const auto& h : p.homs.homs) homs.push_back(io::detail::tuple_json(h.values));
    json order = json::array();
    for (auto [i, j] : strict_pairs(p.leq)) order.push_back({names[static_cast<std::size_t>(i)], names[static_cast<std::size_t>(j)]});
    std::vector<std::string> elems;
    for (int i = 0; i < a.size(); ++i) elems.push_back(a.name(i));
    out.emit({{"elements", elems},
              {"homs", homs},
              {"bound", p.homs.bound},
              {"possibly_incomplete", p.homs.possibly_incomplete},
              {"order", order}});
    return ok;
  }
  for (std::size_t i = 0; i < p.homs.homs.size(); ++i) {
    out.os << names[i] << ":";
    for (int x = 0; x < a.size(); ++x) out.os << " " << a.name(x) << "->" << p.homs.homs[i].values[static_cast<std::size_t>(x)].str();
    out.os << "\n";
  }
  for (auto [i, j] : hasse_edges(p.leq)) out.os << names[static_cast<std::size_t>(i)] << " < " << names[static_cast<std::size_t>(j)] << "\n";
  if (p.homs.possibly_incomplete)
    out.os << "warning: homs searched up to denominator " << p.homs.bound << "; the list may be incomplete\n";
  return ok;
}

inline int cmd_max_ideals(const RunConfig& cfg, Out& out) {
  require_format(cfg, {"text", "json"});
  auto a = load_algebra(cfg);
  auto ms = maximal_ideals(a);
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& m : ms) arr.push_back(set_json(a, m));
    out.emit({{"maximal_ideals", arr}});
  } else {
    for (std::size_t i = 0; i < ms.size(); ++i) out.os << "I" << i << " = " << names_of(a, ms[i]) << "\n";
  }
  return ok;
}

inline int cmd_max_le(const RunConfig& cfg, Out& out) {
  auto a = load_mvlat(cfg);
  auto s = make_subreduct(a);
  auto rel = io::max_le_by_hom(s);
  auto m = max_le(s);
  auto pairing = hom_ideal_bijection(s.b);
  const auto names = default_point_names(rel.size());
  if (cfg.format == "dot") {
    out.os << io::hasse_dot(rel, names, "MaxLe");
    return ok;
  }
  if (cfg.format == "json") {
    json traces = json::object();
    for (std::size_t i = 0; i < pairing.size(); ++i)
      traces[names[i]] = set_json(a, m.traces[static_cast<std::size_t>(pairing[i])]);
    json incl = json::array();
    for (auto [i, j] : strict_pairs(rel)) incl.push_back({names[static_cast<std::size_t>(i)], names[static_cast<std::size_t>(j)]});
    out.emit({{"traces", traces}, {"inclusions", incl}});
    return ok;
  }
  for (std::size_t i = 0; i < pairing.size(); ++i)
    out.os << "ker " << names[i] << " ∩ A = " << names_of(a, m.traces[static_cast<std::size_t>(pairing[i])]) << "\n";
  for (auto [i, j] : hasse_edges(rel)) out.os << names[static_cast<std::size_t>(i)] << " ⊂ " << names[static_cast<std::size_t>(j)] << "\n";
  return ok;
}

inline int cmd_dual(const RunConfig& cfg, Out& out) {
  auto a = load_mvlat(cfg);
  auto d = upsilon(a, cfg.bound, cfg.max_opens);
  if (cfg.format == "dot") {
    out.os << io::hasse_dot(*d.space.order, d.space.points, "Dual");
    return ok;
  }
  if (cfg.format == "json") {
    out.emit(io::space_to_json(d.space));
    return ok;
  }
  out.os << d.space.size() << " points, grid " << d.space.grid << ", " << d.space.opens.size() << " opens\n";
  for (auto [i, j] : hasse_edges(*d.space.order))
    out.os << d.space.points[static_cast<std::size_t>(i)] << " < " << d.space.points[static_cast<std::size_t>(j)] << "\n";
  if (!d.diagonal) out.os << "warning: the homs do not separate points\n";
  if (d.possibly_incomplete) out.os << "warning: the hom list may be incomplete\n";
  return ok;
}

inline MVSpace load_space_or_dual(const RunConfig& cfg) {
  if (cfg.inputs.empty()) throw input_error(cfg.command + ": needs --input FILE");
  auto j = io::read_json_file(cfg.inputs[0]);
  if (io::is_space_json(j)) return io::space_from_json(j, cfg.max_opens);
  auto a = io::algebra_from_json(j);
  return upsilon(a.signature() == Signature::mvlat ? a : a.as_mvlat(), cfg.bound, cfg.max_opens).space;
}

inline int cmd_clopens(const RunConfig& cfg, Out& out) {
  require_format(cfg, {"text", "json"});
  auto x = load_space_or_dual(cfg);
  auto all = clopens(x);
  std::vector<Fuzzy> up;
  if (x.order) up = increasing_clopens(x);
  if (cfg.format == "json") {
    json c = json::array(), u = json::array();
    for (const auto& f : all) c.push_back(io::fuzzy_to_json(x, f));
    for (const auto& f : up) u.push_back(io::fuzzy_to_json(x, f));
    json j{{"clopens", c}};
    if (x.order) j["increasing"] = u;
    out.emit(j);
    return ok;
  }
  out.os << all.size() << " clopens";
  if (x.order) out.os << ", " << up.size() << " increasing";
  out.os << "\n";
  for (const auto& f : x.order ? up : all) out.os << "  " << tuple_str(f) << "\n";
  return ok;
}

inline int cmd_duality_check(const RunConfig& cfg, Out& out) {
  require_format(cfg, {"text", "json"});
  if (cfg.inputs.empty()) throw input_error("duality-check: needs --input FILE");
  auto j = io::read_json_file(cfg.inputs[0]);
  DualityVerdict v;
  std::optional<FinAlgebra> a;
  if (io::is_space_json(j)) {
    v = check_duality_space(io::space_from_json(j, cfg.max_opens), cfg.max_carrier);
  } else {
    a = io::algebra_from_json(j);
    if (a->signature() != Signature::mvlat) a = a->as_mvlat();
    v = check_duality(*a, cfg.max_carrier);
  }
  if (cfg.format == "json") {
    out.emit(io::verdict_to_json(v, a ? &*a : nullptr));
  } else {
    out.verdict("lcc" + std::string(v.lcc_vacuous ? " (vacuous for finite spaces)" : ""), v.lcc);
    out.verdict("h_complete", v.h_complete);
    if (a) out.verdict("counit_iso", v.counit_iso);
    else out.verdict("priestley", v.priestley);
    out.verdict("unit_order_homeo", v.unit_order_homeo);
    out.verdict("triangles", v.triangles);
    if (v.enlargement) {
      out.os << "enlargement over the dual points (" << v.enlargement->size() << " elements):";
      for (const auto& t : *v.enlargement) out.os << " " << tuple_str(t);
      out.os << "\n";
    }
  }
  return v.ok() ? ok : check_failed;
}

inline int cmd_stone_compare(const RunConfig& cfg, Out& out) {
  require_format(cfg, {"text", "json"});
  auto a = load_algebra(cfg);
  if (!a.has_neg()) throw input_error("stone-compare: needs an MV-algebra (signature mv)");
  if (a.signature() != Signature::mv) throw input_error("stone-compare: needs an MV-algebra (signature mv)");
  auto r = stone_compare(a);
  if (cfg.format == "json") {
    out.emit({{"map", r.f},
              {"bijective", r.bijective},
              {"continuous", r.continuous},
              {"open", r.open},
              {"homeomorphism", r.homeomorphism},
              {"preimage_formula", r.preimage_formula},
              {"trivial_order", r.trivial_order},
              {"clop_up_is_clop", r.clop_up_is_clop}});
  } else {
    out.verdict("F bijective", r.bijective);
    out.verdict("F continuous", r.continuous);
    out.verdict("F open", r.open);
    out.verdict("F homeomorphism", r.homeomorphism);
    out.verdict("F preimage of b-hat is b-tilde", r.preimage_formula);
    out.verdict("dual order is trivial", r.trivial_order);
    out.verdict("increasing clopens are all clopens", r.clop_up_is_clop);
  }
  return r.ok() ? ok : check_failed;
}

inline int cmd_compatible(const RunConfig& cfg, Out& out) {
  require_format(cfg, {"text", "json"});
  if (cfg.inputs.size() != 2) throw input_error("compatible: needs exactly two --input files");
  auto s = make_subreduct(load_mvlat(cfg, 0));
  auto t = make_subreduct(load_mvlat(cfg, 1));
  bool c = are_compatible(s, t);
  if (cfg.format == "json") out.emit({{"compatible", c}});
  else out.verdict("compatible", c);
  return c ? ok : check_failed;
}

inline int cmd_h_complete(const RunConfig& cfg, Out& out) {
  require_format(cfg, {"text", "json"});
  auto a = load_mvlat(cfg);
  auto s = make_subreduct(a);
  auto h = is_h_complete(s, cfg.max_carrier);
  auto tuples = [&](const std::vector<int>& carrier) {
    json arr = json::array();
    for (int e : carrier) arr.push_back(s.b.name(e));
    return arr;
  };
  if (cfg.format == "json") {
    json j{{"h_complete", h.complete}, {"compatible_supersets", h.compatible_count}, {"explored", h.explored}};
    if (h.certificate) j["certificate"] = tuples(*h.certificate);
    if (h.largest) j["largest"] = tuples(*h.largest);
    out.emit(j);
  } else {
    out.verdict("H-complete", h.complete);
    if (h.certificate) {
      out.os << "smallest compatible enlargement (" << h.certificate->size() << " elements):";
      for (int e : *h.certificate) out.os << " " << s.b.name(e);
      out.os << "\n";
    }
  }
  return h.complete ? ok : check_failed;
}

inline int cmd_separate(const RunConfig& cfg, Out& out) {
  require_format(cfg, {"text", "json"});
  if (!cfg.pair.empty()) {
    if (cfg.pair.size() != 2) throw input_error("separate: expects two values x y");
    auto x = UnitRational::parse(cfg.pair[0]), y = UnitRational::parse(cfg.pair[1]);
    if (!(x < y)) throw input_error("separate: needs x < y");
    auto t = synthesize_separator(x, y);
    auto tx = eval(t, {x}), ty = eval(t, {y});
    bool pass = tx.is_zero() && ty.is_one();
    if (cfg.format == "json")
      out.emit({{"term", to_sexpr(t)}, {"t(x)", tx.str()}, {"t(y)", ty.str()}, {"ok", pass}});
    else
      out.os << to_sexpr(t) << "\n" << tx.str() << ", " << ty.str() << "\n";
    return pass ? ok : check_failed;
  }
  if (cfg.samples <= 0) throw input_error("separate: give x y, or --samples N");
  if (cfg.max_den < 2) throw input_error("separate: --max-den must be at least 2");
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::int64_t> den(1, cfg.max_den);
  int failures = 0;
  for (int i = 0; i < cfg.samples;) {
    auto q1 = den(rng), q2 = den(rng);
    auto p1 = std::uniform_int_distribution<std::int64_t>(0, q1)(rng);
    auto p2 = std::uniform_int_distribution<std::int64_t>(0, q2)(rng);
    UnitRational x(p1, q1), y(p2, q2);
    if (x == y) continue;
    if (y < x) std::swap(x, y);
    auto t = synthesize_separator(x, y);
    if (!(eval(t, {x}).is_zero() && eval(t, {y}).is_one())) ++failures;
    ++i;
  }
  if (cfg.format == "json")
    out.emit({{"samples", cfg.samples}, {"seed", cfg.seed}, {"failures", failures}});
  else
    out.verdict(std::to_string(cfg.samples) + " random pairs (seed " + std::to_string(cfg.seed) + ")", failures == 0);
  return failures == 0 ? ok : check_failed;
}

inline int cmd_hasse(const RunConfig& cfg, Out& out) {
  require_format(cfg, {"dot", "text"});
  auto a = load_algebra(cfg);
  auto p = hom_poset(a, cfg.bound);
  out.os << io::hasse_dot(p.leq, default_point_names(p.homs.homs.size()), "H");
  return ok;
}

inline int cmd_worked_examples(const RunConfig& cfg, Out& out) {
  require_format(cfg, {"text", "dot"});
  bool all = true;
  // Ł₂×Ł₂: the smaller subreduct sees one trace strictly inside the other
  {
    auto s = make_subreduct(examples::square_a());
    auto m = max_le(s);
    bool pass = s.b.size() == 9 && m.traces.size() == 2 && strict_pairs(m.incl).size() == 1;
    out.verdict("square: Max≤ of A is a two-element chain inside Ł₂×Ł₂", pass);
    all = all && pass;
  }
  // Ł₂×Ł₂×Ł₃: H_A, Max≤A, H_C, Max≤C against the goldens
  struct Case {
    const char* name;
    FinAlgebra a;
    examples::Edges h, m;
  };
  for (const auto& c : {Case{"A", examples::l223_a(), examples::golden_h_a(), examples::golden_max_le_a()},
                        Case{"C", examples::l223_c(), examples::golden_h_c(), examples::golden_max_le_c()}}) {
    auto s = make_subreduct(c.a);
    auto comp = compat_relation(s);
    auto proj = projection_of(s.b, comp.b_homs);
    auto maxle = io::max_le_by_hom(s);
    const auto names = default_point_names(proj.size());
    if (cfg.format == "dot") {
      out.os << io::hasse_dot(comp.rel, names, std::string("H_") + c.name);
      out.os << io::hasse_dot(maxle, names, std::string("MaxLe_") + c.name);
    }
    bool h = edges_in_projection(comp.rel, proj) == c.h;
    bool m = edges_in_projection(maxle, proj) == c.m;
    if (cfg.format == "text") {
      out.verdict(std::string("L223 ") + c.name + ": hom order matches golden", h);
      out.verdict(std::string("L223 ") + c.name + ": Max≤ matches golden", m);
    }
    all = all && h && m;
  }
  {
    auto sa = make_subreduct(examples::l223_a()), sb = make_subreduct(examples::l223_b()),
         sc = make_subreduct(examples::l223_c());
    bool pass = are_compatible(sa, sb) && !are_compatible(sa, sc) && !are_compatible(sb, sc);
    auto h = is_h_complete(sa, cfg.max_carrier);
    bool hc = !h.complete && h.certificate && *h.certificate == carrier_in_b(sb);
    if (cfg.format == "text") {
      out.verdict("L223: A ~ B, A !~ C, B !~ C", pass);
      out.verdict("L223: A is not H-complete, B is its enlargement", hc);
    }
    all = all && pass && hc;
  }
  return all ? ok : check_failed;
}

inline const std::vector<std::pair<const char*, const char*>>& commands() {
  static const std::vector<std::pair<const char*, const char*>> cs{
      {"check", "check the axioms of an algebra or a topology"},
      {"homs", "list homomorphisms into [0,1] and their pointwise order"},
      {"max-ideals", "list the maximal ideals"},
      {"max-le", "traces of the maximal ideals of the generated MV-algebra"},
      {"dual", "the dual ordered MV-space"},
      {"clopens", "clopen and increasing clopen fuzzy sets"},
      {"duality-check", "check the duality for an algebra or a space"},
      {"stone-compare", "compare the dual space with the maximal spectrum"},
      {"compatible", "are two subreducts compatible (two --input files)"},
      {"h-complete", "is the subreduct H-complete"},
      {"separate", "synthesize a term with t(x) = 0 and t(y) = 1"},
      {"hasse", "DOT Hasse diagram of the hom order"},
      {"worked-examples", "replay the built-in examples against their goldens"},
  };
  return cs;
}

}  // namespace detail

inline bool color_enabled(const std::ostream& out) {
  const char* env = std::getenv("MVLAT_COLOR");
  std::string mode = env ? env : "auto";
  if (mode == "never") return false;
  return &out == &std::cout && ::isatty(STDOUT_FILENO);
}

/// args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite MV-lattices, their dual ordered MV-spaces and duality checks", "mvlat"};
  app.require_subcommand(1, 1);
  RunConfig cfg;
  std::int64_t bound = 0;
  app.add_option("-i,--input", cfg.inputs, "input JSON file (algebra or space)");
  app.add_option("--bound", bound, "denominator bound for hom search")->check(CLI::PositiveNumber);
  app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "dot", "text"}));
  app.add_option("--seed", cfg.seed, "seed for randomized commands");
  app.add_option("--max-carrier", cfg.max_carrier, "size guard for ambient algebras")->check(CLI::PositiveNumber);
  app.add_option("--max-opens", cfg.max_opens, "size guard for topologies")->check(CLI::PositiveNumber);
  for (const auto& [name, desc] : detail::commands()) {
    auto* sub = app.add_subcommand(name, desc);
    sub->fallthrough();
    if (std::string(name) == "separate") {
      sub->add_option("values", cfg.pair, "x y with x < y");
      sub->add_option("--samples", cfg.samples, "check N random pairs instead");
      sub->add_option("--max-den", cfg.max_den, "largest denominator for --samples");
    }
  }
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "mvlat: " << e.what() << "\n";
    return bad_input;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  if (bound > 0) cfg.bound = bound;
  cfg.color = color_enabled(out);
  detail::Out o{out, cfg};
  try {
    const auto& c = cfg.command;
    if (c == "check") return detail::cmd_check(cfg, o);
    if (c == "homs") return detail::cmd_homs(cfg, o);
    if (c == "max-ideals") return detail::cmd_max_ideals(cfg, o);
    if (c == "max-le") return detail::cmd_max_le(cfg, o);
    if (c == "dual") return detail::cmd_dual(cfg, o);
    if (c == "clopens") return detail::cmd_clopens(cfg, o);
    if (c == "duality-check") return detail::cmd_duality_check(cfg, o);
    if (c == "stone-compare") return detail::cmd_stone_compare(cfg, o);
    if (c == "compatible") return detail::cmd_compatible(cfg, o);
    if (c == "h-complete") return detail::cmd_h_complete(cfg, o);
    if (c == "separate") return detail::cmd_separate(cfg, o);
    if (c == "hasse") return detail::cmd_hasse(cfg, o);
    if (c == "worked-examples") return detail::cmd_worked_examples(cfg, o);
  } catch (const size_guard_error& e) {
    err << "mvlat: " << e.what() << " (raise --max-carrier or --max-opens)\n";
    return bad_input;
  } catch (const input_error& e) {
    err << "mvlat: " << e.what() << "\n";
    return bad_input;
  } catch (const invariant_error& e) {
    err << "mvlat: internal check failed: " << e.what() << "\n";
    return check_failed;
  }
  return bad_input;
}

}  // namespace mvlat::cli
