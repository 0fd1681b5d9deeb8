#pragma once

// The two worked examples used as regression fixtures: a 5-element positive
// subreduct of Ł₂×Ł₂ and three generating subreducts A ⊂ B ⊂ C of
// Ł₂×Ł₂×Ł₃. Expected diagrams are stated over projection indices (hom i is
// the restriction of the i-th coordinate projection), not over the canonical
// hom order, so they do not depend on how homs happen to sort.

#include <set>
#include <utility>
#include <vector>

#include "mvlat/algebra.hpp"

namespace mvlat::examples {

namespace detail {

inline Tuple tup(std::initializer_list<std::pair<int, int>> coords) {
  Tuple t;
  for (auto [p, d] : coords) t.emplace_back(p, d);
  return t;
}

// Writes x/6 style shorthands: h = 1/2, t = 1/3, tt = 2/3.
inline std::vector<Tuple> l223(std::initializer_list<std::initializer_list<std::pair<int, int>>> rows) {
  std::vector<Tuple> out;
  for (auto r : rows) out.push_back(tup(r));
  return out;
}

}  // namespace detail

/// {(0,0), (0,1/2), (0,1), (1/2,1), (1,1)} ⊂ Ł₂×Ł₂
inline FinAlgebra square_a() {
  using detail::tup;
  return FinAlgebra::subset({2, 2},
                            {tup({{0, 1}, {0, 1}}), tup({{0, 1}, {1, 2}}), tup({{0, 1}, {1, 1}}),
                             tup({{1, 2}, {1, 1}}), tup({{1, 1}, {1, 1}})},
                            Signature::mvlat);
}

inline std::vector<Tuple> l223_a_elements() {
  constexpr std::pair<int, int> z{0, 1}, h{1, 2}, o{1, 1}, t{1, 3}, tt{2, 3};
  return detail::l223({{z, z, z},  {z, h, z},  {z, o, z},  {h, o, z},  {o, o, z},
                       {z, h, t},  {z, o, t},  {h, o, t},  {o, o, t},  {z, o, tt},
                       {h, o, tt}, {o, o, tt}, {z, o, o},  {h, o, o},  {o, o, o}});
}

inline std::vector<Tuple> l223_b_extra() {
  constexpr std::pair<int, int> z{0, 1}, h{1, 2}, t{1, 3};
  return detail::l223({{h, h, z}, {h, h, t}});
}

inline std::vector<Tuple> l223_c_extra() {
  constexpr std::pair<int, int> z{0, 1}, h{1, 2}, o{1, 1}, t{1, 3}, tt{2, 3};
  return detail::l223({{z, z, t}, {z, z, tt}, {h, h, tt}, {z, h, tt}, {z, z, o}, {z, h, o}, {h, h, o}});
}

inline FinAlgebra l223_a() { return FinAlgebra::subset({2, 2, 3}, l223_a_elements(), Signature::mvlat); }

inline FinAlgebra l223_b() {
  auto e = l223_a_elements();
  for (auto& t : l223_b_extra()) e.push_back(t);
  return FinAlgebra::subset({2, 2, 3}, e, Signature::mvlat);
}

inline FinAlgebra l223_c() {
  auto e = l223_a_elements();
  for (auto& t : l223_b_extra()) e.push_back(t);
  for (auto& t : l223_c_extra()) e.push_back(t);
  return FinAlgebra::subset({2, 2, 3}, e, Signature::mvlat);
}

/// Strict order pairs (lower, upper) over projection indices 0, 1, 2.
using Edges = std::set<std::pair<int, int>>;

// H_A: f1 ≤ f2 ≥ f3; Max≤A: I2 below I1 and I3.
inline Edges golden_h_a() { return {{0, 1}, {2, 1}}; }
inline Edges golden_max_le_a() { return {{1, 0}, {1, 2}}; }
// H_C: f1 ≤ f2, f3 isolated; Max≤C: I2 below I1, I3 isolated.
inline Edges golden_h_c() { return {{0, 1}}; }
inline Edges golden_max_le_c() { return {{1, 0}}; }

}  // namespace mvlat::examples
