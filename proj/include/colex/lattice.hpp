#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "colex/gf2.hpp"

namespace colex {

using Color = int;
using Simplex = std::vector<int>;  // sorted vertex ids

enum class Origin { original, closure, subdivision };

inline std::string origin_name(Origin o) {
  switch (o) {
    case Origin::original: return "original";
    case Origin::closure: return "closure";
    default: return "subdivision";
  }
}

inline Origin origin_from_name(const std::string& s) {
  if (s == "original") return Origin::original;
  if (s == "closure") return Origin::closure;
  if (s == "subdivision") return Origin::subdivision;
  throw Error("unknown vertex origin: " + s);
}

struct Vertex {
  int id = 0;
  Color color = 0;
  std::array<int, 3> pos{0, 0, 0};  // integer coordinates, scaled by 4
  Origin origin = Origin::original;
};

// Vertex-colored simplicial complex given by its top-dimensional simplices.
// Proper coloring: each top simplex carries all D+1 colors exactly once.
struct ColoredComplex {
  int D = 0;
  std::vector<Vertex> vertices;
  std::vector<Simplex> top_simplices;  // sorted ids, list sorted lex
  // orientation class per top simplex for the 3D builder (-1 when unknown,
  // e.g. after closure attachment, subdivision or JSON reload)
  std::vector<int> top_parity;
  bool is_closed = false;

  // dim -> simplex -> ascending top indices containing it
  std::vector<std::map<Simplex, std::vector<int>>> faces;

  void build_index() {
    faces.assign(std::size_t(D) + 1, {});
    for (std::size_t t = 0; t < top_simplices.size(); ++t) {
      const Simplex& top = top_simplices[t];
      unsigned full = (1u << top.size()) - 1;
      for (unsigned mask = 1; mask <= full; ++mask) {
        Simplex s;
        for (std::size_t i = 0; i < top.size(); ++i)
          if ((mask >> i) & 1) s.push_back(top[i]);
        faces[s.size() - 1][s].push_back(int(t));
      }
    }
  }

  bool vertex_original(int id) const {
    return vertices[std::size_t(id)].origin == Origin::original;
  }

  bool has_original_vertex(const Simplex& s) const {
    for (int v : s)
      if (vertex_original(v)) return true;
    return false;
  }

  std::vector<Color> simplex_colors(const Simplex& s) const {
    std::vector<Color> c;
    c.reserve(s.size());
    for (int v : s) c.push_back(vertices[std::size_t(v)].color);
    std::sort(c.begin(), c.end());
    return c;
  }
};

namespace detail {

inline void sort_tops(std::vector<Simplex>& tops, std::vector<int>& parity) {
  std::vector<std::size_t> order(tops.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return tops[a] < tops[b]; });
  std::vector<Simplex> t2;
  std::vector<int> p2;
  t2.reserve(tops.size());
  p2.reserve(tops.size());
  for (std::size_t i : order) {
    t2.push_back(tops[i]);
    p2.push_back(parity[i]);
  }
  tops = std::move(t2);
  parity = std::move(p2);
}

}  // namespace detail

// Triangular patch: vertices (i,j) with color (i-j) mod 3, kept when the
// three half-plane functionals i+2j, 2-2i-j, 1+i-j all sit at >= 1-n.
// n=1 is a single triangle; the count grows as 1+3n+3n^2 qubits once closed.
inline ColoredComplex build_2d_triangle(int n) {
  if (n < 1) throw Error("build_2d_triangle: n must be >= 1");
  auto keep = [&](int i, int j) {
    return i + 2 * j >= 1 - n && 2 - 2 * i - j >= 1 - n && 1 + i - j >= 1 - n;
  };
  int lo = -2 * n - 2, hi = 2 * n + 2;
  std::set<std::pair<int, int>> coords;
  std::vector<std::array<std::pair<int, int>, 3>> tris;
  std::vector<int> tri_parity;
  for (int j = lo; j <= hi; ++j)
    for (int i = lo; i <= hi; ++i) {
      if (keep(i, j) && keep(i + 1, j) && keep(i, j + 1)) {
        tris.push_back({std::pair{i, j}, {i + 1, j}, {i, j + 1}});
        tri_parity.push_back(0);  // upward
      }
      if (keep(i + 1, j) && keep(i, j + 1) && keep(i + 1, j + 1)) {
        tris.push_back({std::pair{i + 1, j}, {i, j + 1}, {i + 1, j + 1}});
        tri_parity.push_back(1);  // downward
      }
    }
  for (const auto& t : tris)
    for (const auto& c : t) coords.insert(c);

  ColoredComplex K;
  K.D = 2;
  std::map<std::pair<int, int>, int> id_of;
  for (const auto& [i, j] : coords) {
    int id = int(K.vertices.size());
    id_of[{i, j}] = id;
    K.vertices.push_back(
        {id, ((i - j) % 3 + 3) % 3, {4 * i, 4 * j, 0}, Origin::original});
  }
  for (const auto& t : tris) {
    Simplex s{id_of[t[0]], id_of[t[1]], id_of[t[2]]};
    std::sort(s.begin(), s.end());
    K.top_simplices.push_back(std::move(s));
  }
  K.top_parity = tri_parity;
  detail::sort_tops(K.top_simplices, K.top_parity);
  K.build_index();
  return K;
}

// Tetrahedral patch of the two-interleaved-cubic-lattice family, coordinates
// scaled by 4 so every vertex is integral. Cells come from integer-class base
// points only, so each cell appears once and its orientation class (sign of
// the axis permutation in that canonical form) is well defined.
inline ColoredComplex build_3d_tetrahedron(int n) {
  if (n < 1) throw Error("build_3d_tetrahedron: n must be >= 1");
  auto inside = [&](const std::array<int, 3>& p) {
    int x = p[0], y = p[1], z = p[2];
    return x + y + z <= 8 * (n - 1) && x - y - z <= 2 && -x + y - z <= 4 &&
           -x - y + z <= 6;
  };
  auto color_of = [](const std::array<int, 3>& p) -> Color {
    int m = ((p[0] + p[1] + p[2]) % 8 + 8) % 8;
    switch (m) {
      case 0: return 0;
      case 4: return 1;
      case 6: return 2;
      case 2: return 3;
      default: throw Error("3d builder: point off the lattice");
    }
  };

  static const std::array<std::array<int, 3>, 6> perms{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  static const std::array<int, 6> perm_sign{1, -1, -1, 1, 1, -1};

  std::vector<std::array<std::array<int, 3>, 4>> tets;
  std::vector<int> tet_parity;
  for (int bx = -8; bx <= 4 * n + 4; bx += 4)
    for (int by = -8; by <= 4 * n + 4; by += 4)
      for (int bz = -8; bz <= 4 * n + 4; bz += 4)
        for (std::size_t pi = 0; pi < 6; ++pi)
          for (int s : {1, -1}) {
            std::array<int, 3> a{0, 0, 0}, b{0, 0, 0}, c{0, 0, 0};
            a[perms[pi][0]] = 1;
            b[perms[pi][1]] = 1;
            c[perms[pi][2]] = 1;
            std::array<std::array<int, 3>, 4> tet;
            tet[0] = {bx, by, bz};
            for (int k = 0; k < 3; ++k) tet[1][k] = tet[0][k] + 4 * a[k];
            for (int k = 0; k < 3; ++k)
              tet[2][k] = tet[0][k] + 2 * (a[k] + s * b[k] + c[k]);
            for (int k = 0; k < 3; ++k)
              tet[3][k] = tet[0][k] + 2 * (a[k] + s * b[k] - c[k]);
            bool ok = true;
            for (const auto& p : tet)
              if (!inside(p)) ok = false;
            if (!ok) continue;
            tets.push_back(tet);
            tet_parity.push_back(perm_sign[pi] == 1 ? 0 : 1);
          }

  std::set<std::array<int, 3>> coords;
  for (const auto& t : tets)
    for (const auto& p : t) coords.insert(p);

  ColoredComplex K;
  K.D = 3;
  std::map<std::array<int, 3>, int> id_of;
  for (const auto& p : coords) {
    int id = int(K.vertices.size());
    id_of[p] = id;
    K.vertices.push_back({id, color_of(p), p, Origin::original});
  }
  std::set<Simplex> seen;
  for (std::size_t t = 0; t < tets.size(); ++t) {
    Simplex s;
    for (const auto& p : tets[t]) s.push_back(id_of[p]);
    std::sort(s.begin(), s.end());
    if (!seen.insert(s).second)
      throw Error("3d builder: duplicate cell generated");
    K.top_simplices.push_back(std::move(s));
    K.top_parity.push_back(tet_parity[t]);
  }
  detail::sort_tops(K.top_simplices, K.top_parity);
  K.build_index();
  return K;
}

// Close an open patch into a sphere: every boundary stratum whose set of
// adjacent facet-missing colors saturates its codimension gets one new top
// simplex completed by fresh vertices, one per missing color; one all-new
// simplex caps the outside.
inline ColoredComplex close_to_sphere(const ColoredComplex& M) {
  if (M.is_closed) throw Error("close_to_sphere: complex is already closed");
  int D = M.D;

  // boundary facets and their missing colors
  std::map<Simplex, Color> facet_missing;
  for (const auto& [facet, cofaces] : M.faces[std::size_t(D - 1)]) {
    if (cofaces.size() > 2)
      throw Error("close_to_sphere: facet with more than two cofaces");
    if (cofaces.size() != 1) continue;
    std::vector<bool> present(std::size_t(D) + 1, false);
    for (int v : facet) present[std::size_t(M.vertices[std::size_t(v)].color)] = true;
    Color missing = -1;
    for (int c = 0; c <= D; ++c)
      if (!present[std::size_t(c)]) missing = c;
    facet_missing[facet] = missing;
  }

  // per boundary stratum: the union of adjacent facets' missing colors
  std::map<Simplex, std::set<Color>> missing_of;
  for (const auto& [facet, missing] : facet_missing) {
    unsigned full = (1u << facet.size()) - 1;
    for (unsigned mask = 1; mask <= full; ++mask) {
      Simplex s;
      for (std::size_t i = 0; i < facet.size(); ++i)
        if ((mask >> i) & 1) s.push_back(facet[i]);
      missing_of[s].insert(missing);
    }
  }

  std::set<Color> new_colors;
  for (const auto& [s, ms] : missing_of) new_colors.insert(ms.begin(), ms.end());
  if (int(new_colors.size()) != D + 1)
    throw Error("close_to_sphere: boundary does not expose all colors");

  ColoredComplex K;
  K.D = D;
  K.vertices = M.vertices;
  std::map<Color, int> new_vertex;
  for (Color c : new_colors) {
    int id = int(K.vertices.size());
    new_vertex[c] = id;
    K.vertices.push_back({id, c, {0, 0, 0}, Origin::closure});
  }

  K.top_simplices = M.top_simplices;
  K.top_parity = M.top_parity;
  for (const auto& [s, ms] : missing_of) {
    for (int v : s)
      if (ms.count(M.vertices[std::size_t(v)].color))
        throw Error("close_to_sphere: boundary stratum coloring violated");
    std::size_t codim = std::size_t(D) + 1 - s.size();
    if (ms.size() > codim)
      throw Error("close_to_sphere: boundary stratum misses too many colors");
    if (ms.size() != codim) continue;
    Simplex top = s;
    for (Color c : ms) top.push_back(new_vertex[c]);
    std::sort(top.begin(), top.end());
    K.top_simplices.push_back(std::move(top));
    K.top_parity.push_back(-1);
  }
  {
    Simplex cap;
    for (const auto& [c, id] : new_vertex) cap.push_back(id);
    std::sort(cap.begin(), cap.end());
    K.top_simplices.push_back(std::move(cap));
    K.top_parity.push_back(-1);
  }
  detail::sort_tops(K.top_simplices, K.top_parity);
  K.is_closed = true;
  K.build_index();

  for (const auto& [facet, cofaces] : K.faces[std::size_t(D - 1)])
    if (cofaces.size() != 2)
      throw Error("close_to_sphere: result is not a pseudomanifold");
  return K;
}

// Qubits are the top simplices that keep at least one original vertex,
// ordered by their sorted vertex-id lists.
struct QubitIndexing {
  std::vector<int> qubit_tops;    // top index per qubit
  std::vector<int> top_to_qubit;  // -1 for non-qubit tops
  std::size_t size() const { return qubit_tops.size(); }
};

inline QubitIndexing qubit_indexing(const ColoredComplex& K) {
  if (!K.is_closed) throw Error("qubit_indexing: complex must be closed");
  QubitIndexing qi;
  qi.top_to_qubit.assign(K.top_simplices.size(), -1);
  for (std::size_t t = 0; t < K.top_simplices.size(); ++t)
    if (K.has_original_vertex(K.top_simplices[t])) {
      qi.top_to_qubit[t] = int(qi.qubit_tops.size());
      qi.qubit_tops.push_back(int(t));
    }
  return qi;
}

// d-simplices of the closure with at least one original vertex, lex order
inline std::vector<Simplex> delta_set(const ColoredComplex& K, int d) {
  if (!K.is_closed) throw Error("delta_set: complex must be closed");
  if (d < 0 || d > K.D) throw Error("delta_set: dimension out of range");
  std::vector<Simplex> out;
  for (const auto& [s, cofaces] : K.faces[std::size_t(d)])
    if (K.has_original_vertex(s)) out.push_back(s);
  return out;
}

// top indices containing delta; errors when delta is not a qubit stratum
inline const std::vector<int>& support_tops(const ColoredComplex& K,
                                            const Simplex& delta) {
  if (!K.is_closed) throw Error("support: complex must be closed");
  if (delta.empty() || delta.size() > std::size_t(K.D) + 1)
    throw Error("support: simplex dimension out of range");
  auto& level = K.faces[delta.size() - 1];
  auto it = level.find(delta);
  if (it == level.end()) throw Error("support: simplex not in the complex");
  if (!K.has_original_vertex(delta))
    throw Error("support: simplex has no original vertex, not in any qubit stratum");
  return it->second;
}

inline BitVec support_mask(const ColoredComplex& K, const QubitIndexing& qi,
                           const Simplex& delta) {
  BitVec m(qi.size());
  for (int t : support_tops(K, delta)) {
    int q = qi.top_to_qubit[std::size_t(t)];
    if (q < 0) throw Error("support: a coface is not a qubit");
    m.set(std::size_t(q));
  }
  return m;
}

// d-cell of the dual lattice = dual of a (D-d)-simplex with at least one
// original vertex. Every top containing such a simplex carries a qubit, so
// the cell's vertex set is exactly its qubit set.
struct ColexCell {
  Simplex dual;
  std::vector<int> tops;
  BitVec qubits;
};

inline std::vector<ColexCell> colex_cells(const ColoredComplex& K,
                                          const QubitIndexing& qi, int d) {
  if (!K.is_closed) throw Error("colex_cells: complex must be closed");
  if (d < 1 || d > K.D) throw Error("colex_cells: dimension out of range");
  std::vector<ColexCell> cells;
  for (const auto& [s, cofaces] : K.faces[std::size_t(K.D - d)]) {
    if (!K.has_original_vertex(s)) continue;
    ColexCell c;
    c.dual = s;
    c.tops = cofaces;
    c.qubits = BitVec(qi.size());
    for (int t : cofaces) {
      int q = qi.top_to_qubit[std::size_t(t)];
      if (q < 0) throw Error("colex_cells: a coface is not a qubit");
      c.qubits.set(std::size_t(q));
    }
    cells.push_back(std::move(c));
  }
  return cells;
}

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> failures;
  void fail(std::string what) {
    ok = false;
    failures.push_back(std::move(what));
  }
};

inline std::string simplex_str(const Simplex& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + "}";
}

inline ValidationReport validate_complex(const ColoredComplex& K) {
  ValidationReport rep;
  for (std::size_t i = 0; i < K.vertices.size(); ++i) {
    if (K.vertices[i].id != int(i))
      rep.fail("vertex id " + std::to_string(K.vertices[i].id) +
               " does not match its index");
    if (K.vertices[i].color < 0 || K.vertices[i].color > K.D)
      rep.fail("vertex " + std::to_string(i) + " has color out of range");
  }
  std::set<Simplex> seen;
  for (const auto& top : K.top_simplices) {
    if (top.size() != std::size_t(K.D) + 1) {
      rep.fail("top simplex " + simplex_str(top) + " has wrong vertex count");
      continue;
    }
    if (!std::is_sorted(top.begin(), top.end()) ||
        std::adjacent_find(top.begin(), top.end()) != top.end())
      rep.fail("top simplex " + simplex_str(top) + " is not strictly sorted");
    if (!seen.insert(top).second)
      rep.fail("duplicate top simplex " + simplex_str(top));
    bool in_range = true;
    for (int v : top)
      if (v < 0 || v >= int(K.vertices.size())) in_range = false;
    if (!in_range) {
      rep.fail("top simplex " + simplex_str(top) + " references unknown vertices");
      continue;
    }
    auto colors = K.simplex_colors(top);
    if (std::adjacent_find(colors.begin(), colors.end()) != colors.end())
      rep.fail("top simplex " + simplex_str(top) + " repeats a color");
  }
  if (!rep.ok) return rep;

  for (const auto& [facet, cofaces] : K.faces[std::size_t(K.D - 1)]) {
    if (K.is_closed && cofaces.size() != 2)
      rep.fail("facet " + simplex_str(facet) + " has " +
               std::to_string(cofaces.size()) + " cofaces, expected 2");
    if (!K.is_closed && cofaces.size() > 2)
      rep.fail("facet " + simplex_str(facet) + " has more than two cofaces");
  }
  if (K.is_closed && K.D >= 2) {
    for (const auto& [s, cofaces] : K.faces[std::size_t(K.D - 2)])
      if (cofaces.size() % 2 != 0)
        rep.fail("2-cell at " + simplex_str(s) + " has odd vertex count " +
                 std::to_string(cofaces.size()));
  }
  // duals with equal color sets must have disjoint supports
  for (int dim = 0; dim < K.D; ++dim) {
    std::map<std::vector<Color>, std::set<int>> used;
    for (const auto& [s, cofaces] : K.faces[std::size_t(dim)]) {
      auto key = K.simplex_colors(s);
      auto& u = used[key];
      for (int t : cofaces)
        if (!u.insert(t).second) {
          rep.fail("same-colored duals overlap at " + simplex_str(s));
          break;
        }
    }
  }
  return rep;
}

// Replace each listed top simplex by 2^(D+1)-1 pieces: one fresh vertex per
// color, piece(kappa) keeps the old vertices outside kappa and the new ones
// inside. Every 2-cell it meets grows by 2^2-2 vertices per replaced top.
inline ColoredComplex subdivide(const ColoredComplex& K,
                                const std::vector<int>& top_indices) {
  if (!K.is_closed) throw Error("subdivide: complex must be closed");
  std::set<int> chosen(top_indices.begin(), top_indices.end());
  for (int t : chosen)
    if (t < 0 || t >= int(K.top_simplices.size()))
      throw Error("subdivide: top simplex index out of range");

  ColoredComplex out;
  out.D = K.D;
  out.vertices = K.vertices;

  for (std::size_t t = 0; t < K.top_simplices.size(); ++t) {
    if (!chosen.count(int(t))) {
      out.top_simplices.push_back(K.top_simplices[t]);
      out.top_parity.push_back(K.top_parity[t]);
      continue;
    }
    const Simplex& top = K.top_simplices[t];
    std::map<Color, int> fresh;  // color -> new vertex id
    for (int c = 0; c <= K.D; ++c) {
      std::array<int, 3> pos{0, 0, 0};
      for (int v : top)
        if (K.vertices[std::size_t(v)].color != c)
          for (int k = 0; k < 3; ++k) pos[k] += K.vertices[std::size_t(v)].pos[k];
      int id = int(out.vertices.size());
      fresh[c] = id;
      out.vertices.push_back({id, c, pos, Origin::subdivision});
    }
    unsigned full = (1u << (K.D + 1)) - 1;
    for (unsigned kappa = 1; kappa <= full; ++kappa) {
      Simplex piece;
      for (int c = 0; c <= K.D; ++c)
        if ((kappa >> c) & 1) piece.push_back(fresh[c]);
      for (int v : top)
        if (!((kappa >> K.vertices[std::size_t(v)].color) & 1)) piece.push_back(v);
      std::sort(piece.begin(), piece.end());
      out.top_simplices.push_back(std::move(piece));
      out.top_parity.push_back(-1);
    }
  }
  detail::sort_tops(out.top_simplices, out.top_parity);
  out.is_closed = true;
  out.build_index();
  return out;
}

}  // namespace colex
