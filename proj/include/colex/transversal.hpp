#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "colex/code.hpp"
#include "colex/gf2.hpp"
#include "colex/lattice.hpp"

namespace colex {

// Qubit subset on which the transversal rotation is inverted. Carries the
// signed count |Q'|_T = |T' cap Q'| - |T cap Q'| over qubit subsets Q'.
struct TSet {
  BitVec bits;

  TSet() = default;
  explicit TSet(std::size_t nq) : bits(nq) {}
  explicit TSet(BitVec b) : bits(std::move(b)) {}

  std::size_t count() const { return bits.popcount(); }
  bool contains(std::size_t q) const { return bits.get(q); }

  long long signed_count(const BitVec& subset) const {
    return static_cast<long long>(subset.popcount()) -
           2 * static_cast<long long>(BitVec::and_count(subset, bits));
  }
  std::vector<std::size_t> indices() const { return bits.ones(); }
};

// Bad 2-cells: those whose vertex count is 2 mod 4. The syndrome doubles as
// the right-hand side of the T-set linear system.
struct BadCellSyndrome {
  std::vector<ColexCell> cells;  // all colex 2-cells, in cell order
  BitVec bad;                    // bit i set iff cells[i] is bad
};

inline BadCellSyndrome bad_cell_syndrome(const ColoredComplex& K,
                                         const QubitIndexing& qi) {
  BadCellSyndrome syn;
  syn.cells = colex_cells(K, qi, 2);
  syn.bad = BitVec(syn.cells.size());
  for (std::size_t i = 0; i < syn.cells.size(); ++i)
    if (syn.cells[i].tops.size() % 4 == 2) syn.bad.set(i);
  return syn;
}

// Local constraint on bad cells: inside each 3-cell, the three color classes
// of its boundary 2-cells must hold equally many bad cells mod 2. Vacuous
// below D=3.
inline bool bad_cell_parity_ok(const ColoredComplex& K,
                               const QubitIndexing& qi,
                               std::string* witness = nullptr) {
  if (K.D < 3) return true;
  std::map<Simplex, bool> bad_edge;
  const auto syn = bad_cell_syndrome(K, qi);
  for (std::size_t i = 0; i < syn.cells.size(); ++i)
    bad_edge[syn.cells[i].dual] = syn.bad.get(i);
  for (const auto& delta : delta_set(K, 0)) {
    const int v = delta[0];
    std::map<Color, int> class_count;
    for (const auto& [edge, cofaces] : K.faces[1]) {
      if (edge[0] != v && edge[1] != v) continue;
      auto it = bad_edge.find(edge);
      if (it == bad_edge.end()) continue;  // edge without original vertex
      const int other = edge[0] == v ? edge[1] : edge[0];
      class_count[K.vertices[std::size_t(other)].color] += it->second ? 1 : 0;
    }
    int parity = -1;
    for (const auto& [color, count] : class_count) {
      if (parity == -1) parity = count % 2;
      if (count % 2 != parity) {
        if (witness)
          *witness = "3-cell at vertex " + std::to_string(v) +
                     ": bad-cell counts differ in parity across color classes";
        return false;
      }
    }
  }
  return true;
}

// Cell condition: every d-cell must satisfy |V_c|_T = 0 mod 2^d
// for d = 1..D.
inline bool verify_cellsT(const ColoredComplex& K, const QubitIndexing& qi,
                          const TSet& T) {
  for (int d = 1; d <= K.D; ++d) {
    const long long mod = 1LL << d;
    for (const auto& c : colex_cells(K, qi, d))
      if (T.signed_count(c.qubits) % mod != 0) return false;
  }
  return true;
}

inline bool verify_cellsT(const ColoredComplex& K, const TSet& T) {
  return verify_cellsT(K, qubit_indexing(K), T);
}

// Solves for a T-set flipping exactly the bad 2-cells: one GF(2) equation per
// colex 2-cell, |T cap V_c| = |V_c|/2 mod 2, over qubit incidence columns.
inline TSet solve_tset(const ColoredComplex& K, const QubitIndexing& qi) {
  auto syn = bad_cell_syndrome(K, qi);
  std::vector<BitVec> rows;
  rows.reserve(syn.cells.size());
  for (const auto& c : syn.cells) rows.push_back(c.qubits);
  auto x = gf2_solve(rows, syn.bad, qi.size());
  if (!x)
    throw Error(
        "solve_tset: inconsistent cell system, the lattice is not a valid "
        "colex");
  return TSet(*x);
}

inline TSet solve_tset(const ColoredComplex& K) {
  return solve_tset(K, qubit_indexing(K));
}

// The explicit 3D prescription: even-orientation bulk tetrahedra, then face
// qubits not under one of those, then edge qubits not under a chosen face.
inline TSet explicit_tset_3d(const ColoredComplex& K,
                             const QubitIndexing& qi) {
  if (K.D != 3) throw Error("explicit_tset_3d: only defined for D = 3");
  if (!K.is_closed) throw Error("explicit_tset_3d: complex must be closed");
  for (const auto& v : K.vertices)
    if (v.origin == Origin::subdivision)
      throw Error("explicit_tset_3d: expects an unsubdivided closed lattice");

  auto original_part = [&](int top_idx) {
    Simplex s;
    for (int v : K.top_simplices[std::size_t(top_idx)])
      if (K.vertex_original(v)) s.push_back(v);
    return s;  // already sorted
  };

  TSet T(qi.size());
  std::set<Simplex> t2_faces;

  // Bulk tetrahedra with even orientation triads.
  for (std::size_t q = 0; q < qi.size(); ++q) {
    const int t = qi.qubit_tops[q];
    if (original_part(t).size() != 4) continue;
    const int parity = K.top_parity[std::size_t(t)];
    if (parity < 0)
      throw Error("explicit_tset_3d: lattice lacks triad metadata");
    if (parity == 0) T.bits.set(q);
  }

  // Face qubits whose boundary 2-simplex has an odd bulk cofacet.
  for (std::size_t q = 0; q < qi.size(); ++q) {
    const int t = qi.qubit_tops[q];
    const Simplex sigma = original_part(t);
    if (sigma.size() != 3) continue;
    const auto& cofaces = K.faces[2].at(sigma);
    int bulk_parity = -1;
    for (int c : cofaces)
      if (original_part(c).size() == 4) bulk_parity = K.top_parity[std::size_t(c)];
    if (bulk_parity < 0)
      throw Error("explicit_tset_3d: lattice lacks triad metadata");
    if (bulk_parity == 1) {
      T.bits.set(q);
      t2_faces.insert(sigma);
    }
  }

  // Edge qubits whose 1-simplex lies under no chosen face.
  for (std::size_t q = 0; q < qi.size(); ++q) {
    const int t = qi.qubit_tops[q];
    const Simplex eps = original_part(t);
    if (eps.size() != 2) continue;
    bool covered = false;
    for (const auto& sigma : t2_faces) {
      if (std::includes(sigma.begin(), sigma.end(), eps.begin(), eps.end())) {
        covered = true;
        break;
      }
    }
    if (!covered) T.bits.set(q);
  }

  return T;
}

inline TSet explicit_tset_3d(const ColoredComplex& K) {
  return explicit_tset_3d(K, qubit_indexing(K));
}

// Gate-level intersection condition: every collection of m distinct X-type
// gauge generators, 1 <= m <= n, must satisfy
// |intersection of supports|_T = 0 mod 2^{n-m+1}.
inline bool check_intersection_condition(const GaugeColorCode& code,
                                         const TSet& T, int n,
                                         int threads = 1) {
  if (n < 1) throw Error("check_intersection_condition: n must be >= 1");
  const auto gens = code.G.supports_of('X');
  const int g = int(gens.size());

  // Recursion over index-increasing subsets; parallelism, when asked for,
  // only splits the top level since desk-scale subset counts are small.
  std::atomic<bool> ok{true};
  auto run = [&](int start) {
    std::function<void(int, const BitVec&, int)> rec = [&](int from,
                                                           const BitVec& inter,
                                                           int m) {
      if (!ok.load(std::memory_order_relaxed)) return;
      const long long mod = 1LL << (n - m + 1);
      if (T.signed_count(inter) % mod != 0) {
        ok.store(false, std::memory_order_relaxed);
        return;
      }
      if (m == n || inter.none()) return;  // empty intersections stay empty
      for (int j = from + 1; j < g; ++j)
        rec(j, inter & gens[std::size_t(j)], m + 1);
    };
    rec(start, gens[std::size_t(start)], 1);
  };

  if (threads <= 1 || g < 2) {
    for (int i = 0; i < g && ok; ++i) run(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    const int nt = std::min(threads, g);
    for (int t = 0; t < nt; ++t)
      pool.emplace_back([&] {
        int i;
        while ((i = next.fetch_add(1)) < g && ok) run(i);
      });
    for (auto& th : pool) th.join();
  }
  return ok;
}

// Modular inverse of |Q|_T modulo 2^n.
inline std::int64_t compute_k(std::size_t n_qubits, const TSet& T, int n) {
  if (n < 1 || n > 30) throw Error("compute_k: n out of range");
  const std::int64_t mod = std::int64_t(1) << n;
  std::int64_t x = (std::int64_t(n_qubits) - 2 * std::int64_t(T.count())) % mod;
  x = (x + mod) % mod;
  if (x % 2 == 0)
    throw Error("compute_k: |Q|_T is even, the T-set is corrupted");
  // Newton lift: doubles the number of correct low bits each round.
  std::int64_t inv = 1;
  for (int i = 0; i < 6; ++i) inv = inv * (2 - (x * inv) % mod) % mod;
  inv = ((inv % mod) + mod) % mod;
  if (x * inv % mod != 1)
    throw Error("compute_k: inverse computation failed");
  return inv;
}

inline std::int64_t compute_k(const ColoredComplex& K, const TSet& T, int n) {
  return compute_k(qubit_indexing(K).size(), T, n);
}

// Per-qubit exponent plan for the transversal level-n rotation.
struct GatePlan {
  int n = 0;
  std::int64_t k = 0;
  TSet T;
  std::vector<std::int64_t> exponents;  // -k on T, +k elsewhere
};

inline GatePlan gate_plan(const GaugeColorCode& code, int n, int threads = 1) {
  if (n < 1) throw Error("gate_plan: n must be >= 1");
  const int e_bar = code.D - code.e;
  if (code.D < n * e_bar)
    throw Error("gate_plan: dimension condition D >= n*e_bar fails (D = " +
                std::to_string(code.D) + ", n = " + std::to_string(n) +
                ", e_bar = " + std::to_string(e_bar) +
                "); gauge fixing is required for this gate level");

  GatePlan plan;
  plan.n = n;
  plan.T = solve_tset(code.lattice, code.qi);
  if (!verify_cellsT(code.lattice, code.qi, plan.T))
    throw Error("gate_plan: solved T-set violates the cell condition");
  if (!check_intersection_condition(code, plan.T, n, threads))
    throw Error("gate_plan: solved T-set violates the intersection condition");
  plan.k = compute_k(code.n_qubits, plan.T, n);
  plan.exponents.resize(code.n_qubits);
  for (std::size_t q = 0; q < code.n_qubits; ++q)
    plan.exponents[q] = plan.T.contains(q) ? -plan.k : plan.k;
  return plan;
}

// Replaces each T-qubit's simplex by its full color-set subdivision, making
// every cell size divisible by the proper power of two.
inline ColoredComplex perfect_subdivision(const ColoredComplex& K,
                                          const TSet& T) {
  const auto qi = qubit_indexing(K);
  if (T.bits.size() != qi.size())
    throw Error("perfect_subdivision: T-set size does not match the lattice");
  std::vector<int> tops;
  for (std::size_t q : T.indices()) tops.push_back(qi.qubit_tops[q]);
  return subdivide(K, tops);
}

}  // namespace colex
