#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <vector>

#include "colex/code.hpp"
#include "colex/gf2.hpp"
#include "colex/lattice.hpp"
#include "colex/pauli.hpp"

namespace colex {

// True when code2 is reachable from code1 by fixing gauge degrees of
// freedom: S1 <= S2 <= G1 as row spaces, and G2 is the centralizer of S2
// inside G1. For codes built on the same lattice this coincides with the
// parameter order d1 <= d2, e1 <= e2; both are computed and compared so a
// construction bug cannot slip through as a silent wrong answer.
inline bool is_gauge_fixing_pair(const GaugeColorCode& c1,
                                 const GaugeColorCode& c2) {
  if (!c1.same_lattice(c2))
    throw Error("is_gauge_fixing_pair: codes live on different lattices");
  const auto s1 = c1.S.sym_rows();
  const auto s2 = c2.S.sym_rows();
  const auto g1 = c1.G.sym_rows();
  const auto g2 = c2.G.sym_rows();

  bool row_ok = gf2_span_contains(s2, s1) && gf2_span_contains(g1, s2);
  if (row_ok) {
    const auto cent = pauli_centralizer(s2, c1.n_qubits);
    const auto inter = gf2_intersect(cent, g1, 2 * c1.n_qubits);
    row_ok = gf2_span_equal(inter, g2);
  }
  const bool param_ok = c1.d <= c2.d && c1.e <= c2.e;
  if (row_ok != param_ok)
    throw Error(
        "is_gauge_fixing_pair: row-space and parameter criteria disagree");
  return row_ok;
}

// Classical recipe for moving an encoded state of code1 into code2.
// measure_list holds generators of S2/S1 drawn from code2's cell
// generators; fix_basis holds elements of code1's gauge group whose
// pairing matrix P[i][j] = <measure_i, fix_j> is invertible. After
// measuring, outcomes v (bit 1 = eigenvalue -1) are repaired by the
// fix_basis subset selected by P^-1 v.
struct GaugeFixPlan {
  std::vector<DeltaGen> measure_list;
  std::vector<std::size_t> measure_index;  // positions in code2.S.gens
  std::vector<DeltaGen> fix_basis;
  std::vector<std::size_t> fix_index;  // positions in code1.G.gens
  std::vector<BitVec> pairing;
  std::vector<BitVec> pairing_inv;
  std::vector<DeltaGen> source_stabilizers;  // code1.S.gens, for pre-checks
  std::vector<DeltaGen> target_stabilizers;  // code2.S.gens, for post-checks

  std::size_t size() const { return measure_list.size(); }
  bool empty() const { return measure_list.empty(); }

  // Indices into fix_basis whose product anticommutes with exactly the
  // measurements that came out -1.
  std::vector<std::size_t> correction_for(const BitVec& v) const {
    if (v.size() != measure_list.size())
      throw Error("correction_for: outcome vector size mismatch");
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < fix_basis.size(); ++j)
      if (BitVec::dot(pairing_inv[j], v)) out.push_back(j);
    return out;
  }
};

inline GaugeFixPlan gauge_fix_plan(const GaugeColorCode& c1,
                                   const GaugeColorCode& c2) {
  if (!is_gauge_fixing_pair(c1, c2))
    throw Error("gauge_fix_plan: codes do not form a gauge fixing pair");
  GaugeFixPlan plan;
  plan.source_stabilizers = c1.S.gens;
  plan.target_stabilizers = c2.S.gens;
  const std::size_t nq = c1.n_qubits;

  // Coset representatives of S2/S1: sweep code2's stabilizer generators
  // and keep those independent of S1 plus the ones already kept. The
  // kept operators stay verbatim cell generators, so they are the low
  // weight operators one would actually measure.
  auto rref = gf2_rref(c1.S.sym_rows());
  for (std::size_t i = 0; i < c2.S.gens.size(); ++i) {
    BitVec red = gf2_reduce(rref, c2.S.gens[i].row());
    if (red.none()) continue;
    rref.push_back(red);
    rref = gf2_rref(rref);
    plan.measure_list.push_back(c2.S.gens[i]);
    plan.measure_index.push_back(i);
  }

  const std::size_t f = plan.measure_list.size();
  if (f == 0) return plan;

  // Partners from code1's gauge generators, greedily keeping those whose
  // pairing column against measure_list grows the rank.
  std::vector<BitVec> colrref;
  for (std::size_t j = 0;
       j < c1.G.gens.size() && plan.fix_basis.size() < f; ++j) {
    BitVec col(f);
    const BitVec grow = c1.G.gens[j].row();
    for (std::size_t i = 0; i < f; ++i)
      if (symplectic_product(plan.measure_list[i].row(), grow, nq))
        col.set(i);
    BitVec red = gf2_reduce(colrref, col);
    if (red.none()) continue;
    colrref.push_back(red);
    colrref = gf2_rref(colrref);
    plan.fix_basis.push_back(c1.G.gens[j]);
    plan.fix_index.push_back(j);
  }
  if (plan.fix_basis.size() != f)
    throw Error(
        "gauge_fix_plan: no invertible pairing, the gauge group cannot fix "
        "these measurements");

  plan.pairing.assign(f, BitVec(f));
  for (std::size_t i = 0; i < f; ++i)
    for (std::size_t j = 0; j < f; ++j)
      if (symplectic_product(plan.measure_list[i].row(),
                             plan.fix_basis[j].row(), nq))
        plan.pairing[i].set(j);
  plan.pairing_inv = gf2_invert(plan.pairing);
  return plan;
}

// The cell dual to delta, cut into the kappa-colored cells it contains:
// the duals of the simplices extending delta whose color set is the
// complement of kappa. Their supports partition the cell's support, so
// the matching single-type operators multiply to the cell operator.
inline std::vector<DeltaGen> decompose_stabilizer(const ColoredComplex& K,
                                                  const QubitIndexing& qi,
                                                  const Simplex& delta,
                                                  std::vector<Color> kappa,
                                                  char type = 'Z') {
  if (!K.is_closed) throw Error("decompose_stabilizer: complex must be closed");
  if (type != 'X' && type != 'Z')
    throw Error("decompose_stabilizer: type must be 'X' or 'Z'");
  support_tops(K, delta);  // validates delta as a qubit stratum

  std::sort(kappa.begin(), kappa.end());
  if (std::adjacent_find(kappa.begin(), kappa.end()) != kappa.end())
    throw Error("decompose_stabilizer: repeated color");
  auto dcolors = K.simplex_colors(delta);
  std::sort(dcolors.begin(), dcolors.end());
  std::vector<Color> cell_colors;  // colors of the dual cell
  for (Color c = 0; c <= K.D; ++c)
    if (!std::binary_search(dcolors.begin(), dcolors.end(), c))
      cell_colors.push_back(c);
  if (!std::includes(cell_colors.begin(), cell_colors.end(), kappa.begin(),
                     kappa.end()))
    throw Error(
        "decompose_stabilizer: color set is not a subset of the cell's "
        "colors");

  std::vector<Color> target;  // colors of the extending simplices
  for (Color c = 0; c <= K.D; ++c)
    if (!std::binary_search(kappa.begin(), kappa.end(), c))
      target.push_back(c);

  std::vector<DeltaGen> out;
  for (const auto& [s, cofaces] : K.faces[target.size() - 1]) {
    if (!std::includes(s.begin(), s.end(), delta.begin(), delta.end()))
      continue;
    auto sc = K.simplex_colors(s);
    std::sort(sc.begin(), sc.end());
    if (sc != target) continue;
    out.push_back({s, type, support_mask(K, qi, s)});
  }
  return out;
}

inline std::vector<DeltaGen> decompose_stabilizer(const ColoredComplex& K,
                                                  const Simplex& delta,
                                                  std::vector<Color> kappa,
                                                  char type = 'Z') {
  return decompose_stabilizer(K, qubit_indexing(K), delta, std::move(kappa),
                              type);
}

// Smallest family of dprime-sized color sets such that every target-sized
// color set contains a member. Exhaustive search in lexicographic order,
// so the result is deterministic; the candidate pool has at most
// binom(ncolors, dprime) entries and desk-scale color counts keep the
// search trivial.
inline std::vector<std::vector<Color>> minimal_color_cover(int ncolors,
                                                           int dprime,
                                                           int target) {
  if (dprime < 1 || dprime > target || target > ncolors)
    throw Error("minimal_color_cover: sizes out of range");
  std::vector<std::vector<Color>> pool;
  std::vector<Color> cur;
  auto gen_subsets = [&](auto&& self, int start, int want,
                         std::vector<std::vector<Color>>& sink) -> void {
    if (want == 0) {
      sink.push_back(cur);
      return;
    }
    for (int c = start; c <= ncolors - want; ++c) {
      cur.push_back(c);
      self(self, c + 1, want - 1, sink);
      cur.pop_back();
    }
  };
  gen_subsets(gen_subsets, 0, dprime, pool);

  std::vector<std::vector<Color>> targets;
  cur.clear();
  auto gen_targets = [&](auto&& self, int start, int want) -> void {
    if (want == 0) {
      targets.push_back(cur);
      return;
    }
    for (int c = start; c <= ncolors - want; ++c) {
      cur.push_back(c);
      self(self, c + 1, want - 1);
      cur.pop_back();
    }
  };
  gen_targets(gen_targets, 0, target);

  auto covers = [&](const std::vector<std::size_t>& family) {
    for (const auto& t : targets) {
      bool hit = false;
      for (std::size_t idx : family) {
        const auto& k = pool[idx];
        if (std::includes(t.begin(), t.end(), k.begin(), k.end())) {
          hit = true;
          break;
        }
      }
      if (!hit) return false;
    }
    return true;
  };

  std::vector<std::size_t> family;
  for (std::size_t size = 1; size <= pool.size(); ++size) {
    family.assign(size, 0);
    auto search = [&](auto&& self, std::size_t pos, std::size_t start) -> bool {
      if (pos == size) return covers(family);
      for (std::size_t idx = start; idx + (size - pos) <= pool.size(); ++idx) {
        family[pos] = idx;
        if (self(self, pos + 1, idx + 1)) return true;
      }
      return false;
    };
    if (search(search, 0, 0)) {
      std::vector<std::vector<Color>> out;
      for (std::size_t idx : family) out.push_back(pool[idx]);
      return out;
    }
  }
  throw Error("minimal_color_cover: no cover exists");
}

// One parallel measurement round: operators of one type attached to the
// dprime-cells of a fixed color set, which are pairwise disjoint.
struct ScheduleRound {
  char type = 'Z';
  std::vector<Color> kappa;
  std::vector<DeltaGen> ops;
};

// How to rebuild one stabilizer generator from measured rounds: the
// product of rounds[round].ops[i] over i in ops equals the generator.
struct Reconstruction {
  char type = 'Z';
  Simplex delta;
  std::size_t round = 0;
  std::vector<std::size_t> ops;
};

struct MeasurementSchedule {
  int dprime = 0;
  bool z_sector = false, x_sector = false;
  std::vector<std::vector<Color>> z_cover, x_cover;
  std::vector<ScheduleRound> rounds;
  std::vector<Reconstruction> reconstruction;
};

// Syndrome extraction via cell operators of an intermediate dimension.
// Z stabilizers can be measured through dprime-cells when
// d+1 <= dprime <= D-e+1, X stabilizers when e+1 <= dprime <= D-d+1;
// whichever sectors are in range are scheduled. Rounds group operators
// by color set so each round is a single parallel measurement step.
inline MeasurementSchedule measurement_schedule(const GaugeColorCode& code,
                                                int dprime) {
  const int D = code.D, d = code.d, e = code.e;
  MeasurementSchedule sched;
  sched.dprime = dprime;
  sched.z_sector = d + 1 <= dprime && dprime <= D - e + 1;
  sched.x_sector = e + 1 <= dprime && dprime <= D - d + 1;
  if (!sched.z_sector && !sched.x_sector)
    throw Error(
        "measurement_schedule: cell dimension out of range for both "
        "sectors, need d+1 <= d' <= D-e+1 or e+1 <= d' <= D-d+1");

  const auto& K = code.lattice;
  const auto& qi = code.qi;

  auto build_sector = [&](char type, int target,
                          std::vector<std::vector<Color>>& cover_out) {
    cover_out = minimal_color_cover(D + 1, dprime, target);
    std::map<std::vector<Color>, std::size_t> round_of;
    for (const auto& kappa : cover_out) {
      ScheduleRound round;
      round.type = type;
      round.kappa = kappa;
      std::vector<Color> scolors;  // simplex colors dual to kappa-cells
      for (Color c = 0; c <= D; ++c)
        if (!std::binary_search(kappa.begin(), kappa.end(), c))
          scolors.push_back(c);
      for (const auto& [s, cofaces] : K.faces[scolors.size() - 1]) {
        if (!K.has_original_vertex(s)) continue;
        auto sc = K.simplex_colors(s);
        std::sort(sc.begin(), sc.end());
        if (sc != scolors) continue;
        round.ops.push_back({s, type, support_mask(K, qi, s)});
      }
      round_of[kappa] = sched.rounds.size();
      sched.rounds.push_back(std::move(round));
    }

    for (const auto& gen : code.S.gens) {
      if (gen.type != type) continue;
      auto dcolors = K.simplex_colors(gen.delta);
      std::sort(dcolors.begin(), dcolors.end());
      std::vector<Color> cell_colors;
      for (Color c = 0; c <= D; ++c)
        if (!std::binary_search(dcolors.begin(), dcolors.end(), c))
          cell_colors.push_back(c);
      const std::vector<Color>* chosen = nullptr;
      for (const auto& kappa : cover_out)
        if (std::includes(cell_colors.begin(), cell_colors.end(),
                          kappa.begin(), kappa.end())) {
          chosen = &kappa;
          break;
        }
      if (!chosen)
        throw Error("measurement_schedule: cover misses a stabilizer cell");

      Reconstruction rec;
      rec.type = type;
      rec.delta = gen.delta;
      rec.round = round_of.at(*chosen);
      const auto parts = decompose_stabilizer(K, qi, gen.delta, *chosen, type);
      const auto& round = sched.rounds[rec.round];
      std::map<Simplex, std::size_t> pos;
      for (std::size_t i = 0; i < round.ops.size(); ++i)
        pos[round.ops[i].delta] = i;
      for (const auto& part : parts) {
        auto it = pos.find(part.delta);
        if (it == pos.end())
          throw Error("measurement_schedule: decomposition left the round");
        rec.ops.push_back(it->second);
      }
      std::sort(rec.ops.begin(), rec.ops.end());
      sched.reconstruction.push_back(std::move(rec));
    }
  };

  if (sched.z_sector) build_sector('Z', D - e + 1, sched.z_cover);
  if (sched.x_sector) build_sector('X', D - d + 1, sched.x_cover);
  return sched;
}

}  // namespace colex
