#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "colex/code.hpp"
#include "colex/gf2.hpp"
#include "colex/pauli.hpp"
#include "colex/protocol.hpp"
#include "colex/transversal.hpp"

namespace colex {

using cdouble = std::complex<double>;

constexpr double kNormTol = 1e-12;
constexpr std::size_t kSimQubitLimit = 20;

namespace detail {

inline std::uint64_t mask_u64(const BitVec& v) {
  std::uint64_t m = 0;
  for (std::size_t i : v.ones()) {
    if (i >= 64) throw Error("statevector: mask exceeds 64 bits");
    m |= std::uint64_t(1) << i;
  }
  return m;
}

inline cdouble i_power(unsigned k) {
  switch (k & 3u) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace detail

// Dense amplitude vector over the computational basis; qubit q is bit q of
// the basis index. Deliberately capped at 20 qubits: the interesting gates
// here are non-Clifford, so exactness beats scale.
struct StateVector {
  std::size_t n = 0;
  std::vector<cdouble> amp;

  explicit StateVector(std::size_t nq) : n(nq) {
    if (nq > kSimQubitLimit)
      throw Error("statevector: too many qubits, the dense limit is 20");
    amp.assign(std::size_t(1) << nq, cdouble(0.0, 0.0));
    amp[0] = 1.0;
  }

  double norm2() const {
    double s = 0;
    for (const auto& a : amp) s += std::norm(a);
    return s;
  }

  void check_norm() const {
    if (std::abs(norm2() - 1.0) > kNormTol)
      throw Error("statevector: norm drifted beyond tolerance");
  }
};

inline cdouble inner(const StateVector& a, const StateVector& b) {
  if (a.n != b.n) throw Error("inner: qubit count mismatch");
  cdouble s = 0;
  for (std::size_t i = 0; i < a.amp.size(); ++i)
    s += std::conj(a.amp[i]) * b.amp[i];
  return s;
}

inline double fidelity(const StateVector& a, const StateVector& b) {
  return std::abs(inner(a, b));
}

inline StateVector apply_pauli(const StateVector& s, const Pauli& p) {
  if (p.n != s.n) throw Error("apply_pauli: qubit count mismatch");
  const std::uint64_t xm = detail::mask_u64(p.x);
  const std::uint64_t zm = detail::mask_u64(p.z);
  const cdouble ph = detail::i_power(p.phase);
  StateVector out(s.n);
  out.amp.assign(s.amp.size(), cdouble(0.0, 0.0));
  for (std::uint64_t idx = 0; idx < s.amp.size(); ++idx) {
    const cdouble sign(std::popcount(idx & zm) & 1 ? -1.0 : 1.0, 0.0);
    out.amp[idx ^ xm] += ph * sign * s.amp[idx];
  }
  return out;
}

inline cdouble expectation(const StateVector& s, const Pauli& p) {
  if (p.n != s.n) throw Error("expectation: qubit count mismatch");
  const std::uint64_t xm = detail::mask_u64(p.x);
  const std::uint64_t zm = detail::mask_u64(p.z);
  const cdouble ph = detail::i_power(p.phase);
  cdouble acc = 0;
  for (std::uint64_t idx = 0; idx < s.amp.size(); ++idx) {
    const double sign = std::popcount(idx & zm) & 1 ? -1.0 : 1.0;
    acc += std::conj(s.amp[idx ^ xm]) * ph * sign * s.amp[idx];
  }
  return acc;
}

// Equal superposition over the X-side of the gauge group, shifted by the
// logical X when a = 1. The result carries eigenvalue +1 for every
// stabilizer generator and every X-type gauge generator.
inline StateVector encode_logical(const GaugeColorCode& code, int a) {
  const std::size_t nq = code.n_qubits;
  if (nq > kSimQubitLimit)
    throw Error("encode_logical: too many qubits, the dense limit is 20");
  if (a != 0 && a != 1) throw Error("encode_logical: bit must be 0 or 1");

  const auto basis = gf2_rref(code.G.supports_of('X'));
  const std::size_t r = basis.size();
  const double scale = std::pow(2.0, -double(r) / 2.0);

  StateVector out(nq);
  out.amp.assign(out.amp.size(), cdouble(0.0, 0.0));
  std::uint64_t cur = a ? detail::mask_u64(code.all_ones()) : 0;
  out.amp[cur] = scale;
  for (std::uint64_t g = 1; g < (std::uint64_t(1) << r); ++g) {
    int bit = std::countr_zero(g);
    cur ^= detail::mask_u64(basis[std::size_t(bit)]);
    out.amp[cur] = scale;
  }
  out.check_norm();
  return out;
}

// Diagonal transversal gate: every computational basis amplitude picks up
// exp(2 pi i k (|supp - T| - |supp & T|) / 2^n) for its support supp.
inline StateVector apply_gate_plan(const StateVector& s, const GatePlan& plan) {
  if (plan.T.bits.size() != s.n)
    throw Error("apply_gate_plan: plan length does not match the state");
  const std::uint64_t tmask = detail::mask_u64(plan.T.bits);
  const std::int64_t mod = std::int64_t(1) << plan.n;
  std::vector<cdouble> root(static_cast<std::size_t>(mod));
  for (std::int64_t j = 0; j < mod; ++j) {
    const double ang = 2.0 * std::acos(-1.0) * double(j) / double(mod);
    root[std::size_t(j)] = cdouble(std::cos(ang), std::sin(ang));
  }
  StateVector out(s.n);
  out.amp = s.amp;
  for (std::uint64_t idx = 0; idx < out.amp.size(); ++idx) {
    const std::int64_t signed_supp =
        std::int64_t(std::popcount(idx)) -
        2 * std::int64_t(std::popcount(idx & tmask));
    const std::int64_t e = ((plan.k * signed_supp) % mod + mod) % mod;
    out.amp[idx] *= root[std::size_t(e)];
  }
  return out;
}

// Projective measurement of a Hermitian Pauli. One uniform draw is consumed
// per call even when the outcome is forced, so records stay aligned across
// runs that share a seed.
template <class Rng>
inline std::pair<int, StateVector> measure_pauli(const StateVector& s,
                                                 const Pauli& p, Rng& rng) {
  if (!pauli_hermitian(p))
    throw Error("measure_pauli: operator is not Hermitian");
  const cdouble ev = expectation(s, p);
  double p_plus = 0.5 * (1.0 + ev.real());
  if (p_plus < 0.0) p_plus = 0.0;
  if (p_plus > 1.0) p_plus = 1.0;

  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  int outcome;
  if (p_plus >= 1.0 - kNormTol)
    outcome = 1;
  else if (p_plus <= kNormTol)
    outcome = -1;
  else
    outcome = u < p_plus ? 1 : -1;

  StateVector proj = apply_pauli(s, p);
  const double sign = outcome;
  for (std::size_t i = 0; i < proj.amp.size(); ++i)
    proj.amp[i] = 0.5 * (s.amp[i] + sign * proj.amp[i]);
  const double nrm = std::sqrt(proj.norm2());
  if (nrm < 1e-9)
    throw Error("measure_pauli: projection onto the chosen outcome vanishes");
  for (auto& a : proj.amp) a /= nrm;
  return {outcome, std::move(proj)};
}

struct MeasurementRecord {
  std::uint64_t seed = 0;
  std::vector<std::pair<std::size_t, int>> outcomes;  // (operator id, +-1)
};

// Execute a gauge fixing plan on an encoded state: measure every plan
// operator, look up the correcting gauge element from the outcome vector,
// apply it, and hand back the record. The state must sit in the source
// code space, and the result is checked against the target stabilizers.
inline std::pair<StateVector, MeasurementRecord> run_gauge_fixing(
    const StateVector& s, const GaugeFixPlan& plan, std::uint64_t seed) {
  for (const auto& gen : plan.source_stabilizers) {
    const cdouble ev = expectation(s, gen.to_pauli());
    if (std::abs(ev - cdouble(1.0, 0.0)) > 1e-10)
      throw Error(
          "run_gauge_fixing: state is outside the source code space");
  }

  MeasurementRecord record;
  record.seed = seed;
  std::mt19937_64 rng(seed);

  StateVector cur = s;
  BitVec v(plan.size());
  for (std::size_t i = 0; i < plan.measure_list.size(); ++i) {
    auto [outcome, next] =
        measure_pauli(cur, plan.measure_list[i].to_pauli(), rng);
    cur = std::move(next);
    record.outcomes.emplace_back(i, outcome);
    if (outcome == -1) v.set(i);
  }

  for (std::size_t j : plan.correction_for(v))
    cur = apply_pauli(cur, plan.fix_basis[j].to_pauli());

  for (const auto& gen : plan.target_stabilizers) {
    const cdouble ev = expectation(cur, gen.to_pauli());
    if (std::abs(ev - cdouble(1.0, 0.0)) > 1e-10)
      throw Error("run_gauge_fixing: a target stabilizer is not fixed to +1");
  }
  cur.check_norm();
  return {std::move(cur), std::move(record)};
}

// Symbolic verification of the Clifford transversal gates. CNot acts
// blockwise as (x1,z1,x2,z2) -> (x1, z1+z2, x1+x2, z2); Hadamard swaps the
// x and z halves of every row. Everything is checked as GF(2) row space
// membership, so no two-block statevector is ever built.
inline StructureReport clifford_transversal_check(const GaugeColorCode& code) {
  StructureReport report;
  const std::size_t nq = code.n_qubits;

  auto cnot_image = [&](const BitVec& row, bool first_block) {
    // rows of the two-block group live as [x1|z1|x2|z2]
    BitVec x = row.slice(0, nq), z = row.slice(nq, nq);
    BitVec out(4 * nq);
    auto put = [&](std::size_t base, const BitVec& m) {
      for (std::size_t i : m.ones()) out.set(base + i);
    };
    if (first_block) {
      put(0, x);
      put(nq, z);
      put(2 * nq, x);
    } else {
      put(nq, z);
      put(2 * nq, x);
      put(3 * nq, z);
    }
    return out;
  };

  auto two_block_span = [&](const std::vector<BitVec>& rows) {
    std::vector<BitVec> out;
    for (const auto& r : rows) {
      BitVec hi(4 * nq), lo(4 * nq);
      BitVec x = r.slice(0, nq), z = r.slice(nq, nq);
      for (std::size_t i : x.ones()) hi.set(i), lo.set(2 * nq + i);
      for (std::size_t i : z.ones()) hi.set(nq + i), lo.set(3 * nq + i);
      out.push_back(hi);
      out.push_back(lo);
    }
    return gf2_rref(out);
  };

  auto check_cnot = [&](const std::vector<BitVec>& rows, const char* name) {
    const auto span = two_block_span(rows);
    bool ok = true;
    std::string witness;
    for (std::size_t i = 0; i < rows.size() && ok; ++i)
      for (bool first : {true, false}) {
        if (!gf2_in_span(span, cnot_image(rows[i], first))) {
          ok = false;
          witness = "generator " + std::to_string(i) + " leaves the group";
          break;
        }
      }
    report.checks.push_back({name, ok, witness});
  };
  check_cnot(code.S.sym_rows(), "cnot_stabilizers");
  check_cnot(code.G.sym_rows(), "cnot_gauge");

  {
    // logical action: X on block 1 gains an X on block 2, Z on block 2
    // gains a Z on block 1, the other two are untouched
    const BitVec lx = code.logical_x().row();
    const BitVec lz = code.logical_z().row();
    BitVec lx_img = cnot_image(lx, true);
    BitVec lz_img = cnot_image(lz, false);
    BitVec lx_want(4 * nq), lz_want(4 * nq);
    for (std::size_t i = 0; i < nq; ++i) {
      lx_want.set(i);
      lx_want.set(2 * nq + i);
      lz_want.set(nq + i);
      lz_want.set(3 * nq + i);
    }
    const bool ok = lx_img == lx_want && lz_img == lz_want;
    report.checks.push_back(
        {"cnot_logicals", ok, ok ? "" : "logical image mismatch"});
  }

  auto swapped = [&](const std::vector<BitVec>& rows) {
    std::vector<BitVec> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(swap_halves(r));
    return out;
  };
  auto rank_witness = [&](const std::vector<BitVec>& rows) {
    return "x-rank " + std::to_string(gf2_rank(
               [&] {
                 std::vector<BitVec> xs;
                 for (const auto& r : rows) xs.push_back(r.slice(0, nq));
                 return xs;
               }())) +
           " z-rank " + std::to_string(gf2_rank([&] {
             std::vector<BitVec> zs;
             for (const auto& r : rows) zs.push_back(r.slice(nq, nq));
             return zs;
           }()));
  };
  {
    const auto rows = code.S.sym_rows();
    const bool ok = gf2_span_equal(rows, swapped(rows));
    report.checks.push_back(
        {"hadamard_stabilizers", ok, ok ? "" : rank_witness(rows)});
  }
  {
    const auto rows = code.G.sym_rows();
    const bool ok = gf2_span_equal(rows, swapped(rows));
    report.checks.push_back(
        {"hadamard_gauge", ok, ok ? "" : rank_witness(rows)});
  }
  {
    const bool ok =
        swap_halves(code.logical_x().row()) == code.logical_z().row();
    report.checks.push_back(
        {"hadamard_logicals", ok, ok ? "" : "logical masks differ"});
  }
  return report;
}

}  // namespace colex
