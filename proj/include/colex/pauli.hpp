#pragma once

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "colex/gf2.hpp"

namespace colex {

// i^phase X^x Z^z, phase mod 4. The X factor is applied first, so
// P|b> = i^phase (-1)^{z.b} |b ^ x| ... with Z acting on the input bits.
struct Pauli {
  std::size_t n = 0;
  BitVec x, z;
  unsigned phase = 0;

  Pauli() = default;
  Pauli(std::size_t n_, BitVec x_, BitVec z_, unsigned ph = 0)
      : n(n_), x(std::move(x_)), z(std::move(z_)), phase(ph & 3) {}

  static Pauli identity(std::size_t n) { return Pauli(n, BitVec(n), BitVec(n)); }
  static Pauli x_op(std::size_t n, const BitVec& mask) {
    return Pauli(n, mask, BitVec(n));
  }
  static Pauli z_op(std::size_t n, const BitVec& mask) {
    return Pauli(n, BitVec(n), mask);
  }

  bool is_identity_mask() const { return x.none() && z.none(); }

  // symplectic row [x | z]
  BitVec row() const { return BitVec::concat(x, z); }

  static Pauli from_row(const BitVec& r, unsigned phase = 0) {
    std::size_t n = r.size() / 2;
    return Pauli(n, r.slice(0, n), r.slice(n, n), phase);
  }

  std::size_t weight() const {
    BitVec supp = x;
    for (std::size_t i = 0; i < n; ++i)
      if (z.get(i)) supp.set(i);
    return supp.popcount();
  }
};

// X^xa Z^za X^xb Z^zb = (-1)^{za.xb} X^{xa+xb} Z^{za+zb}
inline Pauli pauli_mul(const Pauli& a, const Pauli& b) {
  unsigned ph = (a.phase + b.phase + 2 * (BitVec::and_count(a.z, b.x) & 1)) & 3;
  return Pauli(a.n, a.x ^ b.x, a.z ^ b.z, ph);
}

inline bool pauli_commutes(const Pauli& a, const Pauli& b) {
  return BitVec::dot(a.x, b.z) == BitVec::dot(a.z, b.x);
}

// P is Hermitian iff phase == x.z mod 2
inline bool pauli_hermitian(const Pauli& p) {
  return (p.phase & 1) == (BitVec::and_count(p.x, p.z) & 1);
}

inline Pauli pauli_adjoint(const Pauli& p) {
  unsigned ph = (4 - p.phase + 2 * (BitVec::and_count(p.x, p.z) & 1)) & 3;
  return Pauli(p.n, p.x, p.z, ph);
}

// symplectic product of [x|z] rows: <u,v> = ux.vz + uz.vx
inline bool symplectic_product(const BitVec& u, const BitVec& v, std::size_t n) {
  BitVec ux = u.slice(0, n), uz = u.slice(n, n);
  BitVec vx = v.slice(0, n), vz = v.slice(n, n);
  return BitVec::dot(ux, vz) ^ BitVec::dot(uz, vx);
}

// [x|z] -> [z|x], turning symplectic products into plain dot products
inline BitVec swap_halves(const BitVec& u) {
  std::size_t n = u.size() / 2;
  return BitVec::concat(u.slice(n, n), u.slice(0, n));
}

// Ordered generating set with a cached reduced basis that tracks exact
// phases, so membership can be decided including the sign.
class GeneratorSet {
 public:
  explicit GeneratorSet(std::size_t n) : n_(n) {}
  GeneratorSet(std::size_t n, std::vector<Pauli> gens) : n_(n) {
    for (auto& g : gens) add(std::move(g));
  }

  std::size_t n_qubits() const { return n_; }
  const std::vector<Pauli>& gens() const { return gens_; }

  void add(Pauli g) {
    if (g.n != n_) throw Error("generator qubit count mismatch");
    gens_.push_back(std::move(g));
    built_ = false;
  }

  std::vector<BitVec> rows() const {
    std::vector<BitVec> r;
    r.reserve(gens_.size());
    for (const auto& g : gens_) r.push_back(g.row());
    return r;
  }

  std::size_t rank() const {
    build();
    return basis_.size();
  }

  // phase exponents k with i^k I in the group: {0}, {0,2} or all of Z4
  bool contains_minus_identity() const {
    build();
    return contains_minus_ || contains_i_;
  }
  bool contains_i_identity() const {
    build();
    return contains_i_;
  }

  // mod_phase: membership of the mask only; otherwise exact, sign included
  bool member(const Pauli& p, bool mod_phase) const {
    build();
    Pauli q = p;
    for (const auto& b : basis_) {
      int piv = b.row().lowest();
      if (piv >= 0 && q.row().get(std::size_t(piv))) q = pauli_mul(q, b);
    }
    if (!q.is_identity_mask()) return false;
    if (mod_phase) return true;
    if (q.phase == 0) return true;
    if (q.phase == 2) return contains_minus_identity();
    return contains_i_identity();
  }

  // reduced basis Paulis; rows form an rref over [x|z]
  const std::vector<Pauli>& basis() const {
    build();
    return basis_;
  }

 private:
  void build() const {
    if (built_) return;
    basis_.clear();
    contains_minus_ = contains_i_ = false;
    for (const auto& g : gens_) {
      Pauli q = g;
      for (const auto& b : basis_) {
        int piv = b.row().lowest();
        if (piv >= 0 && q.row().get(std::size_t(piv))) q = pauli_mul(q, b);
      }
      if (q.is_identity_mask()) {
        if (q.phase == 2) contains_minus_ = true;
        if (q.phase & 1) contains_i_ = true;
        continue;
      }
      int piv = q.row().lowest();
      for (auto& b : basis_)
        if (b.row().get(std::size_t(piv))) b = pauli_mul(b, q);
      std::size_t at = 0;
      while (at < basis_.size() && basis_[at].row().lowest() < piv) ++at;
      basis_.insert(basis_.begin() + at, q);
    }
    // -1 enters through anticommuting members or through squares
    for (std::size_t i = 0; i < basis_.size() && !contains_minus_; ++i) {
      unsigned sq =
          (2 * basis_[i].phase + 2 * (BitVec::and_count(basis_[i].x, basis_[i].z) & 1)) & 3;
      if (sq == 2) contains_minus_ = true;
      for (std::size_t j = i + 1; j < basis_.size() && !contains_minus_; ++j)
        if (!pauli_commutes(basis_[i], basis_[j])) contains_minus_ = true;
    }
    built_ = true;
  }

  std::size_t n_;
  std::vector<Pauli> gens_;
  mutable std::vector<Pauli> basis_;
  mutable bool built_ = false;
  mutable bool contains_minus_ = false;
  mutable bool contains_i_ = false;
};

// Basis of the space of [x|z] rows commuting with every given row.
inline std::vector<BitVec> pauli_centralizer(const std::vector<BitVec>& rows,
                                             std::size_t n) {
  std::vector<BitVec> eqs;
  eqs.reserve(rows.size());
  for (const auto& r : rows) eqs.push_back(swap_halves(r));
  return gf2_nullspace(eqs, 2 * n);
}

// rowspace(rows) ∩ centralizer(rows)
inline std::vector<BitVec> pauli_center(const std::vector<BitVec>& rows,
                                        std::size_t n) {
  return gf2_intersect(gf2_rref(rows), pauli_centralizer(rows, n), 2 * n);
}

// Hyperbolic basis refining S1 ⊆ S2 ⊆ G1:
//   Z_1..Z_r span S1, Z_1..Z_s span S2, pairs r+1..t exhaust G1,
//   pairs t+1..n complete the full 2n-dimensional symplectic space.
struct SymplecticBasis {
  std::size_t n = 0, r = 0, s = 0, t = 0;
  std::vector<BitVec> X, Z;  // [x|z] rows, one pair per index
};

namespace detail {

inline void symplectic_sweep(BitVec& v, const std::vector<BitVec>& X,
                             const std::vector<BitVec>& Z,
                             const std::vector<std::size_t>& pair_idx,
                             std::size_t n) {
  for (std::size_t i : pair_idx) {
    bool pz = symplectic_product(v, Z[i], n);
    bool px = symplectic_product(v, X[i], n);
    if (pz) v ^= X[i];
    if (px) v ^= Z[i];
  }
}

// Greedy pairing of a residual pool. Pool vectors may still carry a
// component inside span(central_rref), which pairs with nothing; it is
// divided out. Appends pairs; throws with `who` on an unpairable leftover.
inline void pair_pool(std::vector<BitVec> pool, std::vector<BitVec>& X,
                      std::vector<BitVec>& Z, std::vector<std::size_t>& pairs,
                      std::size_t n, const std::vector<BitVec>& central_rref,
                      const std::string& who) {
  for (auto& v : pool) v = gf2_reduce(central_rref, v);
  pool = gf2_rref(pool);
  while (!pool.empty()) {
    BitVec v = pool.front();
    std::optional<std::size_t> partner;
    for (std::size_t j = 1; j < pool.size(); ++j)
      if (symplectic_product(v, pool[j], n)) {
        partner = j;
        break;
      }
    if (!partner)
      throw Error(who + ": unpairable central element remains, precondition violated");
    BitVec w = pool[*partner];
    Z.push_back(v);
    X.push_back(w);
    std::size_t idx = Z.size() - 1;
    pool.erase(pool.begin() + *partner);
    pool.erase(pool.begin());
    for (auto& u : pool) {
      bool pz = symplectic_product(u, v, n);
      bool px = symplectic_product(u, w, n);
      if (pz) u ^= w;
      if (px) u ^= v;
      u = gf2_reduce(central_rref, u);
    }
    pool = gf2_rref(pool);
    pairs.push_back(idx);
  }
}

}  // namespace detail

inline SymplecticBasis canonical_basis(const GeneratorSet& S1,
                                       const GeneratorSet& S2,
                                       const GeneratorSet& G1) {
  std::size_t n = S1.n_qubits();
  if (S2.n_qubits() != n || G1.n_qubits() != n)
    throw Error("canonical_basis: qubit count mismatch");

  auto s1rows = S1.rows();
  auto s2rows = S2.rows();
  auto g1rows = G1.rows();

  // preconditions, reported with the offending generator
  for (std::size_t i = 0; i < s2rows.size(); ++i)
    for (std::size_t j = i + 1; j < s2rows.size(); ++j)
      if (symplectic_product(s2rows[i], s2rows[j], n))
        throw Error("canonical_basis: S2 generators " + std::to_string(i) +
                    " and " + std::to_string(j) + " anticommute");
  auto s2rref = gf2_rref(s2rows);
  for (std::size_t i = 0; i < s1rows.size(); ++i)
    if (!gf2_in_span(s2rref, s1rows[i]))
      throw Error("canonical_basis: S1 generator " + std::to_string(i) +
                  " is not in the span of S2");
  auto g1rref = gf2_rref(g1rows);
  for (std::size_t i = 0; i < s2rows.size(); ++i)
    if (!gf2_in_span(g1rref, s2rows[i]))
      throw Error("canonical_basis: S2 generator " + std::to_string(i) +
                  " is not in the span of G1");
  for (std::size_t i = 0; i < s1rows.size(); ++i)
    for (std::size_t j = 0; j < g1rows.size(); ++j)
      if (symplectic_product(s1rows[i], g1rows[j], n))
        throw Error("canonical_basis: S1 generator " + std::to_string(i) +
                    " anticommutes with G1 generator " + std::to_string(j));

  SymplecticBasis out;
  out.n = n;

  // stage A: Z rows from S1, extended by S2
  std::vector<BitVec> Z = gf2_rref(s1rows);
  out.r = Z.size();
  {
    auto running = Z;
    for (const auto& v : s2rows) {
      BitVec red = gf2_reduce(gf2_rref(running), v);
      if (red.any()) {
        Z.push_back(red);
        running.push_back(red);
      }
    }
  }
  out.s = Z.size();
  std::vector<BitVec> X(Z.size(), BitVec(2 * n));

  // stage B: partners for the S2 extension, drawn from rowspace(G1).
  // For each i solve for a combination of the G1 basis whose pairing
  // vector against Z_{r+1..s} is the unit vector at i.
  if (out.s > out.r) {
    std::size_t m = g1rref.size(), f = out.s - out.r;
    std::vector<BitVec> Bt(f, BitVec(m));  // Bt[j][a] = <g_a, Z_{r+j}>
    for (std::size_t j = 0; j < f; ++j)
      for (std::size_t a = 0; a < m; ++a)
        if (symplectic_product(g1rref[a], Z[out.r + j], n)) Bt[j].set(a);
    for (std::size_t i = 0; i < f; ++i) {
      BitVec e(f);
      e.set(i);
      auto lambda = gf2_solve(Bt, e, m);
      if (!lambda)
        throw Error("canonical_basis: no gauge partner for S2 extension row " +
                    std::to_string(i) + ", precondition violated");
      X[out.r + i] = gf2_apply_left(*lambda, g1rref, 2 * n);
    }
    // make partners mutually commuting
    for (std::size_t j = 0; j < f; ++j)
      for (std::size_t i = 0; i < j; ++i)
        if (symplectic_product(X[out.r + i], X[out.r + j], n))
          X[out.r + j] ^= Z[out.r + i];
  }

  std::vector<std::size_t> built;
  for (std::size_t i = out.r; i < out.s; ++i) built.push_back(i);

  // stage C: remaining gauge pairs from the swept G1 pool, taken modulo
  // the central rows Z_1..Z_r
  {
    std::vector<BitVec> central(Z.begin(), Z.begin() + out.r);
    auto central_rref = gf2_rref(central);
    std::vector<BitVec> pool = g1rref;
    for (auto& v : pool) detail::symplectic_sweep(v, X, Z, built, n);
    detail::pair_pool(std::move(pool), X, Z, built, n, central_rref,
                      "canonical_basis: G1");
  }
  out.t = Z.size();
  if (gf2_rank(g1rows) != out.r + 2 * (out.t - out.r))
    throw Error("canonical_basis: G1 rank does not split into center plus pairs");

  // stage D: destabilizers for Z_1..Z_r, solved over the full space with
  // all previously built vectors as constraints
  for (std::size_t i = 0; i < out.r; ++i) {
    std::vector<BitVec> eqs;
    BitVec rhs(2 * Z.size());
    std::size_t row = 0;
    for (std::size_t j = 0; j < Z.size(); ++j, ++row) {
      eqs.push_back(swap_halves(Z[j]));
      if (j == i) rhs.set(row);
    }
    for (std::size_t j = 0; j < Z.size(); ++j) {
      if (X[j].none()) continue;
      eqs.push_back(swap_halves(X[j]));
      ++row;
    }
    auto x = gf2_solve(eqs, rhs, 2 * n);
    if (!x) throw Error("canonical_basis: destabilizer solve failed");
    X[i] = *x;
  }

  // stage E: complete with pairs from the swept unit vectors
  {
    std::vector<std::size_t> all;
    for (std::size_t i = 0; i < Z.size(); ++i) all.push_back(i);
    std::vector<BitVec> pool;
    for (std::size_t j = 0; j < 2 * n; ++j) {
      BitVec e(2 * n);
      e.set(j);
      detail::symplectic_sweep(e, X, Z, all, n);
      if (e.any()) pool.push_back(e);
    }
    detail::pair_pool(std::move(pool), X, Z, all, n, {},
                      "canonical_basis: completion");
  }

  if (Z.size() != n)
    throw Error("canonical_basis: expected " + std::to_string(n) + " pairs, got " +
                std::to_string(Z.size()));

  // exhaustive commutation matrix check
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (symplectic_product(Z[i], Z[j], n))
        throw Error("canonical_basis: Z rows anticommute");
      if (symplectic_product(X[i], X[j], n))
        throw Error("canonical_basis: X rows anticommute");
      bool want = i == j;
      if (symplectic_product(X[i], Z[j], n) != want)
        throw Error("canonical_basis: bad X/Z pairing");
    }

  out.X = std::move(X);
  out.Z = std::move(Z);
  return out;
}

// "PAULI <n_qubits> <n_rows>" then one "<x-bits> <z-bits>" line per row
inline std::string to_check_matrix_text(const std::vector<BitVec>& rows,
                                        std::size_t n) {
  std::ostringstream os;
  os << "PAULI " << n << ' ' << rows.size() << '\n';
  for (const auto& r : rows)
    os << r.slice(0, n).to01() << ' ' << r.slice(n, n).to01() << '\n';
  return os.str();
}

inline std::pair<std::size_t, std::vector<BitVec>> parse_check_matrix_text(
    const std::string& text) {
  std::istringstream is(text);
  std::string tag;
  std::size_t n = 0, m = 0;
  if (!(is >> tag >> n >> m) || tag != "PAULI")
    throw Error("check matrix: bad header");
  std::vector<BitVec> rows;
  rows.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::string xs, zs;
    if (!(is >> xs >> zs)) throw Error("check matrix: truncated row list");
    if (xs.size() != n || zs.size() != n)
      throw Error("check matrix: row " + std::to_string(i) + " has wrong width");
    rows.push_back(BitVec::concat(BitVec::from01(xs), BitVec::from01(zs)));
  }
  return {n, rows};
}

}  // namespace colex
