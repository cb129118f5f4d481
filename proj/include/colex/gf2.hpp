#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace colex {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fixed-width bit vector over GF(2); bit i lives at word[i/64] >> (i%64).
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }

  bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }

  void set(std::size_t i, bool v = true) {
    std::uint64_t m = std::uint64_t(1) << (i & 63);
    if (v)
      w_[i >> 6] |= m;
    else
      w_[i >> 6] &= ~m;
  }

  void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t(1) << (i & 63); }

  BitVec& operator^=(const BitVec& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
    return *this;
  }

  friend BitVec operator^(BitVec a, const BitVec& b) {
    a ^= b;
    return a;
  }

  friend BitVec operator&(BitVec a, const BitVec& b) {
    for (std::size_t k = 0; k < a.w_.size(); ++k) a.w_[k] &= b.w_[k];
    return a;
  }

  std::size_t popcount() const {
    std::size_t c = 0;
    for (auto w : w_) c += std::popcount(w);
    return c;
  }

  static std::size_t and_count(const BitVec& a, const BitVec& b) {
    std::size_t c = 0;
    for (std::size_t k = 0; k < a.w_.size(); ++k)
      c += std::popcount(a.w_[k] & b.w_[k]);
    return c;
  }

  // parity of |a & b|, the GF(2) dot product
  static bool dot(const BitVec& a, const BitVec& b) { return and_count(a, b) & 1; }

  bool none() const {
    for (auto w : w_)
      if (w) return false;
    return true;
  }
  bool any() const { return !none(); }

  // index of the lowest set bit, -1 if zero
  int lowest() const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k]) return int(k * 64 + std::countr_zero(w_[k]));
    return -1;
  }

  bool operator==(const BitVec& o) const { return n_ == o.n_ && w_ == o.w_; }
  bool operator!=(const BitVec& o) const { return !(*this == o); }
  bool operator<(const BitVec& o) const {
    if (n_ != o.n_) return n_ < o.n_;
    return w_ < o.w_;
  }

  // halves of a symplectic row and their concatenation
  BitVec slice(std::size_t from, std::size_t len) const {
    BitVec r(len);
    for (std::size_t i = 0; i < len; ++i)
      if (get(from + i)) r.set(i);
    return r;
  }

  static BitVec concat(const BitVec& a, const BitVec& b) {
    BitVec r(a.size() + b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a.get(i)) r.set(i);
    for (std::size_t i = 0; i < b.size(); ++i)
      if (b.get(i)) r.set(a.size() + i);
    return r;
  }

  std::string to01() const {
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i)
      if (get(i)) s[i] = '1';
    return s;
  }

  static BitVec from01(const std::string& s) {
    BitVec r(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '1')
        r.set(i);
      else if (s[i] != '0')
        throw Error("bit string has a character other than 0/1");
    }
    return r;
  }

  std::vector<std::size_t> ones() const {
    std::vector<std::size_t> v;
    for (std::size_t i = 0; i < n_; ++i)
      if (get(i)) v.push_back(i);
    return v;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

// Reduced row echelon form with ascending pivot columns; zero rows dropped.
// The result is the canonical basis of the row space, so two spans are equal
// iff their rrefs are equal.
inline std::vector<BitVec> gf2_rref(std::vector<BitVec> rows,
                                    std::vector<int>* pivots_out = nullptr) {
  std::vector<BitVec> basis;
  std::vector<int> pivots;
  for (auto& r : rows) {
    for (std::size_t k = 0; k < basis.size(); ++k)
      if (r.get(std::size_t(pivots[k]))) r ^= basis[k];
    int p = r.lowest();
    if (p < 0) continue;
    // keep rref: clear column p in existing rows
    for (std::size_t k = 0; k < basis.size(); ++k)
      if (basis[k].get(std::size_t(p))) basis[k] ^= r;
    // insert sorted by pivot
    std::size_t at = 0;
    while (at < pivots.size() && pivots[at] < p) ++at;
    basis.insert(basis.begin() + at, r);
    pivots.insert(pivots.begin() + at, p);
  }
  if (pivots_out) *pivots_out = pivots;
  return basis;
}

inline std::size_t gf2_rank(const std::vector<BitVec>& rows) {
  return gf2_rref(rows).size();
}

inline BitVec gf2_reduce(const std::vector<BitVec>& rref, BitVec v) {
  for (const auto& b : rref) {
    int p = b.lowest();
    if (p >= 0 && v.get(std::size_t(p))) v ^= b;
  }
  return v;
}

inline bool gf2_in_span(const std::vector<BitVec>& rref, const BitVec& v) {
  return gf2_reduce(rref, v).none();
}

inline bool gf2_span_contains(const std::vector<BitVec>& a,
                              const std::vector<BitVec>& b) {
  auto ra = gf2_rref(a);
  for (const auto& v : b)
    if (!gf2_in_span(ra, v)) return false;
  return true;
}

inline bool gf2_span_equal(const std::vector<BitVec>& a,
                           const std::vector<BitVec>& b) {
  return gf2_rref(a) == gf2_rref(b);
}

inline std::vector<BitVec> gf2_transpose(const std::vector<BitVec>& rows,
                                         std::size_t ncols) {
  std::vector<BitVec> t(ncols, BitVec(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < ncols; ++j)
      if (rows[i].get(j)) t[j].set(i);
  return t;
}

// Solve A x = b for x (rows of A are equations over ncols unknowns).
// Returns the particular solution with all free variables zero, or nullopt.
inline std::optional<BitVec> gf2_solve(const std::vector<BitVec>& rows,
                                       const BitVec& rhs, std::size_t ncols) {
  std::vector<BitVec> aug;
  aug.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    BitVec r(ncols + 1);
    for (std::size_t j = 0; j < ncols; ++j)
      if (rows[i].get(j)) r.set(j);
    if (rhs.get(i)) r.set(ncols);
    aug.push_back(r);
  }
  std::vector<int> pivots;
  auto rref = gf2_rref(aug, &pivots);
  BitVec x(ncols);
  for (std::size_t k = 0; k < rref.size(); ++k) {
    if (pivots[k] == int(ncols)) return std::nullopt;  // 0 = 1 row
    if (rref[k].get(ncols)) x.set(std::size_t(pivots[k]));
  }
  return x;
}

// Basis of {x : A x = 0}.
inline std::vector<BitVec> gf2_nullspace(const std::vector<BitVec>& rows,
                                         std::size_t ncols) {
  std::vector<int> pivots;
  std::vector<BitVec> clipped;
  clipped.reserve(rows.size());
  for (const auto& r : rows) clipped.push_back(r.slice(0, ncols));
  auto rref = gf2_rref(clipped, &pivots);
  std::vector<bool> is_pivot(ncols, false);
  for (int p : pivots) is_pivot[std::size_t(p)] = true;
  std::vector<BitVec> basis;
  for (std::size_t j = 0; j < ncols; ++j) {
    if (is_pivot[j]) continue;
    BitVec v(ncols);
    v.set(j);
    for (std::size_t k = 0; k < rref.size(); ++k)
      if (rref[k].get(j)) v.set(std::size_t(pivots[k]));
    basis.push_back(v);
  }
  return basis;
}

// Zassenhaus: basis of rowspace(A) ∩ rowspace(B).
inline std::vector<BitVec> gf2_intersect(const std::vector<BitVec>& a,
                                         const std::vector<BitVec>& b,
                                         std::size_t ncols) {
  std::vector<BitVec> block;
  for (const auto& r : a) block.push_back(BitVec::concat(r, r));
  for (const auto& r : b) block.push_back(BitVec::concat(r, BitVec(ncols)));
  auto rref = gf2_rref(block);
  std::vector<BitVec> out;
  for (const auto& r : rref) {
    if (r.slice(0, ncols).none()) {
      BitVec right = r.slice(ncols, ncols);
      if (right.any()) out.push_back(right);
    }
  }
  return gf2_rref(out);
}

// Inverse of a square matrix given as rows; throws if singular.
inline std::vector<BitVec> gf2_invert(const std::vector<BitVec>& rows) {
  std::size_t n = rows.size();
  std::vector<BitVec> aug;
  aug.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    BitVec r(2 * n);
    for (std::size_t j = 0; j < n; ++j)
      if (rows[i].get(j)) r.set(j);
    r.set(n + i);
    aug.push_back(r);
  }
  std::vector<int> pivots;
  auto rref = gf2_rref(aug, &pivots);
  if (rref.size() != n) throw Error("matrix is singular");
  for (std::size_t k = 0; k < n; ++k)
    if (pivots[k] != int(k)) throw Error("matrix is singular");
  std::vector<BitVec> inv;
  inv.reserve(n);
  for (std::size_t k = 0; k < n; ++k) inv.push_back(rref[k].slice(n, n));
  return inv;
}

// y = x A for a row vector x (combination of A's rows).
inline BitVec gf2_apply_left(const BitVec& x, const std::vector<BitVec>& rows,
                             std::size_t ncols) {
  BitVec y(ncols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (x.get(i)) y ^= rows[i];
  return y;
}

}  // namespace colex
