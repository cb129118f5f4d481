#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <complex>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "colex/pauli.hpp"

using colex::BitVec;
using colex::GeneratorSet;
using colex::Pauli;

namespace {

using cplx = std::complex<double>;
using Mat = std::vector<std::vector<cplx>>;

Mat kron(const Mat& a, const Mat& b) {
  std::size_t ar = a.size(), ac = a[0].size(), br = b.size(), bc = b[0].size();
  Mat out(ar * br, std::vector<cplx>(ac * bc));
  for (std::size_t i = 0; i < ar; ++i)
    for (std::size_t j = 0; j < ac; ++j)
      for (std::size_t k = 0; k < br; ++k)
        for (std::size_t l = 0; l < bc; ++l)
          out[i * br + k][j * bc + l] = a[i][j] * b[k][l];
  return out;
}

Mat matmul(const Mat& a, const Mat& b) {
  std::size_t n = a.size();
  Mat out(n, std::vector<cplx>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (a[i][k] != 0.0)
        for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

// Entries of Pauli matrices are 0, ±1, ±i, so equality is exact in double.
bool mat_eq(const Mat& a, const Mat& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (a[i][j] != b[i][j]) return false;
  return true;
}

// qubit q is the q-th least significant index bit
Mat dense(const Pauli& p) {
  static const Mat I{{1, 0}, {0, 1}};
  static const Mat X{{0, 1}, {1, 0}};
  static const Mat Z{{1, 0}, {0, -1}};
  static const Mat XZ{{0, -1}, {1, 0}};  // X then Z
  Mat m{{1}};
  for (std::size_t q = 0; q < p.n; ++q) {
    bool xb = p.x.get(q), zb = p.z.get(q);
    const Mat& f = xb ? (zb ? XZ : X) : (zb ? Z : I);
    m = kron(f, m);
  }
  static const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  cplx ph = ipow[p.phase & 3];
  for (auto& row : m)
    for (auto& v : row) v *= ph;
  return m;
}

Pauli random_pauli(std::mt19937_64& rng, std::size_t n) {
  BitVec x(n), z(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rng() & 1) x.set(i);
    if (rng() & 1) z.set(i);
  }
  return Pauli(n, x, z, unsigned(rng() % 4));
}

// BFS closure of the generated group: (x01, z01) -> set of phases
std::map<std::pair<std::string, std::string>, std::set<unsigned>> enumerate_group(
    const std::vector<Pauli>& gens, std::size_t n) {
  std::map<std::pair<std::string, std::string>, std::set<unsigned>> seen;
  std::vector<Pauli> frontier{Pauli::identity(n)};
  seen[{frontier[0].x.to01(), frontier[0].z.to01()}].insert(0);
  while (!frontier.empty()) {
    std::vector<Pauli> next;
    for (const auto& p : frontier)
      for (const auto& g : gens) {
        Pauli q = colex::pauli_mul(p, g);
        auto key = std::make_pair(q.x.to01(), q.z.to01());
        if (seen[key].insert(q.phase).second) next.push_back(q);
      }
    frontier = std::move(next);
  }
  return seen;
}

}  // namespace

TEST_CASE("product matches the dense matrix oracle") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t n = 1 + rng() % 4;
    Pauli a = random_pauli(rng, n), b = random_pauli(rng, n);
    CHECK(mat_eq(dense(colex::pauli_mul(a, b)), matmul(dense(a), dense(b))));
  }
}

TEST_CASE("product is associative") {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 1 + rng() % 5;
    Pauli a = random_pauli(rng, n), b = random_pauli(rng, n),
          c = random_pauli(rng, n);
    Pauli lhs = colex::pauli_mul(colex::pauli_mul(a, b), c);
    Pauli rhs = colex::pauli_mul(a, colex::pauli_mul(b, c));
    CHECK(lhs.x == rhs.x);
    CHECK(lhs.z == rhs.z);
    CHECK(lhs.phase == rhs.phase);
  }
}

TEST_CASE("commutation, hermiticity and adjoint match the oracle") {
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 1 + rng() % 3;
    Pauli a = random_pauli(rng, n), b = random_pauli(rng, n);
    CHECK(colex::pauli_commutes(a, b) ==
          mat_eq(matmul(dense(a), dense(b)), matmul(dense(b), dense(a))));

    Mat da = dense(a);
    Mat dag(da.size(), std::vector<cplx>(da.size()));
    for (std::size_t i = 0; i < da.size(); ++i)
      for (std::size_t j = 0; j < da.size(); ++j) dag[i][j] = std::conj(da[j][i]);
    CHECK(colex::pauli_hermitian(a) == mat_eq(da, dag));
    CHECK(mat_eq(dense(colex::pauli_adjoint(a)), dag));
  }
}

TEST_CASE("exact membership matches group enumeration") {
  std::mt19937_64 rng(109);
  for (int trial = 0; trial < 25; ++trial) {
    std::size_t n = 2 + rng() % 2;
    std::vector<Pauli> gens;
    std::size_t k = 2 + rng() % 3;
    for (std::size_t i = 0; i < k; ++i) gens.push_back(random_pauli(rng, n));
    GeneratorSet gs(n, gens);
    auto table = enumerate_group(gens, n);

    for (int probe = 0; probe < 40; ++probe) {
      Pauli p = random_pauli(rng, n);
      auto key = std::make_pair(p.x.to01(), p.z.to01());
      auto it = table.find(key);
      bool in_mod_phase = it != table.end();
      bool in_exact = in_mod_phase && it->second.count(p.phase) > 0;
      CHECK(gs.member(p, true) == in_mod_phase);
      CHECK(gs.member(p, false) == in_exact);
    }
    // every enumerated element is an exact member
    for (const auto& [key, phases] : table)
      for (unsigned ph : phases) {
        Pauli p(n, BitVec::from01(key.first), BitVec::from01(key.second), ph);
        CHECK(gs.member(p, false));
      }
  }
}

TEST_CASE("membership is invariant under generator permutation") {
  std::mt19937_64 rng(113);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 2 + rng() % 3;
    std::vector<Pauli> gens;
    for (std::size_t i = 0; i < 4; ++i) gens.push_back(random_pauli(rng, n));
    auto shuffled = gens;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    GeneratorSet g1(n, gens), g2(n, shuffled);
    for (int probe = 0; probe < 25; ++probe) {
      Pauli p = random_pauli(rng, n);
      CHECK(g1.member(p, false) == g2.member(p, false));
      CHECK(g1.member(p, true) == g2.member(p, true));
    }
  }
}

TEST_CASE("centralizer has complementary rank and commutes, center is the overlap") {
  std::mt19937_64 rng(127);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 2 + rng() % 2;
    std::vector<Pauli> gens;
    std::size_t k = 1 + rng() % 4;
    for (std::size_t i = 0; i < k; ++i) gens.push_back(random_pauli(rng, n));
    GeneratorSet gs(n, gens);
    auto rows = gs.rows();
    auto cent = colex::pauli_centralizer(rows, n);
    CHECK(cent.size() == 2 * n - colex::gf2_rank(rows));

    // brute force over all masks
    std::vector<BitVec> brute_cent, brute_center;
    auto rowspan = colex::gf2_rref(rows);
    for (std::size_t xm = 0; xm < (std::size_t(1) << n); ++xm)
      for (std::size_t zm = 0; zm < (std::size_t(1) << n); ++zm) {
        BitVec v(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
          if ((xm >> i) & 1) v.set(i);
          if ((zm >> i) & 1) v.set(n + i);
        }
        bool commutes_all = true;
        for (const auto& r : rows)
          if (colex::symplectic_product(v, r, n)) commutes_all = false;
        if (commutes_all) {
          brute_cent.push_back(v);
          if (colex::gf2_in_span(rowspan, v)) brute_center.push_back(v);
        }
      }
    CHECK(colex::gf2_span_equal(cent, brute_cent));
    CHECK(colex::gf2_span_equal(colex::pauli_center(rows, n), brute_center));
  }
}

TEST_CASE("canonical basis on a 2x2 subsystem code") {
  // qubits on a 2x2 grid: rows {0,1},{2,3}, columns {0,2},{1,3}
  std::size_t n = 4;
  auto X_on = [&](std::initializer_list<int> qs) {
    BitVec m(n);
    for (int q : qs) m.set(std::size_t(q));
    return Pauli::x_op(n, m);
  };
  auto Z_on = [&](std::initializer_list<int> qs) {
    BitVec m(n);
    for (int q : qs) m.set(std::size_t(q));
    return Pauli::z_op(n, m);
  };
  GeneratorSet S1(n, {X_on({0, 1, 2, 3}), Z_on({0, 1, 2, 3})});
  GeneratorSet S2(n, {X_on({0, 1, 2, 3}), Z_on({0, 1, 2, 3}), X_on({0, 1})});
  GeneratorSet G1(n, {X_on({0, 1}), X_on({2, 3}), Z_on({0, 2}), Z_on({1, 3}),
                      X_on({0, 1, 2, 3}), Z_on({0, 1, 2, 3})});

  auto basis = colex::canonical_basis(S1, S2, G1);
  CHECK(basis.n == 4);
  CHECK(basis.r == 2);
  CHECK(basis.s == 3);
  CHECK(basis.t == 3);

  // spans are certified
  std::vector<BitVec> z_first_r(basis.Z.begin(), basis.Z.begin() + basis.r);
  CHECK(colex::gf2_span_equal(z_first_r, S1.rows()));
  std::vector<BitVec> z_first_s(basis.Z.begin(), basis.Z.begin() + basis.s);
  CHECK(colex::gf2_span_equal(z_first_s, S2.rows()));
  std::vector<BitVec> pair_rows;
  for (std::size_t i = 0; i < basis.r; ++i) pair_rows.push_back(basis.Z[i]);
  for (std::size_t i = basis.r; i < basis.t; ++i) {
    pair_rows.push_back(basis.Z[i]);
    pair_rows.push_back(basis.X[i]);
  }
  CHECK(colex::gf2_span_equal(pair_rows, G1.rows()));
}

TEST_CASE("canonical basis rejects bad preconditions with a witness") {
  std::size_t n = 2;
  auto xm = [&](int q) {
    BitVec m(n);
    m.set(std::size_t(q));
    return Pauli::x_op(n, m);
  };
  auto zm = [&](int q) {
    BitVec m(n);
    m.set(std::size_t(q));
    return Pauli::z_op(n, m);
  };

  GeneratorSet ok(n, {zm(0)});
  GeneratorSet nonabelian(n, {zm(0), xm(0)});
  CHECK_THROWS_WITH(colex::canonical_basis(ok, nonabelian, nonabelian),
                    Catch::Matchers::ContainsSubstring("anticommute"));

  GeneratorSet s1_outside(n, {zm(1)});
  GeneratorSet s2(n, {zm(0)});
  CHECK_THROWS_WITH(colex::canonical_basis(s1_outside, s2, s2),
                    Catch::Matchers::ContainsSubstring("not in the span of S2"));

  GeneratorSet s2_outside_g1(n, {zm(0), zm(1)});
  GeneratorSet g1(n, {zm(0)});
  CHECK_THROWS_WITH(colex::canonical_basis(s2, s2_outside_g1, g1),
                    Catch::Matchers::ContainsSubstring("not in the span of G1"));

  GeneratorSet g1_anticommuting(n, {zm(0), xm(0)});
  CHECK_THROWS_WITH(colex::canonical_basis(s2, s2, g1_anticommuting),
                    Catch::Matchers::ContainsSubstring("anticommutes with G1"));
}

TEST_CASE("canonical basis completes trivial inputs to a full symplectic frame") {
  for (std::size_t n : {1, 3, 5}) {
    GeneratorSet empty(n);
    auto basis = colex::canonical_basis(empty, empty, empty);
    CHECK(basis.r == 0);
    CHECK(basis.s == 0);
    CHECK(basis.t == 0);
    CHECK(basis.Z.size() == n);
    CHECK(basis.X.size() == n);
  }
}

TEST_CASE("check matrix text round-trips") {
  std::mt19937_64 rng(131);
  std::size_t n = 9;
  std::vector<BitVec> rows;
  for (int i = 0; i < 5; ++i) rows.push_back(random_pauli(rng, n).row());
  std::string text = colex::to_check_matrix_text(rows, n);
  auto [n2, rows2] = colex::parse_check_matrix_text(text);
  CHECK(n2 == n);
  REQUIRE(rows2.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows2[i] == rows[i]);
  CHECK(colex::to_check_matrix_text(rows2, n2) == text);

  CHECK_THROWS_AS(colex::parse_check_matrix_text("NOPE 3 1\n000 000\n"),
                  colex::Error);
  CHECK_THROWS_AS(colex::parse_check_matrix_text("PAULI 3 1\n00 000\n"),
                  colex::Error);
  CHECK_THROWS_AS(colex::parse_check_matrix_text("PAULI 3 2\n000 000\n"),
                  colex::Error);
}
