#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <random>

#include "nucifera/certify.hpp"
#include "nucifera/int128.hpp"
#include "oracles.hpp"

using namespace nucifera;

namespace {

BitGraph cycle(int n) {
  BitGraph g;
  g.n = n;
  for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

BitGraph fixture24() {
  return load_graph_file(std::string(NUCIFERA_DATA_DIR) + "/nuciferous24.adj");
}

std::vector<std::vector<long>> fixture24_inv21() {
  std::ifstream in(std::string(NUCIFERA_DATA_DIR) + "/nuciferous24.inv21.txt");
  REQUIRE(in.good());
  std::vector<std::vector<long>> m(24, std::vector<long>(24));
  for (auto& row : m)
    for (auto& x : row) in >> x;
  return m;
}

// deterministic Miller-Rabin for 64-bit inputs
bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  uint64_t d = n - 1;
  int r = 0;
  while (d % 2 == 0) d /= 2, ++r;
  auto mulm = [&](uint64_t a, uint64_t b) { return uint64_t(u128(a) * b % n); };
  auto powm = [&](uint64_t a, uint64_t e) {
    uint64_t acc = 1;
    while (e) {
      if (e & 1) acc = mulm(acc, a);
      a = mulm(a, a);
      e >>= 1;
    }
    return acc;
  };
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    uint64_t x = powm(a, d);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mulm(x, x);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

void check_against_oracle(const BitGraph& g) {
  auto oracle = oracles::rational_inverse(g);
  if (oracle.singular) {
    Certificate cert = adjugate_exact(g);
    CHECK(cert.verdict == Verdict::Singular);
    CHECK(cert.det == 0);
    return;
  }
  Certificate cert = adjugate_exact(g);
  REQUIRE(cert.verdict != Verdict::Singular);
  // det agreement
  oracles::rational det_r(to_string(cert.det));
  CHECK(det_r == oracle.det);
  // every inverse entry: adj[i][j] / det == oracle inverse entry
  bool diag_zero = true, offdiag_nonzero = true;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      oracles::rational entry(to_string(cert.adj_at(i, j)));
      CHECK(entry / det_r == oracle.at(g.n, i, j));
      if (i == j && oracle.at(g.n, i, j) != 0) diag_zero = false;
      if (i != j && oracle.at(g.n, i, j) == 0) offdiag_nonzero = false;
    }
  // pattern transfer: the verdict computed on adj matches the one computed
  // on the rational inverse
  Verdict expect = !diag_zero     ? Verdict::DiagNonzero
                   : !offdiag_nonzero ? Verdict::OffdiagZero
                                      : Verdict::Nuciferous;
  CHECK(cert.verdict == expect);
}

}  // namespace

TEST_CASE("prime pool: odd primes below 2^63, pairwise products certify n <= 31") {
  auto primes = certification_primes();
  REQUIRE(primes.size() >= 2);
  for (uint64_t p : primes) {
    CHECK(is_prime_u64(p));
    CHECK(p % 2 == 1);
    CHECK(p < (uint64_t{1} << 63));
  }
  i128 cof_bound = hadamard_det_bound(certified_max_order() - 1);
  i128 det_bound = hadamard_det_bound(certified_max_order());
  for (size_t i = 0; i < primes.size(); ++i)
    for (size_t j = i + 1; j < primes.size(); ++j) {
      u128 pq = u128(primes[i]) * primes[j];
      CHECK(pq > 2 * abs_u128(cof_bound));
      CHECK(pq > 2 * abs_u128(det_bound));
      CHECK(pq < (u128{1} << 127));
    }
}

TEST_CASE("hadamard bound table matches direct computation for small n") {
  // floor(n^(n/2)) = isqrt(n^n); n^n fits u128 for n <= 16
  for (int n = 1; n <= 16; ++n) {
    u128 power = 1;
    for (int i = 0; i < n; ++i) power *= u128(n);
    u128 root = 0;
    for (int bit = 63; bit >= 0; --bit) {
      u128 cand = root | (u128{1} << bit);
      if (cand * cand <= power) root = cand;
    }
    CHECK(abs_u128(hadamard_det_bound(n)) == root);
  }
  CHECK_THROWS_AS(hadamard_det_bound(32), std::invalid_argument);
}

TEST_CASE("det_mod residues") {
  BitGraph c4 = cycle(4);
  for (uint64_t p : certification_primes()) CHECK(det_mod(c4, p) == 0);
  CHECK(det_mod(c4, 1000000007ull) == 0);

  BitGraph k2 = graph_from_adjacency_text("0 1\n1 0\n");
  CHECK(det_mod(k2, 1000000007ull) == 1000000006ull);   // det = -1

  BitGraph fx = fixture24();
  for (uint64_t p : certification_primes()) CHECK(det_mod(fx, p) != 0);

  CHECK_THROWS_AS(det_mod(k2, 4ull), std::invalid_argument);
  CHECK_THROWS_AS(det_mod(k2, 2ull), std::invalid_argument);
}

TEST_CASE("adjugate_exact on the spec'd small graphs") {
  BitGraph k2 = graph_from_adjacency_text("0 1\n1 0\n");
  Certificate ck2 = adjugate_exact(k2);
  CHECK(ck2.verdict == Verdict::Nuciferous);
  CHECK(ck2.det == -1);
  CHECK(ck2.adj_at(0, 0) == 0);
  CHECK(ck2.adj_at(0, 1) == -1);
  CHECK(ck2.adj_at(1, 0) == -1);
  CHECK(ck2.adj_at(1, 1) == 0);
  CHECK(ck2.primes_used.size() == 2);

  Certificate c5 = adjugate_exact(cycle(5));
  CHECK(c5.verdict == Verdict::DiagNonzero);
  CHECK(c5.det == 2);
  CHECK(c5.witness_i == 0);
  for (int i = 0; i < 5; ++i) CHECK(c5.adj_at(i, i) == 1);   // each cofactor is det(P4) = 1

  // two disjoint K2: nonsingular, zero diagonal, but block-diagonal inverse
  BitGraph two_k2;
  two_k2.n = 4;
  two_k2.add_edge(0, 1);
  two_k2.add_edge(2, 3);
  Certificate c2k2 = adjugate_exact(two_k2);
  CHECK(c2k2.verdict == Verdict::OffdiagZero);
  CHECK(c2k2.witness_i == 0);
  CHECK(c2k2.witness_j == 2);

  Certificate cc4 = adjugate_exact(cycle(4));
  CHECK(cc4.verdict == Verdict::Singular);
  CHECK(cc4.det == 0);
  CHECK(cc4.adj.empty());
  CHECK(cc4.primes_used.size() == 2);

  BitGraph k1;
  k1.n = 1;
  CHECK(adjugate_exact(k1).verdict == Verdict::Singular);
}

TEST_CASE("fixture certifies nuciferous and matches its printed inverse") {
  BitGraph fx = fixture24();
  Certificate cert = is_nuciferous(fx);
  REQUIRE(cert.verdict == Verdict::Nuciferous);
  auto inv21 = fixture24_inv21();
  // A^-1 = M / 21 entry-for-entry, by cross-multiplication 21*adj = det*M
  for (int i = 0; i < 24; ++i)
    for (int j = 0; j < 24; ++j)
      CHECK(21 * cert.adj_at(i, j) == cert.det * inv21[size_t(i)][size_t(j)]);
}

TEST_CASE("exactness range is guarded") {
  BitGraph big = cycle(32);
  CHECK_THROWS_AS(adjugate_exact(big), ExactnessError);
  CHECK_THROWS_AS(is_nuciferous(big), ExactnessError);
  CHECK(det_mod(big, certification_primes()[0]) == 0);   // cycles of even order are singular
}

TEST_CASE("oracle equivalence on every graph with n <= 5") {
  for (int n = 1; n <= 5; ++n) {
    int bits = n * (n - 1) / 2;
    for (uint64_t mask = 0; mask < (uint64_t{1} << bits); ++mask) {
      BitGraph g;
      g.n = n;
      int t = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++t)
          if (mask >> t & 1) g.add_edge(i, j);
      check_against_oracle(g);
    }
  }
}

TEST_CASE("oracle equivalence on random graphs with 6 <= n <= 12") {
  std::mt19937_64 rng(42424242);
  std::uniform_int_distribution<int> size(6, 12);
  std::uniform_real_distribution<double> density(0.15, 0.85);
  for (int trial = 0; trial < 600; ++trial)
    check_against_oracle(oracles::random_graph(rng, size(rng), density(rng)));
}

TEST_CASE("vertex deletion nullity") {
  BitGraph k2 = graph_from_adjacency_text("0 1\n1 0\n");
  Certificate ck2 = is_nuciferous(k2);
  CHECK(vertex_deleted_nullity_is_one(k2, ck2, 0));
  CHECK(vertex_deleted_nullity_is_one(k2, ck2, 1));

  BitGraph fx = fixture24();
  Certificate cfx = is_nuciferous(fx);
  for (int v = 0; v < 24; ++v) CHECK(vertex_deleted_nullity_is_one(fx, cfx, v));

  Certificate c5 = adjugate_exact(cycle(5));
  CHECK_THROWS_AS(vertex_deleted_nullity_is_one(cycle(5), c5, 0), std::invalid_argument);
  CHECK_THROWS_AS(vertex_deleted_nullity_is_one(fx, cfx, 24), std::invalid_argument);
}

TEST_CASE("rank_mod agrees with rational rank on vertex-deleted fixtures") {
  // C5 minus a vertex is P4, full rank 4; C4 minus a vertex is P3, rank 2
  CHECK(rank_mod(cycle(5), 0, certification_primes()[0]) == 4);
  CHECK(rank_mod(cycle(4), 0, certification_primes()[0]) == 2);
  CHECK(rank_mod(cycle(4), -1, certification_primes()[0]) == 2);
  CHECK(rank_mod(cycle(5), -1, certification_primes()[1]) == 5);
}

TEST_CASE("deleted_vertex_det_mod matches the adjugate diagonal") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    BitGraph g = oracles::random_graph(rng, 8);
    Certificate cert = adjugate_exact(g);
    if (cert.verdict == Verdict::Singular) continue;
    for (int v = 0; v < g.n; ++v) {
      uint64_t p = certification_primes()[trial % 2];
      uint64_t res = deleted_vertex_det_mod(g, v, p);
      i128 diag = cert.adj_at(v, v);
      uint64_t expect = uint64_t(u128(diag < 0 ? -diag : diag) % p);
      if (diag < 0 && expect != 0) expect = p - expect;
      CHECK(res == expect);
    }
  }
}
