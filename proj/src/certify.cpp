#include "nucifera/certify.hpp"

#include <algorithm>
#include <array>
#include <optional>

namespace nucifera {

namespace {

// Largest primes below 2^62. Any pair certifies CRT exactness up to n = 31:
// 2 * floor(30^15) = 2.87e22 < p*q ~ 2.1e37, and the symmetric lift fits a
// signed 128-bit integer (p*q < 2^127).
constexpr std::array<uint64_t, 3> kPrimes = {
    4611686018427387847ull,
    4611686018427387817ull,
    4611686018427387787ull,
};

constexpr int kCertifiedMaxOrder = 31;

// floor(n^(n/2)) for n = 0..31
constexpr const char* kHadamardBound[32] = {
    "1", "1", "2", "5", "16", "55", "216", "907",
    "4096", "19683", "100000", "534145", "2985984", "17403307", "105413504", "661735513",
    "4294967296", "28761784747", "198359290368", "1406563064942", "10240000000000",
    "76436817165460", "584318301411328", "4569515072723572", "36520347436056576",
    "298023223876953125", "2481152873203736576", "21057694276511798810",
    "182059119829942534144", "1602400122678855493154", "14348907000000000000000",
    "130649049482662658821371",
};

// Montgomery arithmetic modulo an odd prime p < 2^63, R = 2^64.
struct MontField {
  uint64_t p;
  uint64_t npinv;   // -p^-1 mod 2^64
  uint64_t one;     // R mod p
  uint64_t r2;      // R^2 mod p

  explicit MontField(uint64_t prime) : p(prime) {
    uint64_t x = p;   // inverse of p mod 2^64 by Newton iteration (p odd)
    for (int i = 0; i < 5; ++i) x *= 2 - p * x;
    npinv = ~x + 1;
    one = uint64_t((u128{1} << 64) % p);
    r2 = uint64_t(u128(one) * one % p);
  }

  uint64_t redc(u128 t) const {
    uint64_t m = uint64_t(t) * npinv;
    uint64_t r = uint64_t((t + u128(m) * p) >> 64);
    return r >= p ? r - p : r;
  }
  uint64_t mul(uint64_t a, uint64_t b) const { return redc(u128(a) * b); }
  uint64_t add(uint64_t a, uint64_t b) const {
    uint64_t s = a + b;
    return s >= p ? s - p : s;
  }
  uint64_t sub(uint64_t a, uint64_t b) const { return a >= b ? a - b : a + (p - b); }
  uint64_t neg(uint64_t a) const { return a == 0 ? 0 : p - a; }
  uint64_t from_mont(uint64_t a) const { return redc(u128(a)); }
  uint64_t pow(uint64_t base, uint64_t e) const {
    uint64_t acc = one;
    while (e) {
      if (e & 1) acc = mul(acc, base);
      base = mul(base, base);
      e >>= 1;
    }
    return acc;
  }
  uint64_t inv(uint64_t a) const { return pow(a, p - 2); }
};

void check_prime_arg(uint64_t p) {
  if (p < 3 || p % 2 == 0 || p >= (uint64_t{1} << 63))
    throw std::invalid_argument("modulus must be an odd prime below 2^63");
}

// Scratch matrix in Montgomery form, loaded from graph rows with one
// vertex optionally deleted.
int load_matrix(const BitGraph& g, int skip, const MontField& F, uint64_t* w, int stride) {
  int m = 0;
  for (int i = 0; i < g.n; ++i) {
    if (i == skip) continue;
    uint64_t* row = w + size_t(m) * stride;
    int c = 0;
    for (int j = 0; j < g.n; ++j) {
      if (j == skip) continue;
      row[c++] = g.edge(i, j) ? F.one : 0;
    }
    ++m;
  }
  return m;
}

uint64_t det_mod_impl(const BitGraph& g, const MontField& F, int skip) {
  int n = g.n - (skip >= 0 ? 1 : 0);
  if (n == 0) return F.from_mont(F.one);   // empty determinant is 1
  std::vector<uint64_t> w(size_t(n) * n);
  load_matrix(g, skip, F, w.data(), n);
  uint64_t det = F.one;
  bool negate = false;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (w[size_t(r) * n + col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return 0;
    if (piv != col) {
      for (int j = col; j < n; ++j) std::swap(w[size_t(piv) * n + j], w[size_t(col) * n + j]);
      negate = !negate;
    }
    uint64_t pivot = w[size_t(col) * n + col];
    det = F.mul(det, pivot);
    uint64_t pinv = F.inv(pivot);
    for (int r = col + 1; r < n; ++r) {
      uint64_t head = w[size_t(r) * n + col];
      if (head == 0) continue;
      uint64_t f = F.mul(head, pinv);
      uint64_t* src = w.data() + size_t(col) * n;
      uint64_t* dst = w.data() + size_t(r) * n;
      for (int j = col; j < n; ++j) dst[j] = F.sub(dst[j], F.mul(f, src[j]));
    }
  }
  uint64_t res = F.from_mont(det);
  return negate ? F.neg(res) : res;
}

struct ModAdjugate {
  uint64_t det = 0;                // plain residue, sign included
  std::vector<uint64_t> adj;       // plain residues, row-major
};

// Gauss-Jordan on [A | I]; returns nullopt iff det(A) = 0 mod p.
std::optional<ModAdjugate> adjugate_mod(const BitGraph& g, const MontField& F) {
  int n = g.n;
  int stride = 2 * n;
  std::vector<uint64_t> w(size_t(n) * stride, 0);
  load_matrix(g, -1, F, w.data(), stride);
  for (int i = 0; i < n; ++i) w[size_t(i) * stride + n + i] = F.one;
  uint64_t det = F.one;
  bool negate = false;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (w[size_t(r) * stride + col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return std::nullopt;
    if (piv != col) {
      for (int j = col; j < stride; ++j)
        std::swap(w[size_t(piv) * stride + j], w[size_t(col) * stride + j]);
      negate = !negate;
    }
    uint64_t pivot = w[size_t(col) * stride + col];
    det = F.mul(det, pivot);
    uint64_t pinv = F.inv(pivot);
    uint64_t* prow = w.data() + size_t(col) * stride;
    for (int j = col; j < stride; ++j) prow[j] = F.mul(prow[j], pinv);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      uint64_t f = w[size_t(r) * stride + col];
      if (f == 0) continue;
      uint64_t* dst = w.data() + size_t(r) * stride;
      for (int j = col; j < stride; ++j) dst[j] = F.sub(dst[j], F.mul(f, prow[j]));
    }
  }
  if (negate) det = F.neg(det);
  ModAdjugate out;
  out.adj.resize(size_t(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.adj[size_t(i) * n + j] = F.from_mont(F.mul(det, w[size_t(i) * stride + n + j]));
  out.det = F.from_mont(det);
  return out;
}

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) { return uint64_t(u128(a) * b % m); }

// Garner combination of residues mod two distinct primes, lifted to the
// symmetric range (-pq/2, pq/2].
struct CrtPair {
  uint64_t p, q;
  uint64_t p_inv_q;
  i128 pq, half;

  CrtPair(uint64_t p_, uint64_t q_) : p(p_), q(q_) {
    MontField Fq(q);
    p_inv_q = Fq.from_mont(Fq.inv(Fq.mul(Fq.r2, p % q)));
    pq = i128(u128(p) * q);
    half = pq / 2;
  }
  i128 lift(uint64_t a, uint64_t b) const {
    uint64_t am = a % q;
    uint64_t diff = b >= am ? b - am : b + (q - am);
    uint64_t t = mulmod_u64(diff, p_inv_q, q);
    i128 x = i128(u128(t) * p + a);
    return x > half ? x - pq : x;
  }
};

void check_graph_arg(const BitGraph& g) {
  if (g.n < 1 || g.n > kMaxGroupOrder) throw std::invalid_argument("graph order out of range 1..64");
}

Certificate certify_impl(const BitGraph& g) {
  check_graph_arg(g);
  int n = g.n;
  if (n > kCertifiedMaxOrder)
    throw ExactnessError("order " + std::to_string(n) + " exceeds the certified range n <= " +
                         std::to_string(kCertifiedMaxOrder) + " of the two-prime configuration");
  Certificate cert;
  cert.n = n;

  // Scan the pool: two zero residues certify det = 0 (|det| < p*q); otherwise
  // the first two nonzero-residue primes form the CRT pair. Since at most one
  // pool prime can divide a nonzero det, three primes always suffice.
  std::vector<uint64_t> zero_primes, crt_primes;
  for (uint64_t p : kPrimes) {
    uint64_t r = det_mod_impl(g, MontField(p), -1);
    if (r == 0) {
      zero_primes.push_back(p);
      if (zero_primes.size() == 2) {
        cert.verdict = Verdict::Singular;
        cert.det = 0;
        cert.primes_used = zero_primes;
        return cert;
      }
    } else {
      crt_primes.push_back(p);
      if (crt_primes.size() == 2) break;
    }
  }
  if (crt_primes.size() < 2)
    throw InternalError("prime pool exhausted without a certified det decision");

  MontField F1(crt_primes[0]), F2(crt_primes[1]);
  auto a1 = adjugate_mod(g, F1);
  auto a2 = adjugate_mod(g, F2);
  if (!a1 || !a2) throw InternalError("nonzero det residue contradicted by elimination");

  CrtPair crt(crt_primes[0], crt_primes[1]);
  cert.det = crt.lift(a1->det, a2->det);
  cert.primes_used = crt_primes;
  i128 det_bound = hadamard_det_bound(n);
  i128 adj_bound = hadamard_det_bound(n - 1);
  if (cert.det == 0 || abs_u128(cert.det) > abs_u128(det_bound))
    throw InternalError("determinant violates the Hadamard bound");
  cert.adj.resize(size_t(n) * n);
  for (size_t k = 0; k < cert.adj.size(); ++k) {
    cert.adj[k] = crt.lift(a1->adj[k], a2->adj[k]);
    if (abs_u128(cert.adj[k]) > abs_u128(adj_bound))
      throw InternalError("adjugate entry violates the Hadamard bound");
  }

  // adjugate identity A * adj = det * I, exact in 128-bit arithmetic
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      i128 sum = 0;
      for (uint64_t m = g.rows[i]; m; m &= m - 1)
        sum += cert.adj_at(std::countr_zero(m), j);
      if (sum != (i == j ? cert.det : i128{0}))
        throw InternalError("adjugate identity A*adj = det*I failed");
    }
  }

  cert.verdict = Verdict::Nuciferous;
  for (int i = 0; i < n; ++i) {
    if (cert.adj_at(i, i) != 0) {
      cert.verdict = Verdict::DiagNonzero;
      cert.witness_i = i;
      break;
    }
  }
  if (cert.verdict == Verdict::Nuciferous) {
    for (int i = 0; i < n && cert.verdict == Verdict::Nuciferous; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && cert.adj_at(i, j) == 0) {
          cert.verdict = Verdict::OffdiagZero;
          cert.witness_i = i;
          cert.witness_j = j;
          break;
        }
  }
  if (cert.verdict == Verdict::Nuciferous && !is_connected(g))
    throw InternalError("Nuciferous verdict on a disconnected graph");
  return cert;
}

}  // namespace

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Singular: return "Singular";
    case Verdict::DiagNonzero: return "DiagNonzero";
    case Verdict::OffdiagZero: return "OffdiagZero";
    case Verdict::Nuciferous: return "Nuciferous";
  }
  return "?";
}

std::span<const uint64_t> certification_primes() { return kPrimes; }

int certified_max_order() { return kCertifiedMaxOrder; }

i128 hadamard_det_bound(int n) {
  if (n < 0 || n > kCertifiedMaxOrder) throw std::invalid_argument("hadamard_det_bound: n out of range");
  return parse_i128(kHadamardBound[n]);
}

uint64_t det_mod(const BitGraph& a, uint64_t p) {
  check_graph_arg(a);
  check_prime_arg(p);
  return det_mod_impl(a, MontField(p), -1);
}

uint64_t deleted_vertex_det_mod(const BitGraph& a, int v, uint64_t p) {
  check_graph_arg(a);
  check_prime_arg(p);
  if (v < 0 || v >= a.n) throw std::invalid_argument("vertex out of range");
  return det_mod_impl(a, MontField(p), v);
}

int rank_mod(const BitGraph& a, int deleted_vertex, uint64_t p) {
  check_graph_arg(a);
  check_prime_arg(p);
  if (deleted_vertex < -1 || deleted_vertex >= a.n) throw std::invalid_argument("vertex out of range");
  MontField F(p);
  int n = a.n - (deleted_vertex >= 0 ? 1 : 0);
  if (n == 0) return 0;
  std::vector<uint64_t> w(size_t(n) * n);
  load_matrix(a, deleted_vertex, F, w.data(), n);
  int rank = 0;
  for (int col = 0; col < n && rank < n; ++col) {
    int piv = -1;
    for (int r = rank; r < n; ++r)
      if (w[size_t(r) * n + col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != rank)
      for (int j = col; j < n; ++j) std::swap(w[size_t(piv) * n + j], w[size_t(rank) * n + j]);
    uint64_t pinv = F.inv(w[size_t(rank) * n + col]);
    for (int r = rank + 1; r < n; ++r) {
      uint64_t head = w[size_t(r) * n + col];
      if (head == 0) continue;
      uint64_t f = F.mul(head, pinv);
      uint64_t* src = w.data() + size_t(rank) * n;
      uint64_t* dst = w.data() + size_t(r) * n;
      for (int j = col; j < n; ++j) dst[j] = F.sub(dst[j], F.mul(f, src[j]));
    }
    ++rank;
  }
  return rank;
}

Certificate adjugate_exact(const BitGraph& a) { return certify_impl(a); }

Certificate is_nuciferous(const BitGraph& a) { return certify_impl(a); }

bool vertex_deleted_nullity_is_one(const BitGraph& a, const Certificate& cert, int v) {
  if (cert.verdict != Verdict::Nuciferous)
    throw std::invalid_argument("vertex_deleted_nullity_is_one requires a Nuciferous certificate");
  if (v < 0 || v >= a.n) throw std::invalid_argument("vertex out of range");
  if (cert.n != a.n) throw std::invalid_argument("certificate does not match the graph");
  // nullity >= 1: the principal cofactor adj[v][v] is 0 by the verdict.
  // nullity <= 1 once rank n-2 is exhibited modulo any prime (rank over Q
  // can only be larger). With det != 0, interlacing forces nullity <= 1, so
  // failure of every pool prime would be an exactness anomaly; report false.
  for (uint64_t p : kPrimes)
    if (rank_mod(a, v, p) == a.n - 2) return true;
  return false;
}

}  // namespace nucifera
