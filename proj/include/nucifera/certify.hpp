#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nucifera/cayley.hpp"
#include "nucifera/int128.hpp"

namespace nucifera {

enum class Verdict { Singular, DiagNonzero, OffdiagZero, Nuciferous };

std::string_view verdict_name(Verdict v);

/// Exact certificate: determinant and adjugate (the integer matrix
/// det(A) * A^-1), reconstructed by CRT from per-prime eliminations and
/// verified against A * adj = det * I in 128-bit arithmetic before being
/// returned. adj is row-major n*n and empty when Singular. The zero/nonzero
/// pattern of adj equals that of A^-1 whenever det != 0.
struct Certificate {
  int n = 0;
  Verdict verdict = Verdict::Singular;
  i128 det = 0;
  std::vector<i128> adj;
  int witness_i = -1;   // DiagNonzero: smallest offending diagonal index
  int witness_j = -1;   // OffdiagZero: with witness_i, lex smallest zero entry
  std::vector<uint64_t> primes_used;

  i128 adj_at(int i, int j) const { return adj[size_t(i) * n + j]; }
};

/// Requested order exceeds the range certified exact by the prime pool.
struct ExactnessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Internal invariant tripwire (adjugate identity, Hadamard bound, or a
/// disconnected Nuciferous graph). Expected unreachable; CLI exit code 3.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Fixed pool of primes just below 2^62. Any two of them certify exact CRT
/// reconstruction of every cofactor and determinant of a 0-1 matrix with
/// n <= certified_max_order(); since |det| <= 31^15.5 < p*q, at most one pool
/// prime can divide a nonzero determinant.
std::span<const uint64_t> certification_primes();
int certified_max_order();   // 31 for the built-in pool

/// floor(n^(n/2)), n <= 31: Hadamard bound on |det| of a 0-1 matrix of
/// order n; cofactors are bounded by hadamard_det_bound(n-1).
i128 hadamard_det_bound(int n);

/// det(A) mod p by in-place elimination over the prime field; p must be an
/// odd prime < 2^63. A nonzero residue proves det(A) != 0.
uint64_t det_mod(const BitGraph& a, uint64_t p);

/// Determinant of A with row/column v removed, mod p. A nonzero residue
/// proves the principal cofactor adj[v][v] != 0.
uint64_t deleted_vertex_det_mod(const BitGraph& a, int v, uint64_t p);

/// Rank of A with row/column deleted_vertex removed (pass -1 to keep all),
/// over GF(p). Rank over the rationals is >= this.
int rank_mod(const BitGraph& a, int deleted_vertex, uint64_t p);

/// Exact det + adjugate + verdict. Singular only when det = 0 is certified
/// (zero residue mod two pool primes); zero entries only from CRT-exact
/// values, never a single residue. Throws ExactnessError when
/// n > certified_max_order().
Certificate adjugate_exact(const BitGraph& a);

/// Thin wrapper over adjugate_exact; the Nuciferous verdict means det != 0,
/// adj diagonal all zero, adj off-diagonal all nonzero.
Certificate is_nuciferous(const BitGraph& a);

/// Requires cert.verdict == Nuciferous. True iff the nullity of A with
/// row/column v removed is exactly 1: at least 1 because adj[v][v] = 0, and
/// at most 1 when rank n-2 is exhibited modulo a pool prime.
bool vertex_deleted_nullity_is_one(const BitGraph& a, const Certificate& cert, int v);

}  // namespace nucifera
