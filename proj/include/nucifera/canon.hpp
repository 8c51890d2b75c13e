#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "nucifera/cayley.hpp"

namespace nucifera {

/// Canonical labeling result. cert packs the upper triangle of the
/// relabeled adjacency matrix row-major, MSB first, so lexicographic word
/// comparison equals bitstring comparison; isomorphic graphs get identical
/// certs, non-isomorphic graphs distinct ones. perm[old] = canonical label.
struct CanonicalForm {
  int n = 0;
  std::vector<uint64_t> cert;
  std::array<uint8_t, 64> perm{};

  std::string hex() const;
  bool operator==(const CanonicalForm& o) const { return n == o.n && cert == o.cert; }
};

/// Search-tree safety valve tripped (node budget exhausted).
struct CanonLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Equitable-partition refinement (degree-in-class counts) with backtracking
/// individualization on the smallest non-singleton class; the certificate is
/// the lexicographically least adjacency bitstring over all leaves.
CanonicalForm canonical_form(const BitGraph& g, uint64_t node_limit = 50'000'000);

struct IsoWitness {
  bool isomorphic = false;
  std::vector<int> mapping;   // g vertex -> h vertex when isomorphic
};

/// Canonical-form comparison; on a match the two canonical permutations are
/// composed into an explicit mapping and verified edge-by-edge before being
/// returned.
IsoWitness is_isomorphic(const BitGraph& g, const BitGraph& h);

}  // namespace nucifera
