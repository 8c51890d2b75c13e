#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nucifera {

// One machine word must hold a vertex/element set.
inline constexpr int kMaxGroupOrder = 64;

/// Finite group of order <= 64 as a validated multiplication table.
/// Element 0 is always the identity; builders and validate_table renumber
/// imported tables to enforce this.
struct GroupTable {
  int order = 0;
  std::string name;
  std::vector<uint8_t> mul;   // row-major: mul[a*order + b] = index of a*b
  std::vector<uint8_t> inv;   // mul[x][inv[x]] = 0

  int at(int a, int b) const { return mul[size_t(a) * order + b]; }
  int inverse(int x) const { return inv[x]; }
  int element_order(int x) const;
};

/// Elements 1..order-1 split into self-inverse elements and {x, x^-1} pairs
/// with x != x^-1; the basis for enumerating inverse-closed subsets
/// (subset space has size 2^(involutions + pairs)).
struct InvolutionPairPartition {
  std::vector<int> involutions;
  std::vector<std::pair<int, int>> pairs;   // first < second

  int subset_bits() const { return int(involutions.size() + pairs.size()); }
};

/// Outcome of checking the group axioms on a raw table. On failure, axiom
/// names the first violated axiom and witness holds the offending indices
/// (unused slots are -1).
struct TableDiagnosis {
  bool ok = false;
  std::string axiom;
  std::array<int, 3> witness{-1, -1, -1};
  std::string message;
};

GroupTable build_cyclic(int n);        // 1 <= n <= 64
GroupTable build_dihedral(int n);      // order n (not 2n): n even, 4 <= n <= 64
GroupTable build_symmetric(int k);     // k! <= 64, i.e. k <= 4
GroupTable build_alternating(int k);   // k!/2 <= 64, i.e. k <= 5
GroupTable direct_product(const GroupTable& g, const GroupTable& h);

/// Mini-language: expr := atom ("x" atom)*, atom := C(n) | D(n) | S(k) | A(k).
/// Whitespace-insensitive; products associate left. Throws
/// std::invalid_argument with the offending position on syntax errors.
GroupTable parse_group_spec(std::string_view text);

/// Non-throwing axiom check: identity existence, Latin square, inverses,
/// associativity (exhaustive over all triples).
TableDiagnosis diagnose_table(const std::vector<std::vector<int>>& raw);

/// Checked construction from a raw table; renumbers so the identity is 0.
GroupTable validate_table(const std::vector<std::vector<int>>& raw, std::string name = {});

/// Text format: first line n, then n lines of n space-separated indices.
GroupTable load_group_table(std::istream& in, std::string name = {});
std::string group_table_to_text(const GroupTable& g);

InvolutionPairPartition involution_pair_partition(const GroupTable& g);

/// Sorted element-order multiset; equal for isomorphic groups (necessary
/// condition only).
std::vector<int> element_order_multiset(const GroupTable& g);

}  // namespace nucifera
