#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nucifera/group.hpp"

namespace nucifera {

/// Inverse-closed, identity-free subset of group elements as a bitmask over
/// element indices. Bit 0 (the identity) is never set.
struct ConnectionSet {
  uint64_t mask = 0;
  int group_order = 0;

  int degree() const { return std::popcount(mask); }
  std::vector<int> elements() const;
};

bool is_valid_connection_set(const GroupTable& g, const ConnectionSet& s);
ConnectionSet connection_set_from_elements(const GroupTable& g, const std::vector<int>& elems);

/// Simple graph on n <= 64 vertices; rows[i] is the neighbor bitmask of
/// vertex i. Invariants: symmetric, zero diagonal, rows i >= n all zero.
struct BitGraph {
  int n = 0;
  std::array<uint64_t, 64> rows{};

  bool edge(int i, int j) const { return rows[i] >> j & 1; }
  void add_edge(int i, int j) {
    rows[i] |= uint64_t{1} << j;
    rows[j] |= uint64_t{1} << i;
  }
  int degree(int v) const { return std::popcount(rows[v]); }
  int edge_count() const;
  std::optional<int> regular_degree() const;   // |S| for Cayley graphs

  bool operator==(const BitGraph&) const = default;
};

/// Vertex set = group elements; edge {u,v} iff v*u^-1 in S. Symmetry follows
/// from S = S^-1. Throws std::invalid_argument on an invalid connection set.
BitGraph cayley_graph(const GroupTable& g, const ConnectionSet& s);

/// True iff the closure of {identity} under right-multiplication by S is the
/// whole group; equals connectivity of cayley_graph(g, s).
bool generates(const GroupTable& g, const ConnectionSet& s);

bool is_connected(const BitGraph& g);

/// Rows of space-separated 0/1 entries; must be symmetric with zero diagonal.
BitGraph graph_from_adjacency_text(std::string_view text);
std::string graph_to_adjacency_text(const BitGraph& g);

/// Standard graph6 encoding (bit-exact), including the 4-byte order form
/// needed for n in 63..64.
std::string graph_to_graph6(const BitGraph& g);
BitGraph graph_from_graph6(std::string_view s);

/// Reads a graph file; format "graph6"/"adj" forces the parser, "" sniffs
/// (graph6 bytes start at '?' = 63, adjacency text starts with 0/1).
BitGraph load_graph_file(const std::string& path, std::string_view format = {});

}  // namespace nucifera
