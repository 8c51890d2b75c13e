#include "oracles.hpp"

#include <algorithm>
#include <numeric>

namespace oracles {

using nucifera::BitGraph;
using nucifera::GroupTable;

RationalInverse rational_inverse(const BitGraph& g) {
  int n = g.n;
  std::vector<rational> w(size_t(n) * 2 * n, 0);
  auto at = [&](int i, int j) -> rational& { return w[size_t(i) * 2 * n + j]; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) at(i, j) = g.edge(i, j) ? 1 : 0;
    at(i, n + i) = 1;
  }
  RationalInverse out;
  rational det = 1;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (at(r, col) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) {
      out.singular = true;
      out.det = 0;
      return out;
    }
    if (piv != col) {
      for (int j = 0; j < 2 * n; ++j) std::swap(at(piv, j), at(col, j));
      det = -det;
    }
    rational pv = at(col, col);
    det *= pv;
    for (int j = 0; j < 2 * n; ++j) at(col, j) /= pv;
    for (int r = 0; r < n; ++r) {
      if (r == col || at(r, col) == 0) continue;
      rational f = at(r, col);
      for (int j = 0; j < 2 * n; ++j) at(r, j) -= f * at(col, j);
    }
  }
  out.singular = false;
  out.det = det;
  out.inv.resize(size_t(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.inv[size_t(i) * n + j] = at(i, n + j);
  return out;
}

bool brute_isomorphic(const BitGraph& a, const BitGraph& b) {
  if (a.n != b.n) return false;
  int n = a.n;
  if (a.edge_count() != b.edge_count()) return false;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = i + 1; j < n && ok; ++j)
        if (a.edge(i, j) != b.edge(perm[i], perm[j])) ok = false;
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

std::vector<uint64_t> packed_upper_triangle(const BitGraph& g) {
  int n = g.n;
  std::vector<uint64_t> bits((size_t(n) * (n - 1) / 2 + 63) / 64, 0);
  int t = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (g.edge(i, j)) bits[t >> 6] |= uint64_t{1} << (63 - (t & 63));
      ++t;
    }
  return bits;
}

std::vector<uint64_t> brute_canonical_bits(const BitGraph& g) {
  int n = g.n;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<uint64_t> best;
  bool have = false;
  do {
    BitGraph h = permuted(g, perm);
    auto bits = packed_upper_triangle(h);
    if (!have || bits < best) {
      best = std::move(bits);
      have = true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

BitGraph permuted(const BitGraph& g, const std::vector<int>& perm) {
  BitGraph h;
  h.n = g.n;
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j)
      if (g.edge(i, j)) h.add_edge(perm[i], perm[j]);
  return h;
}

BitGraph random_graph(std::mt19937_64& rng, int n, double edge_prob) {
  std::bernoulli_distribution coin(edge_prob);
  BitGraph g;
  g.n = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) g.add_edge(i, j);
  return g;
}

std::vector<int> random_permutation(std::mt19937_64& rng, int n) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

InvolutionScan scan_involutions(const GroupTable& g) {
  InvolutionScan out;
  for (int x = 1; x < g.order; ++x) {
    if (g.at(x, x) == 0) {
      out.involutions.push_back(x);
    } else {
      int y = -1;
      for (int cand = 0; cand < g.order; ++cand)
        if (g.at(x, cand) == 0) {
          y = cand;
          break;
        }
      if (x < y) out.pairs.emplace_back(x, y);
    }
  }
  return out;
}

std::string check_group_axioms(const GroupTable& g) {
  int n = g.order;
  if (n < 1) return "empty table";
  for (int x = 0; x < n; ++x)
    if (g.at(0, x) != x || g.at(x, 0) != x) return "identity failure at " + std::to_string(x);
  for (int i = 0; i < n; ++i) {
    uint64_t row = 0, col = 0;
    for (int j = 0; j < n; ++j) {
      row |= uint64_t{1} << g.at(i, j);
      col |= uint64_t{1} << g.at(j, i);
    }
    uint64_t full = n == 64 ? ~uint64_t{0} : (uint64_t{1} << n) - 1;
    if (row != full) return "row " + std::to_string(i) + " is not a permutation";
    if (col != full) return "column " + std::to_string(i) + " is not a permutation";
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (g.at(g.at(a, b), c) != g.at(a, g.at(b, c)))
          return "associativity failure at (" + std::to_string(a) + "," + std::to_string(b) + "," +
                 std::to_string(c) + ")";
  for (int x = 0; x < n; ++x)
    if (g.at(x, g.inverse(x)) != 0) return "inverse failure at " + std::to_string(x);
  return {};
}

}  // namespace oracles
