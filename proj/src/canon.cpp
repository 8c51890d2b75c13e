#include "nucifera/canon.hpp"

#include <algorithm>

#include "nucifera/certify.hpp"

namespace nucifera {

namespace {

// Ordered partition of the vertex set as a list of cells; cell order and
// splitting are driven only by relabeling-invariant data (sizes, positions,
// neighbor-count signatures), which makes the whole search equivariant.
using Cells = std::vector<std::vector<int>>;

struct Canonizer {
  const BitGraph& g;
  uint64_t node_limit;
  uint64_t nodes = 0;
  int n;
  int cert_words;
  std::vector<uint64_t> best;
  std::array<uint8_t, 64> best_perm{};
  bool have_best = false;

  Canonizer(const BitGraph& graph, uint64_t limit)
      : g(graph), node_limit(limit), n(graph.n), cert_words((n * (n - 1) / 2 + 63) / 64) {}

  // degree-in-class refinement until equitable
  void refine(Cells& cells) const {
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<uint64_t> masks(cells.size(), 0);
      for (size_t c = 0; c < cells.size(); ++c)
        for (int v : cells[c]) masks[c] |= uint64_t{1} << v;
      for (size_t c = 0; c < cells.size(); ++c) {
        if (cells[c].size() == 1) continue;
        // signature of v: neighbor count into every cell, in cell order
        std::vector<std::pair<std::vector<int>, int>> sig;
        sig.reserve(cells[c].size());
        for (int v : cells[c]) {
          std::vector<int> counts(cells.size());
          for (size_t w = 0; w < cells.size(); ++w)
            counts[w] = std::popcount(g.rows[v] & masks[w]);
          sig.emplace_back(std::move(counts), v);
        }
        std::sort(sig.begin(), sig.end());
        if (sig.front().first == sig.back().first) continue;
        Cells split;
        split.push_back({sig[0].second});
        for (size_t i = 1; i < sig.size(); ++i) {
          if (sig[i].first != sig[i - 1].first) split.push_back({});
          split.back().push_back(sig[i].second);
        }
        cells[c] = std::move(split[0]);
        cells.insert(cells.begin() + long(c) + 1, split.begin() + 1, split.end());
        changed = true;
        break;
      }
    }
  }

  void leaf(const Cells& cells) {
    std::array<uint8_t, 64> label{};
    for (size_t k = 0; k < cells.size(); ++k) label[cells[k][0]] = uint8_t(k);
    // relabeled adjacency rows, then the packed upper triangle
    std::array<uint64_t, 64> rows{};
    for (int old = 0; old < n; ++old) {
      uint64_t bits = 0;
      for (uint64_t m = g.rows[old]; m; m &= m - 1) bits |= uint64_t{1} << label[std::countr_zero(m)];
      rows[label[old]] = bits;
    }
    std::vector<uint64_t> cand(cert_words, 0);
    int t = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (rows[i] >> j & 1) cand[t >> 6] |= uint64_t{1} << (63 - (t & 63));
        ++t;
      }
    if (!have_best || cand < best) {
      best = std::move(cand);
      best_perm = label;
      have_best = true;
    }
  }

  void descend(Cells& cells) {
    if (++nodes > node_limit)
      throw CanonLimitError("canonical labeling node budget exhausted (" +
                            std::to_string(node_limit) + " nodes)");
    refine(cells);
    // smallest non-singleton cell, earliest position on ties
    size_t target = cells.size();
    size_t target_size = size_t(n) + 1;
    for (size_t c = 0; c < cells.size(); ++c)
      if (cells[c].size() > 1 && cells[c].size() < target_size) {
        target = c;
        target_size = cells[c].size();
      }
    if (target == cells.size()) {
      leaf(cells);
      return;
    }
    std::vector<int> members = cells[target];
    for (int v : members) {
      Cells child;
      child.reserve(cells.size() + 1);
      for (size_t c = 0; c < cells.size(); ++c) {
        if (c == target) {
          child.push_back({v});
          std::vector<int> rest;
          for (int u : members)
            if (u != v) rest.push_back(u);
          child.push_back(std::move(rest));
        } else {
          child.push_back(cells[c]);
        }
      }
      descend(child);
    }
  }
};

}  // namespace

std::string CanonicalForm::hex() const {
  static const char* digits = "0123456789abcdef";
  int bits = n * (n - 1) / 2;
  int nibbles = (bits + 3) / 4;
  std::string out;
  out.reserve(size_t(nibbles));
  for (int k = 0; k < nibbles; ++k) {
    int word = k / 16;
    int shift = 60 - 4 * (k % 16);
    out.push_back(digits[cert[word] >> shift & 0xf]);
  }
  return out;
}

CanonicalForm canonical_form(const BitGraph& g, uint64_t node_limit) {
  if (g.n < 1 || g.n > kMaxGroupOrder)
    throw std::invalid_argument("canonical_form: graph order out of range 1..64");
  Canonizer cz(g, node_limit);
  Cells cells(1);
  cells[0].resize(size_t(g.n));
  for (int v = 0; v < g.n; ++v) cells[0][v] = v;
  cz.descend(cells);
  CanonicalForm out;
  out.n = g.n;
  out.cert = std::move(cz.best);
  out.perm = cz.best_perm;
  return out;
}

IsoWitness is_isomorphic(const BitGraph& g, const BitGraph& h) {
  IsoWitness w;
  if (g.n != h.n) return w;
  CanonicalForm cg = canonical_form(g);
  CanonicalForm ch = canonical_form(h);
  if (!(cg == ch)) return w;
  // map through the canonical labels: g -> canon -> h
  std::vector<int> inv_h(size_t(h.n));
  for (int v = 0; v < h.n; ++v) inv_h[ch.perm[v]] = v;
  w.mapping.resize(size_t(g.n));
  for (int v = 0; v < g.n; ++v) w.mapping[v] = inv_h[cg.perm[v]];
  for (int u = 0; u < g.n; ++u)
    for (int v = 0; v < g.n; ++v)
      if (g.edge(u, v) != h.edge(w.mapping[u], w.mapping[v]))
        throw InternalError("canonical forms matched but the composed mapping is not an isomorphism");
  w.isomorphic = true;
  return w;
}

}  // namespace nucifera
