#include "nucifera/group.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace nucifera {

namespace {

std::vector<uint8_t> flat_table(int n) { return std::vector<uint8_t>(size_t(n) * n); }

void fill_inverses(GroupTable& g) {
  g.inv.assign(g.order, 0);
  for (int x = 0; x < g.order; ++x) {
    for (int y = 0; y < g.order; ++y) {
      if (g.at(x, y) == 0) {
        g.inv[x] = uint8_t(y);
        break;
      }
    }
  }
}

void check_order(int n, const char* what) {
  if (n < 1 || n > kMaxGroupOrder)
    throw std::invalid_argument(std::string(what) + ": order " + std::to_string(n) +
                                " out of range 1.." + std::to_string(kMaxGroupOrder));
}

// permutations of 0..k-1 in lexicographic order; identity comes first
std::vector<std::vector<int>> all_permutations(int k, bool even_only) {
  std::vector<int> p(k);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    if (even_only) {
      std::vector<bool> seen(k, false);
      int parity = 0;
      for (int i = 0; i < k; ++i) {
        if (seen[i]) continue;
        int j = i, len = 0;
        while (!seen[j]) {
          seen[j] = true;
          j = p[j];
          ++len;
        }
        parity ^= (len - 1) & 1;
      }
      if (parity != 0) continue;
    }
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

GroupTable from_permutations(std::vector<std::vector<int>> perms, std::string name) {
  int order = int(perms.size());
  check_order(order, name.c_str());
  GroupTable g;
  g.order = order;
  g.name = std::move(name);
  g.mul = flat_table(order);
  std::vector<std::pair<std::vector<int>, int>> idx;
  idx.reserve(perms.size());
  for (int i = 0; i < order; ++i) idx.emplace_back(perms[i], i);
  std::sort(idx.begin(), idx.end());
  auto lookup = [&](const std::vector<int>& q) {
    auto it = std::lower_bound(idx.begin(), idx.end(), q,
                               [](const auto& a, const std::vector<int>& b) { return a.first < b; });
    return it->second;
  };
  int k = int(perms[0].size());
  std::vector<int> prod(k);
  for (int a = 0; a < order; ++a) {
    for (int b = 0; b < order; ++b) {
      for (int i = 0; i < k; ++i) prod[i] = perms[a][perms[b][i]];   // (p*q)(i) = p(q(i))
      g.mul[size_t(a) * order + b] = uint8_t(lookup(prod));
    }
  }
  fill_inverses(g);
  return g;
}

}  // namespace

int GroupTable::element_order(int x) const {
  int e = x, k = 1;
  while (e != 0) {
    e = at(e, x);
    ++k;
  }
  return k;
}

GroupTable build_cyclic(int n) {
  check_order(n, "cyclic group");
  GroupTable g;
  g.order = n;
  g.name = "C(" + std::to_string(n) + ")";
  g.mul = flat_table(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g.mul[size_t(a) * n + b] = uint8_t((a + b) % n);
  fill_inverses(g);
  return g;
}

GroupTable build_dihedral(int n) {
  // D(n) has order n (not 2n): m = n/2 rotations r^k at indices 0..m-1,
  // reflections r^k f at indices m..n-1. f r f = r^-1.
  if (n % 2 != 0) throw std::invalid_argument("dihedral order must be even, got " + std::to_string(n));
  if (n < 4 || n > kMaxGroupOrder)
    throw std::invalid_argument("dihedral order " + std::to_string(n) + " out of range 4.." +
                                std::to_string(kMaxGroupOrder));
  int m = n / 2;
  auto idx = [m](int k, bool refl) { return ((k % m) + m) % m + (refl ? m : 0); };
  GroupTable g;
  g.order = n;
  g.name = "D(" + std::to_string(n) + ")";
  g.mul = flat_table(n);
  for (int a = 0; a < n; ++a) {
    int ka = a % m;
    bool ra = a >= m;
    for (int b = 0; b < n; ++b) {
      int kb = b % m;
      bool rb = b >= m;
      g.mul[size_t(a) * n + b] = uint8_t(ra ? idx(ka - kb, !rb) : idx(ka + kb, rb));
    }
  }
  fill_inverses(g);
  return g;
}

GroupTable build_symmetric(int k) {
  if (k < 1) throw std::invalid_argument("symmetric group needs k >= 1");
  int order = 1;
  for (int i = 2; i <= k; ++i) order *= i;
  if (order > kMaxGroupOrder)
    throw std::invalid_argument("symmetric group order " + std::to_string(order) + " exceeds cap " +
                                std::to_string(kMaxGroupOrder));
  return from_permutations(all_permutations(k, false), "S(" + std::to_string(k) + ")");
}

GroupTable build_alternating(int k) {
  if (k < 1) throw std::invalid_argument("alternating group needs k >= 1");
  long order = 1;
  for (int i = 2; i <= k; ++i) order *= i;
  if (k >= 2) order /= 2;
  if (order > kMaxGroupOrder)
    throw std::invalid_argument("alternating group order " + std::to_string(order) +
                                " exceeds cap " + std::to_string(kMaxGroupOrder));
  return from_permutations(all_permutations(k, true), "A(" + std::to_string(k) + ")");
}

GroupTable direct_product(const GroupTable& g, const GroupTable& h) {
  long order = long(g.order) * h.order;
  if (order < 1 || order > kMaxGroupOrder)
    throw std::invalid_argument("direct product order " + std::to_string(order) + " exceeds cap " +
                                std::to_string(kMaxGroupOrder));
  GroupTable p;
  p.order = int(order);
  p.name = g.name + "x" + h.name;
  p.mul = flat_table(p.order);
  // element (x, y) -> x*|h| + y, so (0, 0) -> 0
  for (int x1 = 0; x1 < g.order; ++x1)
    for (int y1 = 0; y1 < h.order; ++y1)
      for (int x2 = 0; x2 < g.order; ++x2)
        for (int y2 = 0; y2 < h.order; ++y2)
          p.mul[size_t(x1 * h.order + y1) * p.order + (x2 * h.order + y2)] =
              uint8_t(g.at(x1, x2) * h.order + h.at(y1, y2));
  fill_inverses(p);
  return p;
}

namespace {

struct SpecParser {
  std::string_view text;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("group spec error at position " + std::to_string(pos) + ": " + what);
  }
  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  int number() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) fail("expected a number");
    if (pos - start > 3) fail("number too large");
    return std::stoi(std::string(text.substr(start, pos - start)));
  }
  GroupTable atom() {
    skip_ws();
    if (pos >= text.size()) fail("expected C(n), D(n), S(k) or A(k)");
    char c = text[pos];
    if (c != 'C' && c != 'D' && c != 'S' && c != 'A') fail("expected C, D, S or A");
    ++pos;
    if (!eat('(')) fail("expected '('");
    int n = number();
    if (!eat(')')) fail("expected ')'");
    switch (c) {
      case 'C': return build_cyclic(n);
      case 'D': return build_dihedral(n);
      case 'S': return build_symmetric(n);
      default: return build_alternating(n);
    }
  }
  GroupTable expr() {
    GroupTable g = atom();
    while (true) {
      skip_ws();
      if (pos < text.size() && (text[pos] == 'x' || text[pos] == 'X')) {
        ++pos;
        g = direct_product(g, atom());
      } else {
        break;
      }
    }
    skip_ws();
    if (pos != text.size()) fail("unexpected trailing input");
    return g;
  }
};

}  // namespace

GroupTable parse_group_spec(std::string_view text) {
  SpecParser p{text};
  return p.expr();
}

TableDiagnosis diagnose_table(const std::vector<std::vector<int>>& raw) {
  TableDiagnosis d;
  int n = int(raw.size());
  auto fail = [&](std::string axiom, int a, int b, int c, std::string msg) {
    d.ok = false;
    d.axiom = std::move(axiom);
    d.witness = {a, b, c};
    d.message = std::move(msg);
    return d;
  };
  if (n < 1 || n > kMaxGroupOrder)
    return fail("shape", -1, -1, -1, "order " + std::to_string(n) + " out of range");
  for (int i = 0; i < n; ++i) {
    if (int(raw[i].size()) != n) return fail("shape", i, -1, -1, "row " + std::to_string(i) + " has wrong length");
    for (int j = 0; j < n; ++j)
      if (raw[i][j] < 0 || raw[i][j] >= n)
        return fail("shape", i, j, -1, "entry out of range at (" + std::to_string(i) + "," + std::to_string(j) + ")");
  }
  // identity: some e with e*x = x*e = x for all x
  int e = -1;
  for (int cand = 0; cand < n && e < 0; ++cand) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x) ok = raw[cand][x] == x && raw[x][cand] == x;
    if (ok) e = cand;
  }
  if (e < 0) return fail("identity", -1, -1, -1, "no two-sided identity element");
  // Latin square
  for (int i = 0; i < n; ++i) {
    uint64_t seen = 0;
    for (int j = 0; j < n; ++j) {
      uint64_t bit = uint64_t{1} << raw[i][j];
      if (seen & bit)
        return fail("latin-row", i, j, -1, "row " + std::to_string(i) + " repeats value " + std::to_string(raw[i][j]));
      seen |= bit;
    }
  }
  for (int j = 0; j < n; ++j) {
    uint64_t seen = 0;
    for (int i = 0; i < n; ++i) {
      uint64_t bit = uint64_t{1} << raw[i][j];
      if (seen & bit)
        return fail("latin-column", i, j, -1, "column " + std::to_string(j) + " repeats value " + std::to_string(raw[i][j]));
      seen |= bit;
    }
  }
  // inverses: row permutation property already gives solvability of x*y = e;
  // two-sidedness follows from associativity, which is checked last so the
  // reported axiom is the most primitive violated one
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (raw[raw[a][b]][c] != raw[a][raw[b][c]])
          return fail("associativity", a, b, c,
                      "(" + std::to_string(a) + "*" + std::to_string(b) + ")*" + std::to_string(c) +
                          " != " + std::to_string(a) + "*(" + std::to_string(b) + "*" +
                          std::to_string(c) + ")");
  d.ok = true;
  d.axiom = "ok";
  return d;
}

GroupTable validate_table(const std::vector<std::vector<int>>& raw, std::string name) {
  TableDiagnosis d = diagnose_table(raw);
  if (!d.ok) throw std::invalid_argument("invalid group table (" + d.axiom + "): " + d.message);
  int n = int(raw.size());
  int e = 0;
  for (int cand = 0; cand < n; ++cand) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x) ok = raw[cand][x] == x && raw[x][cand] == x;
    if (ok) {
      e = cand;
      break;
    }
  }
  // renumber so the identity is element 0 (swap labels 0 and e)
  std::vector<int> relabel(n);
  std::iota(relabel.begin(), relabel.end(), 0);
  std::swap(relabel[0], relabel[e]);
  GroupTable g;
  g.order = n;
  g.name = name.empty() ? "G" + std::to_string(n) : std::move(name);
  g.mul = flat_table(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      g.mul[size_t(a) * n + b] = uint8_t(relabel[raw[relabel[a]][relabel[b]]]);
  fill_inverses(g);
  return g;
}

GroupTable load_group_table(std::istream& in, std::string name) {
  int n = 0;
  if (!(in >> n)) throw std::invalid_argument("group table: missing order line");
  if (n < 1 || n > kMaxGroupOrder)
    throw std::invalid_argument("group table: order " + std::to_string(n) + " out of range");
  std::vector<std::vector<int>> raw(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!(in >> raw[i][j]))
        throw std::invalid_argument("group table: truncated at row " + std::to_string(i));
  return validate_table(raw, std::move(name));
}

std::string group_table_to_text(const GroupTable& g) {
  std::ostringstream out;
  out << g.order << '\n';
  for (int a = 0; a < g.order; ++a) {
    for (int b = 0; b < g.order; ++b) {
      if (b) out << ' ';
      out << g.at(a, b);
    }
    out << '\n';
  }
  return out.str();
}

InvolutionPairPartition involution_pair_partition(const GroupTable& g) {
  InvolutionPairPartition part;
  for (int x = 1; x < g.order; ++x) {
    int ix = g.inverse(x);
    if (ix == x)
      part.involutions.push_back(x);
    else if (x < ix)
      part.pairs.emplace_back(x, ix);
  }
  return part;
}

std::vector<int> element_order_multiset(const GroupTable& g) {
  std::vector<int> orders(g.order);
  for (int x = 0; x < g.order; ++x) orders[x] = g.element_order(x);
  std::sort(orders.begin(), orders.end());
  return orders;
}

}  // namespace nucifera
