#include "nucifera/cayley.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nucifera {

std::vector<int> ConnectionSet::elements() const {
  std::vector<int> out;
  uint64_t m = mask;
  while (m) {
    out.push_back(std::countr_zero(m));
    m &= m - 1;
  }
  return out;
}

bool is_valid_connection_set(const GroupTable& g, const ConnectionSet& s) {
  if (s.group_order != g.order) return false;
  if (g.order < 64 && (s.mask >> g.order) != 0) return false;
  if (s.mask & 1) return false;   // identity
  for (uint64_t m = s.mask; m; m &= m - 1) {
    int x = std::countr_zero(m);
    if (!(s.mask >> g.inverse(x) & 1)) return false;
  }
  return true;
}

ConnectionSet connection_set_from_elements(const GroupTable& g, const std::vector<int>& elems) {
  ConnectionSet s{0, g.order};
  for (int x : elems) {
    if (x < 0 || x >= g.order)
      throw std::invalid_argument("connection set element " + std::to_string(x) + " out of range");
    s.mask |= uint64_t{1} << x;
  }
  if (!is_valid_connection_set(g, s))
    throw std::invalid_argument("connection set is not identity-free and inverse-closed");
  return s;
}

int BitGraph::edge_count() const {
  int total = 0;
  for (int i = 0; i < n; ++i) total += degree(i);
  return total / 2;
}

std::optional<int> BitGraph::regular_degree() const {
  if (n == 0) return std::nullopt;
  int d = degree(0);
  for (int i = 1; i < n; ++i)
    if (degree(i) != d) return std::nullopt;
  return d;
}

BitGraph cayley_graph(const GroupTable& g, const ConnectionSet& s) {
  if (!is_valid_connection_set(g, s))
    throw std::invalid_argument("invalid connection set for " + g.name);
  BitGraph graph;
  graph.n = g.order;
  // edge {u, v} iff v*u^-1 in S, i.e. the neighbors of u are {s*u : s in S}
  for (uint64_t m = s.mask; m; m &= m - 1) {
    int x = std::countr_zero(m);
    const uint8_t* row = g.mul.data() + size_t(x) * g.order;
    for (int u = 0; u < g.order; ++u) graph.rows[u] |= uint64_t{1} << row[u];
  }
  return graph;
}

bool generates(const GroupTable& g, const ConnectionSet& s) {
  if (!is_valid_connection_set(g, s))
    throw std::invalid_argument("invalid connection set for " + g.name);
  uint64_t full = g.order == 64 ? ~uint64_t{0} : (uint64_t{1} << g.order) - 1;
  uint64_t seen = 1, frontier = 1;
  while (frontier) {
    int u = std::countr_zero(frontier);
    frontier &= frontier - 1;
    for (uint64_t m = s.mask; m; m &= m - 1) {
      int x = std::countr_zero(m);
      uint64_t bit = uint64_t{1} << g.at(u, x);
      if (!(seen & bit)) {
        seen |= bit;
        frontier |= bit;
      }
    }
  }
  return seen == full;
}

bool is_connected(const BitGraph& g) {
  if (g.n == 0) return false;
  uint64_t seen = 1, frontier = 1;
  while (frontier) {
    int u = std::countr_zero(frontier);
    frontier &= frontier - 1;
    uint64_t fresh = g.rows[u] & ~seen;
    seen |= fresh;
    frontier |= fresh;
  }
  uint64_t full = g.n == 64 ? ~uint64_t{0} : (uint64_t{1} << g.n) - 1;
  return seen == full;
}

BitGraph graph_from_adjacency_text(std::string_view text) {
  std::vector<std::vector<int>> m;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::vector<int> vals;
    std::string tok;
    while (row >> tok) {
      if (tok == "0")
        vals.push_back(0);
      else if (tok == "1")
        vals.push_back(1);
      else
        throw std::invalid_argument("adjacency text: non-binary entry '" + tok + "'");
    }
    if (!vals.empty()) m.push_back(std::move(vals));
  }
  int n = int(m.size());
  if (n < 1 || n > kMaxGroupOrder)
    throw std::invalid_argument("adjacency text: vertex count " + std::to_string(n) + " out of range 1..64");
  BitGraph g;
  g.n = n;
  for (int i = 0; i < n; ++i) {
    if (int(m[i].size()) != n)
      throw std::invalid_argument("adjacency text: row " + std::to_string(i) + " has wrong length");
    if (m[i][i] != 0)
      throw std::invalid_argument("adjacency text: nonzero diagonal at vertex " + std::to_string(i));
    for (int j = 0; j < n; ++j) {
      if (m[i][j] != m[j][i])
        throw std::invalid_argument("adjacency text: asymmetric at (" + std::to_string(i) + "," +
                                    std::to_string(j) + ")");
      if (m[i][j]) g.rows[i] |= uint64_t{1} << j;
    }
  }
  return g;
}

std::string graph_to_adjacency_text(const BitGraph& g) {
  std::string out;
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      if (j) out.push_back(' ');
      out.push_back(g.edge(i, j) ? '1' : '0');
    }
    out.push_back('\n');
  }
  return out;
}

std::string graph_to_graph6(const BitGraph& g) {
  std::string out;
  if (g.n <= 62) {
    out.push_back(char(63 + g.n));
  } else {
    // 4-byte order form: '~' then 18 bits big-endian in 6-bit groups
    out.push_back('~');
    out.push_back(char(63 + ((g.n >> 12) & 63)));
    out.push_back(char(63 + ((g.n >> 6) & 63)));
    out.push_back(char(63 + (g.n & 63)));
  }
  int acc = 0, nbits = 0;
  for (int v = 1; v < g.n; ++v) {
    for (int u = 0; u < v; ++u) {
      acc = acc << 1 | (g.edge(u, v) ? 1 : 0);
      if (++nbits == 6) {
        out.push_back(char(63 + acc));
        acc = 0;
        nbits = 0;
      }
    }
  }
  if (nbits > 0) out.push_back(char(63 + (acc << (6 - nbits))));
  return out;
}

BitGraph graph_from_graph6(std::string_view s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.remove_suffix(1);
  if (s.empty()) throw std::invalid_argument("graph6: empty string");
  if (s.front() == ':' || s.front() == ';')
    throw std::invalid_argument("graph6: sparse6 not supported");
  size_t pos = 0;
  auto byte = [&](size_t i) {
    int c = static_cast<unsigned char>(s[i]);
    if (c < 63 || c > 126) throw std::invalid_argument("graph6: byte out of range");
    return c - 63;
  };
  long n = 0;
  if (s[0] == '~') {
    if (s.size() >= 2 && s[1] == '~') throw std::invalid_argument("graph6: order too large");
    if (s.size() < 4) throw std::invalid_argument("graph6: truncated order");
    n = long(byte(1)) << 12 | long(byte(2)) << 6 | long(byte(3));
    pos = 4;
  } else {
    n = byte(0);
    pos = 1;
  }
  if (n < 1 || n > kMaxGroupOrder)
    throw std::invalid_argument("graph6: vertex count " + std::to_string(n) + " out of range 1..64");
  BitGraph g;
  g.n = int(n);
  long need = n * (n - 1) / 2;
  long have = 6 * long(s.size() - pos);
  if (have < need) throw std::invalid_argument("graph6: truncated bit data");
  if (s.size() - pos > size_t((need + 5) / 6)) throw std::invalid_argument("graph6: trailing bytes");
  long t = 0;
  for (size_t i = pos; i < s.size(); ++i) {
    int b = byte(i);
    for (int k = 5; k >= 0; --k) {
      if (t < need) {
        if (b >> k & 1) {
          // bit t is edge (u, v) in column-major upper-triangle order
          long rem = t;
          int v = 1;
          while (rem >= v) rem -= v, ++v;
          g.add_edge(int(rem), v);
        }
      } else if (b >> k & 1) {
        throw std::invalid_argument("graph6: nonzero padding");
      }
      ++t;
    }
  }
  return g;
}

BitGraph load_graph_file(const std::string& path, std::string_view format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open graph file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (format.empty()) {
    size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw std::invalid_argument("empty graph file: " + path);
    format = (text[first] == '0' || text[first] == '1') ? "adj" : "graph6";
  }
  if (format == "adj") return graph_from_adjacency_text(text);
  if (format == "graph6") {
    size_t end = text.find_first_of("\r\n");
    return graph_from_graph6(end == std::string::npos ? text : text.substr(0, end));
  }
  throw std::invalid_argument("unknown graph format '" + std::string(format) + "'");
}

}  // namespace nucifera
