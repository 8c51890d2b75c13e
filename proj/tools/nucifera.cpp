// Command-line driver: exact verification, exhaustive per-group search,
// isomorphism checks, group-table tooling, and results re-certification.
//
// Exit codes: 0 success / positive verdict, 1 negative verdict (or failed
// re-certification), 2 usage, parse or input-range errors, 3 internal
// invariant failure (exact-arithmetic tripwires).

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nucifera/canon.hpp"
#include "nucifera/cayley.hpp"
#include "nucifera/certify.hpp"
#include "nucifera/group.hpp"
#include "nucifera/int128.hpp"
#include "nucifera/search.hpp"

using namespace nucifera;
using json = nlohmann::json;

namespace {

std::atomic<bool> g_interrupted{false};

void handle_sigint(int) { g_interrupted.store(true); }

std::string default_fixture_path() { return std::string(NUCIFERA_DATA_DIR) + "/nuciferous24.adj"; }

std::string reduced_fraction(i128 num, i128 den) {
  if (num == 0) return "0";
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 g = gcd_i128(num, den);
  num /= g;
  den /= g;
  if (den == 1) return to_string(num);
  return to_string(num) + "/" + to_string(den);
}

json certificate_json(const Certificate& cert) {
  json j;
  j["n"] = cert.n;
  j["verdict"] = std::string(verdict_name(cert.verdict));
  j["det"] = to_string(cert.det);
  j["primes"] = json::array();
  for (uint64_t p : cert.primes_used) j["primes"].push_back(std::to_string(p));
  if (cert.witness_i >= 0) j["witness_i"] = cert.witness_i;
  if (cert.witness_j >= 0) j["witness_j"] = cert.witness_j;
  if (!cert.adj.empty()) {
    json rows = json::array();
    for (int i = 0; i < cert.n; ++i) {
      json row = json::array();
      for (int j2 = 0; j2 < cert.n; ++j2) row.push_back(to_string(cert.adj_at(i, j2)));
      rows.push_back(std::move(row));
    }
    j["adjugate"] = std::move(rows);
  }
  return j;
}

int cmd_verify(const std::string& path, const std::string& format, bool show_inverse) {
  std::string_view input_format;
  if (format == "adj" || format == "graph6") input_format = format;
  BitGraph g = load_graph_file(path, input_format);
  Certificate cert = is_nuciferous(g);
  if (format == "json") {
    std::cout << certificate_json(cert).dump(2) << '\n';
  } else {
    std::cout << "graph: " << path << "  n=" << g.n;
    if (auto d = g.regular_degree()) std::cout << "  degree=" << *d;
    std::cout << '\n';
    std::cout << "verdict: " << verdict_name(cert.verdict);
    if (cert.verdict == Verdict::DiagNonzero)
      std::cout << "  (A^-1[" << cert.witness_i << "][" << cert.witness_i << "] != 0)";
    if (cert.verdict == Verdict::OffdiagZero)
      std::cout << "  (A^-1[" << cert.witness_i << "][" << cert.witness_j << "] = 0)";
    std::cout << '\n';
    std::cout << "det: " << to_string(cert.det) << '\n';
    if (!cert.primes_used.empty()) {
      std::cout << "primes:";
      for (uint64_t p : cert.primes_used) std::cout << ' ' << p;
      std::cout << '\n';
    }
    if (show_inverse && cert.verdict != Verdict::Singular) {
      std::cout << "A^-1 (exact):\n";
      for (int i = 0; i < cert.n; ++i) {
        for (int j = 0; j < cert.n; ++j) {
          if (j) std::cout << ' ';
          std::cout << reduced_fraction(cert.adj_at(i, j), cert.det);
        }
        std::cout << '\n';
      }
    }
  }
  return cert.verdict == Verdict::Nuciferous ? 0 : 1;
}

int cmd_search(const std::vector<std::string>& specs, int degree_min, int degree_max, int jobs,
               std::string out, bool resume, bool no_prune, bool no_prescreen, int block_bits,
               bool quiet) {
  if (out.empty()) {
    const char* env = std::getenv("NUCIFERA_OUT");
    out = env && *env ? env : "nucifera-out";
  }
  std::vector<GroupTable> groups;
  for (const auto& spec : specs) groups.push_back(parse_group_spec(spec));

  std::signal(SIGINT, handle_sigint);
  std::vector<GroupReport> reports;
  for (const auto& g : groups) {
    if (g_interrupted.load()) break;
    SearchOptions opt;
    opt.degree_min = degree_min;
    opt.degree_max = degree_max;
    opt.jobs = jobs;
    opt.block_bits = block_bits;
    opt.connectivity_prune = !no_prune;
    opt.residue_prescreen = !no_prescreen;
    opt.out_dir = out;
    opt.resume = resume;
    opt.cancelled = [] { return g_interrupted.load(); };
    auto last_tick = std::chrono::steady_clock::now();
    if (!quiet) {
      opt.progress = [&](uint64_t done, uint64_t total, uint64_t hits) {
        auto now = std::chrono::steady_clock::now();
        if (done == total || now - last_tick > std::chrono::seconds(2)) {
          last_tick = now;
          std::cerr << '\r' << g.name << ": block " << done << '/' << total << ", hits " << hits
                    << std::flush;
          if (done == total) std::cerr << '\n';
        }
      };
    }
    GroupReport report = search_group(g, opt);
    if (g_interrupted.load()) {
      std::cerr << "\ninterrupted; partial state saved, rerun with --resume\n";
      return 1;
    }
    if (!quiet) {
      std::cerr << g.name << ": " << report.subsets_enumerated << " subsets, "
                << report.records.size() << " nuciferous connection sets, classes";
      if (report.classes.empty()) std::cerr << " none";
      for (const auto& [deg, count] : report.classes) std::cerr << ' ' << deg << ':' << count;
      std::cerr << "  (" << report.wall_seconds << " s)\n";
    }
    reports.push_back(std::move(report));
  }

  std::string csv = reports_to_csv(reports);
  {
    std::ofstream f(std::filesystem::path(out) / "summary.csv");
    f << csv;
  }
  GlobalClassTable table = dedup_cross_group(reports);
  std::cout << csv;
  std::cout << totals_line(table) << '\n';
  return 0;
}

int cmd_iso(const std::string& path_a, const std::string& path_b, bool witness,
            const std::string& format) {
  std::string_view input_format;
  if (format == "adj" || format == "graph6") input_format = format;
  BitGraph a = load_graph_file(path_a, input_format);
  BitGraph b = load_graph_file(path_b, input_format);
  IsoWitness w = is_isomorphic(a, b);
  if (format == "json") {
    json j{{"isomorphic", w.isomorphic}};
    if (w.isomorphic && witness) j["mapping"] = w.mapping;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << (w.isomorphic ? "isomorphic" : "non-isomorphic") << '\n';
    if (w.isomorphic && witness) {
      std::cout << "mapping:";
      for (size_t v = 0; v < w.mapping.size(); ++v) std::cout << ' ' << v << "->" << w.mapping[v];
      std::cout << '\n';
    }
  }
  return w.isomorphic ? 0 : 1;
}

std::vector<std::vector<int>> read_raw_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open table file: " + path);
  int n = 0;
  if (!(in >> n) || n < 1 || n > kMaxGroupOrder)
    throw std::invalid_argument("table file must start with an order in 1..64");
  std::vector<std::vector<int>> raw(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!(in >> raw[size_t(i)][size_t(j)]))
        throw std::invalid_argument("table file truncated at row " + std::to_string(i));
  return raw;
}

int cmd_groups(const std::string& action, const std::string& path, const std::string& name) {
  if (action == "list") {
    std::cout << "builtin constructors (compose with x, e.g. \"D(12) x C(2)\"):\n"
              << "  C(n)  cyclic group of order n, 1 <= n <= 64\n"
              << "  D(n)  dihedral group of order n (n/2 rotations), n even, 4 <= n <= 64\n"
              << "  S(k)  symmetric group on k points, k <= 4 (order k!)\n"
              << "  A(k)  alternating group on k points, k <= 5 (order k!/2)\n"
              << "direct products are capped at order 64.\n"
              << "other groups: import a multiplication table (first line n, then n rows).\n";
    return 0;
  }
  if (path.empty()) throw std::invalid_argument("groups " + action + " requires a table file");
  auto raw = read_raw_table(path);
  TableDiagnosis d = diagnose_table(raw);
  if (!d.ok) {
    std::cout << "invalid: " << d.axiom << " (" << d.message << ")";
    if (d.witness[0] >= 0) {
      std::cout << "  witness:";
      for (int w : d.witness)
        if (w >= 0) std::cout << ' ' << w;
    }
    std::cout << '\n';
    return 1;
  }
  GroupTable g =
      validate_table(raw, name.empty() ? std::filesystem::path(path).stem().string() : name);
  auto part = involution_pair_partition(g);
  std::cout << "valid group of order " << g.order << ": " << g.name << " ("
            << part.involutions.size() << " involutions, " << part.pairs.size()
            << " inverse pairs)\n";
  if (action == "import") std::cout << group_table_to_text(g);
  return 0;
}

int cmd_report(const std::string& dir, const std::string& out_csv) {
  auto stored = load_results_dir(dir);
  // trust nothing: re-parse every stored graph, re-certify, re-canonicalize
  std::map<std::string, GroupReport> by_group;
  for (const auto& hit : stored) {
    BitGraph g = load_graph_file(hit.graph_path.string());
    std::string file = hit.graph_path.filename().string();
    if (graph_to_graph6(g) != hit.record.graph6)
      throw std::runtime_error("re-certification failed: stored graph6 mismatch in " + file);
    if (g.n != hit.record.order || g.regular_degree() != hit.record.degree)
      throw std::runtime_error("re-certification failed: order/degree mismatch in " + file);
    Certificate cert = is_nuciferous(g);
    if (cert.verdict != Verdict::Nuciferous)
      throw std::runtime_error("re-certification failed: verdict " +
                               std::string(verdict_name(cert.verdict)) + " in " + file);
    if (cert.det != hit.record.det)
      throw std::runtime_error("re-certification failed: determinant mismatch in " + file);
    if (canonical_form(g).hex() != hit.record.cert_hex)
      throw std::runtime_error("re-certification failed: canonical cert mismatch in " + file);
    GroupReport& rep = by_group[hit.record.group];
    rep.group = hit.record.group;
    rep.order = hit.record.order;
    rep.records.push_back(hit.record);
  }
  std::vector<GroupReport> reports;
  for (auto& [name, rep] : by_group) {
    std::map<int, std::set<std::string>> certs;
    for (const auto& r : rep.records) certs[r.degree].insert(r.cert_hex);
    for (const auto& [deg, set] : certs) rep.classes[deg] = int(set.size());
    reports.push_back(std::move(rep));
  }
  std::string csv = reports_to_csv(reports);
  GlobalClassTable table = dedup_cross_group(reports);
  if (!out_csv.empty()) {
    std::ofstream f(out_csv);
    f << csv;
  }
  std::cout << csv;
  std::cout << totals_line(table) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nucifera: exact search and certification of nuciferous Cayley graphs"};
  app.require_subcommand(1);
  app.fallthrough();   // global flags may follow the subcommand
  std::string format = "text";
  app.add_option("--format", format, "output/input format")
      ->check(CLI::IsMember({"text", "json", "graph6", "adj", "csv"}));
  uint64_t seed = 0;
  app.add_option("--seed", seed,
                 "seed for randomized tooling (the engine itself is deterministic; accepted for "
                 "interface stability)");

  auto* verify = app.add_subcommand(
      "verify", "certify a graph file (defaults to the bundled 24-vertex nuciferous fixture)");
  std::string verify_path = default_fixture_path();
  bool show_inverse = false;
  verify->add_option("path", verify_path, "graph6 or adjacency-text file");
  verify->add_flag("--inverse", show_inverse, "print the exact A^-1 as reduced fractions");

  auto* search =
      app.add_subcommand("search", "exhaustively search groups for nuciferous Cayley graphs");
  std::vector<std::string> specs;
  int degree_min = 0, degree_max = kMaxGroupOrder - 1;
  int jobs = 1, block_bits = 12;
  std::string out_dir;
  bool resume = false, no_prune = false, no_prescreen = false, quiet = false;
  search->add_option("--group", specs, "group spec, e.g. C(30) or \"D(12) x C(2)\" (repeatable)")
      ->required();
  search->add_option("--degree-min", degree_min, "minimum connection-set size");
  search->add_option("--degree-max", degree_max, "maximum connection-set size");
  search->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  search->add_option("--out", out_dir,
                     "results directory (default $NUCIFERA_OUT or ./nucifera-out)");
  search->add_flag("--resume", resume, "skip blocks recorded as complete in the resume file");
  search->add_flag("--no-prune", no_prune, "do not skip non-generating connection sets");
  search->add_flag("--no-prescreen", no_prescreen, "skip the residue prescreens");
  search->add_option("--block-bits", block_bits, "log2 of the work block size")
      ->check(CLI::Range(0, 24));
  search->add_flag("--quiet", quiet, "suppress progress output");

  auto* iso = app.add_subcommand("iso", "test two graph files for isomorphism");
  std::string iso_a, iso_b;
  bool witness = false;
  iso->add_option("a", iso_a, "first graph file")->required();
  iso->add_option("b", iso_b, "second graph file")->required();
  iso->add_flag("--witness", witness, "print the verified vertex bijection");

  auto* groups =
      app.add_subcommand("groups", "list builders or validate/import multiplication tables");
  std::string action, table_path, table_name;
  groups->add_option("action", action, "list | validate | import")
      ->required()
      ->check(CLI::IsMember({"list", "validate", "import"}));
  groups->add_option("path", table_path, "multiplication-table file");
  groups->add_option("--name", table_name, "display name for the imported group");

  auto* report =
      app.add_subcommand("report", "re-certify a results directory and rebuild the tallies");
  std::string report_dir, report_out;
  report->add_option("dir", report_dir, "results directory from a search run")->required();
  report->add_option("--out", report_out, "also write the rebuilt CSV here");

  try {
    app.parse(argc, argv);
    if (verify->parsed()) return cmd_verify(verify_path, format, show_inverse);
    if (search->parsed())
      return cmd_search(specs, degree_min, degree_max, jobs, out_dir, resume, no_prune,
                        no_prescreen, block_bits, quiet);
    if (iso->parsed()) return cmd_iso(iso_a, iso_b, witness, format);
    if (groups->parsed()) return cmd_groups(action, table_path, table_name);
    if (report->parsed()) return cmd_report(report_dir, report_out);
    return 2;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const InternalError& e) {
    std::cerr << "internal invariant failure: " << e.what() << '\n';
    return 3;
  } catch (const ExactnessError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
