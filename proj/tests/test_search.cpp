#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <set>

#include "nucifera/search.hpp"
#include "oracles.hpp"

using namespace nucifera;

namespace {

std::filesystem::path fresh_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("nucifera-test-" + tag);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("enumeration is exhaustive, valid and degree-filtered") {
  GroupTable c30 = build_cyclic(30);
  uint64_t count = 0;
  enumerate_connection_sets(c30, 0, 29, [&](const ConnectionSet& s) {
    CHECK(is_valid_connection_set(c30, s));
    ++count;
  });
  CHECK(count == 32768);   // 2^(1 involution + 14 pairs)

  GroupTable c4 = build_cyclic(4);
  std::vector<uint64_t> degree_one;
  enumerate_connection_sets(c4, 1, 1, [&](const ConnectionSet& s) { degree_one.push_back(s.mask); });
  REQUIRE(degree_one.size() == 1);
  CHECK(degree_one[0] == uint64_t{1} << 2);   // the involution {2}

  // uniqueness and exhaustiveness over a nonabelian group
  GroupTable d12 = build_dihedral(12);
  std::set<uint64_t> masks;
  enumerate_connection_sets(d12, 0, 11, [&](const ConnectionSet& s) { masks.insert(s.mask); });
  auto part = involution_pair_partition(d12);
  CHECK(masks.size() == uint64_t{1} << part.subset_bits());

  // degree filter matches popcount
  enumerate_connection_sets(d12, 3, 5, [&](const ConnectionSet& s) {
    CHECK(s.degree() >= 3);
    CHECK(s.degree() <= 5);
  });
}

TEST_CASE("trivial searches") {
  // C(2): the single subset {1} gives K2, the one nuciferous hit
  GroupReport r = search_group(build_cyclic(2));
  CHECK(r.subsets_enumerated == 2);
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].degree == 1);
  CHECK(r.records[0].det == -1);
  CHECK(r.records[0].graph6 == "A_");
  CHECK(r.classes == std::map<int, int>{{1, 1}});

  CHECK(search_group(build_cyclic(1)).records.empty());
  CHECK(search_group(build_cyclic(12)).records.empty());
  CHECK_THROWS_AS(search_group(build_cyclic(32)), ExactnessError);
}

TEST_CASE("connectivity prune changes nothing but the work done") {
  for (const GroupTable& g : {build_cyclic(12), build_dihedral(12)}) {
    SearchOptions with, without;
    without.connectivity_prune = false;
    GroupReport a = search_group(g, with);
    GroupReport b = search_group(g, without);
    CHECK(a.subsets_enumerated == b.subsets_enumerated);
    CHECK(b.pruned_nongenerating == 0);
    CHECK(a.records.size() == b.records.size());
    CHECK(a.classes == b.classes);
  }
}

TEST_CASE("residue prescreen changes nothing on a group with hits") {
  GroupTable g = direct_product(build_alternating(4), build_cyclic(2));
  SearchOptions with, without;
  without.residue_prescreen = false;
  GroupReport a = search_group(g, with);
  GroupReport b = search_group(g, without);
  REQUIRE(a.records.size() == b.records.size());
  for (size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].set_mask == b.records[i].set_mask);
    CHECK(a.records[i].cert_hex == b.records[i].cert_hex);
  }
  CHECK(a.classes == b.classes);
  CHECK(a.classes == std::map<int, int>{{7, 2}});
  CHECK(b.residue_rejected == 0);
  CHECK(b.certified > a.certified);
}

TEST_CASE("symmetric group on four points") {
  GroupReport r = search_group(build_symmetric(4));
  CHECK(r.subsets_enumerated == 65536);
  CHECK(r.classes == std::map<int, int>{{7, 2}, {15, 1}});
  // every record: correct degree, neighborhood of vertex 0 is S itself,
  // stored graph6 re-parses and re-certifies to the same verdict and cert
  for (const auto& rec : r.records) {
    BitGraph g = graph_from_graph6(rec.graph6);
    CHECK(g.regular_degree() == rec.degree);
    CHECK(g.rows[0] == rec.set_mask);
    Certificate cert = is_nuciferous(g);
    CHECK(cert.verdict == Verdict::Nuciferous);
    CHECK(cert.det == rec.det);
    CHECK(canonical_form(g).hex() == rec.cert_hex);
  }
}

TEST_CASE("worker count does not change the report") {
  GroupTable g = direct_product(build_alternating(4), build_cyclic(2));
  SearchOptions one, four;
  one.jobs = 1;
  four.jobs = 4;
  four.block_bits = 8;
  GroupReport a = search_group(g, one);
  GroupReport b = search_group(g, four);
  CHECK(a.canonical_text() == b.canonical_text());
  CHECK(a.canonical_text().find("classes 7:2") != std::string::npos);
}

TEST_CASE("cross-group dedup") {
  GroupReport r1, r2;
  r1.group = "X";
  r2.group = "Y";
  SearchRecord a{.group = "X", .order = 10, .degree = 3, .set_mask = 5, .set_elements = {},
                 .det = 7, .cert_hex = "aaaa", .graph6 = "g1"};
  SearchRecord b = a;
  b.set_mask = 9;   // same class found twice within X
  SearchRecord c{.group = "Y", .order = 10, .degree = 3, .set_mask = 6, .set_elements = {},
                 .det = 7, .cert_hex = "aaaa", .graph6 = "g1"};
  SearchRecord d{.group = "Y", .order = 10, .degree = 5, .set_mask = 7, .set_elements = {},
                 .det = 3, .cert_hex = "bbbb", .graph6 = "g2"};
  r1.records = {a, b};
  r2.records = {c, d};
  std::vector<GroupReport> reports{r1, r2};
  GlobalClassTable table = dedup_cross_group(reports);
  CHECK(table.total == 2);
  CHECK(table.per_order == std::map<int, int>{{10, 2}});
  REQUIRE(table.entries.size() == 2);
  CHECK(table.entries[0].cert_hex == "aaaa");
  CHECK(table.entries[0].groups == std::vector<std::string>{"X", "Y"});
  CHECK(table.entries[1].groups == std::vector<std::string>{"Y"});
  CHECK(totals_line(table) == "10:2 total:2");

  // single-report input reproduces its own classes
  GlobalClassTable solo = dedup_cross_group(std::span(&r1, 1));
  CHECK(solo.total == 1);
}

TEST_CASE("results directory round trip and resume after cancellation") {
  GroupTable g = direct_product(build_alternating(4), build_cyclic(2));
  auto dir = fresh_dir("resume");

  GroupReport fresh = search_group(g);   // in-memory reference

  SearchOptions partial_opt;
  partial_opt.out_dir = dir;
  partial_opt.block_bits = 7;   // 256 blocks
  std::atomic<bool> stop{false};
  partial_opt.progress = [&](uint64_t done, uint64_t, uint64_t) {
    if (done >= 50) stop = true;
  };
  partial_opt.cancelled = [&] { return stop.load(); };
  GroupReport partial = search_group(g, partial_opt);
  CHECK(partial.subsets_enumerated < fresh.subsets_enumerated);

  SearchOptions resume_opt;
  resume_opt.out_dir = dir;
  resume_opt.block_bits = 7;
  resume_opt.resume = true;
  GroupReport resumed = search_group(g, resume_opt);
  CHECK(resumed.canonical_text() == fresh.canonical_text());

  // stored hits reload to exactly the final records
  auto stored = load_results_dir(dir);
  REQUIRE(stored.size() == resumed.records.size());
  for (size_t i = 0; i < stored.size(); ++i) {
    CHECK(std::filesystem::exists(stored[i].graph_path));
    BitGraph from_file = load_graph_file(stored[i].graph_path.string());
    CHECK(graph_to_graph6(from_file) == stored[i].record.graph6);
  }
  std::set<uint64_t> stored_masks, record_masks;
  for (const auto& h : stored) stored_masks.insert(h.record.set_mask);
  for (const auto& r : resumed.records) record_masks.insert(r.set_mask);
  CHECK(stored_masks == record_masks);

  // a fresh (non-resume) persisted run rewrites the directory consistently
  GroupReport again = search_group(g, SearchOptions{.out_dir = dir});
  CHECK(again.canonical_text() == fresh.canonical_text());
  CHECK(load_results_dir(dir).size() == again.records.size());

  std::filesystem::remove_all(dir);
}

TEST_CASE("resume rejects a mismatched index space") {
  GroupTable g = build_cyclic(12);
  auto dir = fresh_dir("mismatch");
  SearchOptions first;
  first.out_dir = dir;
  first.block_bits = 3;
  search_group(g, first);
  SearchOptions other;
  other.out_dir = dir;
  other.block_bits = 4;   // different sharding
  other.resume = true;
  CHECK_THROWS_AS(search_group(g, other), std::invalid_argument);
  CHECK_THROWS_AS(search_group(g, SearchOptions{.jobs = 0}), std::invalid_argument);
  CHECK_THROWS_AS(search_group(g, SearchOptions{.degree_min = 5, .degree_max = 2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(search_group(g, SearchOptions{.resume = true}), std::invalid_argument);
  std::filesystem::remove_all(dir);
}

TEST_CASE("csv rendering") {
  GroupReport r1, r2;
  r1.group = "B";
  r1.order = 24;
  r1.classes = {{15, 1}, {7, 2}};
  r2.group = "A";
  r2.order = 24;
  r2.classes = {{7, 2}};
  std::vector<GroupReport> reports{r1, r2};
  CHECK(reports_to_csv(reports) ==
        "order,group,degree,count\n24,A,7,2\n24,B,7,2\n24,B,15,1\n");
}
