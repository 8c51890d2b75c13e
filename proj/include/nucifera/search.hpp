#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nucifera/canon.hpp"
#include "nucifera/cayley.hpp"
#include "nucifera/certify.hpp"
#include "nucifera/group.hpp"

namespace nucifera {

/// One certified nuciferous hit.
struct SearchRecord {
  std::string group;
  int order = 0;
  int degree = 0;              // |S| = regularity degree
  uint64_t set_mask = 0;       // connection set bitmask
  std::vector<int> set_elements;
  i128 det = 0;
  std::string cert_hex;        // canonical form, hex rendering
  std::string graph6;
};

/// Per-group search outcome. records are sorted by (degree, cert_hex,
/// set_mask); classes counts distinct canonical certs per degree.
struct GroupReport {
  std::string group;
  int order = 0;
  uint64_t subsets_enumerated = 0;
  uint64_t pruned_nongenerating = 0;
  uint64_t residue_rejected = 0;    // certified non-hits from residues alone
  uint64_t certified = 0;           // full exact certificates computed
  std::vector<SearchRecord> records;
  std::map<int, int> classes;
  double wall_seconds = 0;

  /// Deterministic serialization (excludes wall time); byte-identical across
  /// worker counts.
  std::string canonical_text() const;
};

struct SearchOptions {
  int degree_min = 0;
  int degree_max = kMaxGroupOrder - 1;
  int jobs = 1;
  int block_bits = 12;              // subsets per work block = 2^block_bits
  bool connectivity_prune = true;   // skip non-generating sets
  bool residue_prescreen = true;    // det and principal-cofactor residues
  std::filesystem::path out_dir;    // empty: no persistence
  bool resume = false;              // skip blocks recorded in the resume file
  std::function<bool()> cancelled;  // polled between blocks
  std::function<void(uint64_t blocks_done, uint64_t blocks_total, uint64_t hits)> progress;
};

/// Streams every inverse-closed identity-free subset with degree in range,
/// exactly once, in binary-counting order over (involution bits low, pair
/// bits high).
void enumerate_connection_sets(const GroupTable& g, int degree_min, int degree_max,
                               const std::function<void(const ConnectionSet&)>& yield);

/// Exhaustive certified search of one group. Requires order <=
/// certified_max_order(). Deterministic report for any worker count.
GroupReport search_group(const GroupTable& g, const SearchOptions& options = {});

/// Cross-group isomorphism-class table.
struct GlobalClassTable {
  struct Entry {
    std::string cert_hex;
    int order = 0;
    int degree = 0;
    std::vector<std::string> groups;   // sorted, deduplicated
    std::string graph6;
  };
  std::vector<Entry> entries;          // sorted by (order, degree, cert_hex)
  std::map<int, int> per_order;        // order -> distinct classes
  int total = 0;
};

GlobalClassTable dedup_cross_group(std::span<const GroupReport> reports);

/// Stored hit re-read from a results directory.
struct StoredHit {
  std::filesystem::path graph_path;
  SearchRecord record;
};

/// Results directory layout: hits/<name>.g6 + hits/<name>.cert.json,
/// reports/<group>.json, resume/<group>.resume, summary.csv.
std::filesystem::path hits_dir(const std::filesystem::path& out);
std::filesystem::path reports_dir(const std::filesystem::path& out);
std::filesystem::path resume_dir(const std::filesystem::path& out);

void write_hit_files(const std::filesystem::path& out, const SearchRecord& rec);
std::vector<StoredHit> load_results_dir(const std::filesystem::path& out);
void write_group_report(const std::filesystem::path& out, const GroupReport& report);

/// Summary CSV ("order,group,degree,count", rows sorted ascending).
std::string reports_to_csv(std::span<const GroupReport> reports);
/// Totals line, e.g. "24:6 28:3 30:12 total:21".
std::string totals_line(const GlobalClassTable& table);

}  // namespace nucifera
