#include "nucifera/search.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace nucifera {

namespace {

using json = nlohmann::json;

// Index space over (involution bits low, pair bits high); every index is one
// inverse-closed identity-free subset and vice versa.
struct SubsetSpace {
  std::vector<int> involutions;
  std::vector<std::pair<int, int>> pairs;
  int ni = 0, np = 0;

  explicit SubsetSpace(const InvolutionPairPartition& part)
      : involutions(part.involutions), pairs(part.pairs),
        ni(int(part.involutions.size())), np(int(part.pairs.size())) {}

  int bits() const { return ni + np; }
  uint64_t size() const { return uint64_t{1} << bits(); }
  uint64_t inv_bits(uint64_t idx) const { return ni == 0 ? 0 : idx & ((uint64_t{1} << ni) - 1); }
  int degree_of(uint64_t idx) const {
    return std::popcount(inv_bits(idx)) + 2 * std::popcount(idx >> ni);
  }
  uint64_t mask_of(uint64_t idx) const {
    uint64_t mask = 0;
    for (uint64_t m = inv_bits(idx); m; m &= m - 1)
      mask |= uint64_t{1} << involutions[std::countr_zero(m)];
    for (uint64_t m = idx >> ni; m; m &= m - 1) {
      const auto& pr = pairs[std::countr_zero(m)];
      mask |= (uint64_t{1} << pr.first) | (uint64_t{1} << pr.second);
    }
    return mask;
  }
};

std::string mask_hex(uint64_t mask) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (int shift = 60; shift >= 0; shift -= 4) out.push_back(digits[mask >> shift & 0xf]);
  size_t first = out.find_first_not_of('0');
  return first == std::string::npos ? "0" : out.substr(first);
}

std::string hit_basename(const SearchRecord& r) {
  std::ostringstream name;
  name << "ord" << r.order << '-' << r.group << "-d" << r.degree << '-'
       << r.cert_hex.substr(0, 12) << "-m" << mask_hex(r.set_mask);
  return name.str();
}

json record_to_json(const SearchRecord& r) {
  return json{{"group", r.group},         {"order", r.order},
              {"degree", r.degree},       {"mask", mask_hex(r.set_mask)},
              {"elements", r.set_elements}, {"det", to_string(r.det)},
              {"verdict", "Nuciferous"},  {"canonical", r.cert_hex},
              {"graph6", r.graph6}};
}

SearchRecord record_from_json(const json& j) {
  SearchRecord r;
  r.group = j.at("group").get<std::string>();
  r.order = j.at("order").get<int>();
  r.degree = j.at("degree").get<int>();
  r.set_mask = std::stoull(j.at("mask").get<std::string>(), nullptr, 16);
  r.set_elements = j.at("elements").get<std::vector<int>>();
  r.det = parse_i128(j.at("det").get<std::string>());
  r.cert_hex = j.at("canonical").get<std::string>();
  r.graph6 = j.at("graph6").get<std::string>();
  return r;
}

void sort_records(std::vector<SearchRecord>& records) {
  std::sort(records.begin(), records.end(), [](const SearchRecord& a, const SearchRecord& b) {
    return std::tie(a.degree, a.cert_hex, a.set_mask) < std::tie(b.degree, b.cert_hex, b.set_mask);
  });
  records.erase(std::unique(records.begin(), records.end(),
                            [](const SearchRecord& a, const SearchRecord& b) {
                              return a.set_mask == b.set_mask;
                            }),
                records.end());
}

std::map<int, int> tally_classes(const std::vector<SearchRecord>& records) {
  std::map<int, std::set<std::string>> certs;
  for (const auto& r : records) certs[r.degree].insert(r.cert_hex);
  std::map<int, int> classes;
  for (const auto& [deg, set] : certs) classes[deg] = int(set.size());
  return classes;
}

struct BlockCounters {
  uint64_t enumerated = 0, pruned = 0, residue = 0, certified = 0;
};

// Resume file: header describing the index space, then one line per
// completed block: "<block> <enumerated> <pruned> <residue> <certified>".
struct ResumeState {
  std::map<uint64_t, BlockCounters> done;
};

std::filesystem::path resume_path(const std::filesystem::path& out, const std::string& group) {
  return resume_dir(out) / (group + ".resume");
}

std::string resume_header(const GroupTable& g, int bits, int block_bits) {
  std::ostringstream h;
  h << "nucifera-resume v1\n"
    << "group " << g.name << '\n'
    << "order " << g.order << '\n'
    << "bits " << bits << '\n'
    << "block_bits " << block_bits << '\n';
  return h.str();
}

ResumeState load_resume(const std::filesystem::path& path, const std::string& expected_header) {
  ResumeState state;
  std::ifstream in(path);
  if (!in) return state;
  std::string header(expected_header.size(), '\0');
  in.read(header.data(), long(expected_header.size()));
  if (in.gcount() != long(expected_header.size()) || header != expected_header)
    throw std::invalid_argument("resume file does not match this search: " + path.string());
  uint64_t b;
  BlockCounters c;
  while (in >> b >> c.enumerated >> c.pruned >> c.residue >> c.certified) state.done[b] = c;
  return state;
}

}  // namespace

std::filesystem::path hits_dir(const std::filesystem::path& out) { return out / "hits"; }
std::filesystem::path reports_dir(const std::filesystem::path& out) { return out / "reports"; }
std::filesystem::path resume_dir(const std::filesystem::path& out) { return out / "resume"; }

void write_hit_files(const std::filesystem::path& out, const SearchRecord& rec) {
  std::filesystem::create_directories(hits_dir(out));
  auto base = hits_dir(out) / hit_basename(rec);
  {
    std::ofstream g6(base.string() + ".g6");
    g6 << rec.graph6 << '\n';
  }
  std::ofstream meta(base.string() + ".cert.json");
  meta << record_to_json(rec).dump(2) << '\n';
}

std::vector<StoredHit> load_results_dir(const std::filesystem::path& out) {
  std::vector<StoredHit> hits;
  auto dir = hits_dir(out);
  if (!std::filesystem::is_directory(dir)) return hits;
  std::vector<std::filesystem::path> metas;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    auto name = entry.path().filename().string();
    if (name.size() > 10 && name.ends_with(".cert.json")) metas.push_back(entry.path());
  }
  std::sort(metas.begin(), metas.end());
  for (const auto& meta : metas) {
    std::ifstream in(meta);
    json j;
    in >> j;
    StoredHit hit;
    hit.record = record_from_json(j);
    auto stem = meta.string();
    stem.resize(stem.size() - std::string(".cert.json").size());
    hit.graph_path = stem + ".g6";
    hits.push_back(std::move(hit));
  }
  return hits;
}

void write_group_report(const std::filesystem::path& out, const GroupReport& report) {
  std::filesystem::create_directories(reports_dir(out));
  json j{{"group", report.group},
         {"order", report.order},
         {"subsets_enumerated", report.subsets_enumerated},
         {"pruned_nongenerating", report.pruned_nongenerating},
         {"residue_rejected", report.residue_rejected},
         {"certified", report.certified},
         {"wall_seconds", report.wall_seconds}};
  j["classes"] = json::object();
  for (const auto& [deg, count] : report.classes) j["classes"][std::to_string(deg)] = count;
  j["records"] = json::array();
  for (const auto& r : report.records) j["records"].push_back(record_to_json(r));
  std::ofstream f(reports_dir(out) / (report.group + ".json"));
  f << j.dump(2) << '\n';
}

std::string GroupReport::canonical_text() const {
  std::ostringstream out;
  out << "group " << group << '\n'
      << "order " << order << '\n'
      << "enumerated " << subsets_enumerated << '\n'
      << "pruned " << pruned_nongenerating << '\n'
      << "residue_rejected " << residue_rejected << '\n'
      << "certified " << certified << '\n';
  out << "classes";
  for (const auto& [deg, count] : classes) out << ' ' << deg << ':' << count;
  out << '\n';
  for (const auto& r : records)
    out << "record d" << r.degree << " m" << mask_hex(r.set_mask) << " c" << r.cert_hex << " det"
        << to_string(r.det) << ' ' << r.graph6 << '\n';
  return out.str();
}

void enumerate_connection_sets(const GroupTable& g, int degree_min, int degree_max,
                               const std::function<void(const ConnectionSet&)>& yield) {
  if (degree_min < 0 || degree_max < degree_min)
    throw std::invalid_argument("degree range is not well-ordered");
  SubsetSpace space(involution_pair_partition(g));
  for (uint64_t idx = 0; idx < space.size(); ++idx) {
    int deg = space.degree_of(idx);
    if (deg < degree_min || deg > degree_max) continue;
    yield(ConnectionSet{space.mask_of(idx), g.order});
  }
}

GroupReport search_group(const GroupTable& g, const SearchOptions& options) {
  if (g.order > certified_max_order())
    throw ExactnessError("group order " + std::to_string(g.order) +
                         " exceeds the certified search range n <= " +
                         std::to_string(certified_max_order()));
  if (options.jobs < 1) throw std::invalid_argument("worker count must be >= 1");
  if (options.degree_min < 0 || options.degree_max < options.degree_min)
    throw std::invalid_argument("degree range is not well-ordered");
  if (options.resume && options.out_dir.empty())
    throw std::invalid_argument("resume requires an output directory");

  auto t0 = std::chrono::steady_clock::now();
  SubsetSpace space(involution_pair_partition(g));
  const uint64_t total = space.size();
  const int block_bits = std::clamp(options.block_bits, 0, space.bits());
  const uint64_t block_size = uint64_t{1} << block_bits;
  const uint64_t blocks_total = (total + block_size - 1) / block_size;

  const auto primes = certification_primes();
  const bool persist = !options.out_dir.empty();
  const std::string header = resume_header(g, space.bits(), block_bits);

  ResumeState previous;
  std::vector<SearchRecord> merged;
  std::ofstream resume_out;
  if (persist) {
    std::filesystem::create_directories(options.out_dir);
    std::filesystem::create_directories(hits_dir(options.out_dir));
    std::filesystem::create_directories(resume_dir(options.out_dir));
    auto rpath = resume_path(options.out_dir, g.name);
    if (options.resume) {
      bool had_file = std::filesystem::exists(rpath) && std::filesystem::file_size(rpath) > 0;
      if (had_file) {
        previous = load_resume(rpath, header);
        for (auto& hit : load_results_dir(options.out_dir))
          if (hit.record.group == g.name) merged.push_back(std::move(hit.record));
      }
      resume_out.open(rpath, std::ios::app);
      if (!had_file) resume_out << header;
    } else {
      // fresh run: drop stale artifacts of this group so the directory
      // matches the report exactly
      if (std::filesystem::is_directory(hits_dir(options.out_dir)))
        for (auto& hit : load_results_dir(options.out_dir))
          if (hit.record.group == g.name) {
            std::filesystem::remove(hit.graph_path);
            auto meta = hit.graph_path;
            meta.replace_extension();
            std::filesystem::remove(meta.string() + ".cert.json");
          }
      resume_out.open(rpath, std::ios::trunc);
      resume_out << header;
    }
  }

  std::atomic<uint64_t> next_block{0}, blocks_done{0}, hits_seen{uint64_t(merged.size())};
  std::atomic<uint64_t> sum_enumerated{0}, sum_pruned{0}, sum_residue{0}, sum_certified{0};
  for (const auto& [b, c] : previous.done) {
    (void)b;
    sum_enumerated += c.enumerated;
    sum_pruned += c.pruned;
    sum_residue += c.residue;
    sum_certified += c.certified;
  }
  std::atomic<bool> abort_flag{false};
  std::mutex io_mu;
  std::exception_ptr first_error;

  auto worker = [&]() {
    try {
      while (true) {
        if (abort_flag.load(std::memory_order_relaxed)) return;
        if (options.cancelled && options.cancelled()) return;
        uint64_t b = next_block.fetch_add(1, std::memory_order_relaxed);
        if (b >= blocks_total) return;
        if (previous.done.count(b)) {
          blocks_done.fetch_add(1, std::memory_order_relaxed);
          continue;
        }
        BlockCounters counters;
        std::vector<SearchRecord> local;
        const uint64_t lo = b * block_size;
        const uint64_t hi = std::min(total, lo + block_size);
        for (uint64_t idx = lo; idx < hi; ++idx) {
          int degree = space.degree_of(idx);
          if (degree < options.degree_min || degree > options.degree_max) continue;
          ++counters.enumerated;
          ConnectionSet s{space.mask_of(idx), g.order};
          if (options.connectivity_prune && !generates(g, s)) {
            ++counters.pruned;
            continue;
          }
          BitGraph graph = cayley_graph(g, s);
          if (options.residue_prescreen) {
            // a nonzero residue proves a nonzero integer: singular needs two
            // zero det residues, a nonzero principal cofactor kills the
            // all-zero-diagonal pattern outright
            uint64_t d1 = det_mod(graph, primes[0]);
            if (d1 == 0) {
              if (det_mod(graph, primes[1]) == 0) {
                ++counters.residue;
                continue;
              }
            } else if (deleted_vertex_det_mod(graph, 0, primes[0]) != 0) {
              ++counters.residue;
              continue;
            }
          }
          Certificate cert = adjugate_exact(graph);
          ++counters.certified;
          if (cert.verdict != Verdict::Nuciferous) continue;
          SearchRecord rec;
          rec.group = g.name;
          rec.order = g.order;
          rec.degree = degree;
          rec.set_mask = s.mask;
          rec.set_elements = s.elements();
          rec.det = cert.det;
          rec.cert_hex = canonical_form(graph).hex();
          rec.graph6 = graph_to_graph6(graph);
          local.push_back(std::move(rec));
        }
        sum_enumerated.fetch_add(counters.enumerated, std::memory_order_relaxed);
        sum_pruned.fetch_add(counters.pruned, std::memory_order_relaxed);
        sum_residue.fetch_add(counters.residue, std::memory_order_relaxed);
        sum_certified.fetch_add(counters.certified, std::memory_order_relaxed);
        hits_seen.fetch_add(local.size(), std::memory_order_relaxed);
        uint64_t done = blocks_done.fetch_add(1, std::memory_order_relaxed) + 1;
        std::lock_guard<std::mutex> lock(io_mu);
        for (auto& rec : local) {
          if (persist) write_hit_files(options.out_dir, rec);
          merged.push_back(std::move(rec));
        }
        if (persist) {
          resume_out << b << ' ' << counters.enumerated << ' ' << counters.pruned << ' '
                     << counters.residue << ' ' << counters.certified << '\n';
          resume_out.flush();
        }
        if (options.progress) options.progress(done, blocks_total, hits_seen.load());
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(io_mu);
      if (!first_error) first_error = std::current_exception();
      abort_flag.store(true);
    }
  };

  if (options.jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(size_t(options.jobs));
    for (int t = 0; t < options.jobs; ++t) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  GroupReport report;
  report.group = g.name;
  report.order = g.order;
  report.subsets_enumerated = sum_enumerated.load();
  report.pruned_nongenerating = sum_pruned.load();
  report.residue_rejected = sum_residue.load();
  report.certified = sum_certified.load();
  report.records = std::move(merged);
  sort_records(report.records);
  report.classes = tally_classes(report.records);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (persist && !(options.cancelled && options.cancelled()))
    write_group_report(options.out_dir, report);
  return report;
}

GlobalClassTable dedup_cross_group(std::span<const GroupReport> reports) {
  GlobalClassTable table;
  std::map<std::string, GlobalClassTable::Entry> by_cert;
  for (const auto& rep : reports) {
    for (const auto& rec : rep.records) {
      auto [it, fresh] = by_cert.try_emplace(rec.cert_hex);
      auto& e = it->second;
      if (fresh) {
        e.cert_hex = rec.cert_hex;
        e.order = rec.order;
        e.degree = rec.degree;
        e.graph6 = rec.graph6;
      } else if (e.order != rec.order || e.degree != rec.degree) {
        throw InternalError("identical canonical cert with mismatched order or degree");
      }
      e.groups.push_back(rec.group);
    }
  }
  for (auto& [cert, e] : by_cert) {
    std::sort(e.groups.begin(), e.groups.end());
    e.groups.erase(std::unique(e.groups.begin(), e.groups.end()), e.groups.end());
    table.per_order[e.order] += 1;
    table.entries.push_back(std::move(e));
  }
  std::sort(table.entries.begin(), table.entries.end(), [](const auto& a, const auto& b) {
    return std::tie(a.order, a.degree, a.cert_hex) < std::tie(b.order, b.degree, b.cert_hex);
  });
  for (const auto& [order, count] : table.per_order) table.total += count;
  return table;
}

std::string reports_to_csv(std::span<const GroupReport> reports) {
  std::vector<std::tuple<int, std::string, int, int>> rows;
  for (const auto& rep : reports)
    for (const auto& [deg, count] : rep.classes) rows.emplace_back(rep.order, rep.group, deg, count);
  std::sort(rows.begin(), rows.end());
  std::string out = "order,group,degree,count\n";
  for (const auto& [order, group, deg, count] : rows)
    out += std::to_string(order) + "," + group + "," + std::to_string(deg) + "," +
           std::to_string(count) + "\n";
  return out;
}

std::string totals_line(const GlobalClassTable& table) {
  std::string out;
  for (const auto& [order, count] : table.per_order)
    out += std::to_string(order) + ":" + std::to_string(count) + " ";
  out += "total:" + std::to_string(table.total);
  return out;
}

}  // namespace nucifera
