// Acceptance checks, one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <fmt/format.h>

#include "lifeprof/cbow.hpp"
#include "lifeprof/gyration.hpp"
#include "lifeprof/kmeans.hpp"
#include "lifeprof/lda.hpp"
#include "lifeprof/metrics.hpp"
#include "lifeprof/motif.hpp"
#include "lifeprof/multiview.hpp"
#include "lifeprof/pipeline.hpp"
#include "lifeprof/rhythm.hpp"
#include "lifeprof/stays.hpp"
#include "../support/oracles.hpp"
#include "../support/stay_fixtures.hpp"

using namespace lifeprof;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(LIFEPROF_CLI) + " " + args + " --log-level warn >/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) {
      files[fs::relative(e.path(), dir).string()] = slurp(e.path());
    }
  }
  return files;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

// 1. radius of gyration against the two-pass formula
Outcome rog_oracle() {
  const auto t0 = Clock::now();
  Rng rng(101);
  double worst = 0.0;
  double worst_shift = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(500);
    const double scale = std::pow(10.0, rng.uniform(1.0, 5.0));
    std::vector<PlanarPoint> pts(n);
    for (auto& p : pts) {
      p = {rng.uniform(-scale, scale), rng.uniform(-scale, scale)};
    }
    const double r = radius_of_gyration(pts) / 1000.0;
    worst = std::max(worst, std::abs(r - oracle::rog_two_pass(pts) / 1000.0));
    const PlanarPoint shift{rng.uniform(-1e5, 1e5), rng.uniform(-1e5, 1e5)};
    auto moved = pts;
    for (auto& p : moved) {
      p.x += shift.x;
      p.y += shift.y;
    }
    worst_shift = std::max(worst_shift, std::abs(radius_of_gyration(moved) / 1000.0 - r));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-9 && worst_shift <= 1e-9 && secs < 5.0,
          fmt::format("max |err| {:.2e} km, translation {:.2e} km, {:.2f} s", worst, worst_shift, secs)};
}

// 2. DFT against direct summation; Parseval
Outcome dft_oracle() {
  Rng rng(102);
  double worst = 0.0;
  double worst_parseval = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> x(12);
    for (double& v : x) {
      v = rng.uniform(-1.0, 1.0);
    }
    const auto a = dft_amplitudes(x).amplitudes;
    const auto ref = oracle::naive_dft(x);
    for (std::size_t f = 0; f < a.size(); ++f) {
      worst = std::max(worst, std::abs(a[f] - std::abs(ref[f])));
    }
    double two_sided = a[0] * a[0] + a[6] * a[6];
    for (std::size_t f = 1; f < 6; ++f) {
      two_sided += 2.0 * a[f] * a[f];
    }
    double energy = 0.0;
    for (double v : x) {
      energy += v * v;
    }
    worst_parseval = std::max(worst_parseval, std::abs(energy - two_sided / 12.0));
  }
  return {worst <= 1e-9 && worst_parseval <= 1e-9,
          fmt::format("max amplitude err {:.2e}, Parseval err {:.2e}", worst, worst_parseval)};
}

// 3. LFER/DCFR ranges and pure-tone values
Outcome spectral_bounds() {
  Rng rng(103);
  std::size_t out_of_range = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<double> x(12);
    double total = 0.0;
    for (double& v : x) {
      v = rng.bernoulli(0.3) ? 0.0 : rng.uniform();
      total += v;
    }
    if (total == 0.0) {
      x[0] = total = 1.0;
    }
    for (double& v : x) {
      v /= total;
    }
    const auto s = dft_amplitudes(x);
    const double l = lfer(s);
    const double d = dcfr(s);
    out_of_range += (l < 0.0 || l > 1.0 || d < 0.0 || d > 1.0) ? 1 : 0;
  }
  auto tone = [](double f) {
    std::vector<double> x(12);
    for (std::size_t j = 0; j < 12; ++j) {
      x[j] = (1.0 + std::cos(2.0 * std::numbers::pi * f * static_cast<double>(j) / 12.0)) / 12.0;
    }
    return x;
  };
  const double uniform_lfer = lfer(dft_amplitudes(std::vector<double>(12, 1.0 / 12.0)));
  const double one_cycle_lfer = lfer(dft_amplitudes(tone(1)));
  const double one_cycle_dcfr = dcfr(dft_amplitudes(tone(1)));
  const double two_cycle_dcfr = dcfr(dft_amplitudes(tone(2)));
  const double high_lfer = lfer(dft_amplitudes(tone(4)));
  const bool exact = uniform_lfer == 0.0 && one_cycle_lfer == 1.0 && one_cycle_dcfr == 0.0 && two_cycle_dcfr == 1.0 &&
                     high_lfer == 0.0;
  return {out_of_range == 0 && exact,
          fmt::format("{} of 10000 out of [0,1]; uniform LFER {}, one-cycle LFER {} DCFR {}, two-cycle DCFR {}, "
                      "four-cycle LFER {}",
                      out_of_range, uniform_lfer, one_cycle_lfer, one_cycle_dcfr, two_cycle_dcfr, high_lfer)};
}

// 4. canonical codes against brute-force isomorphism, n <= 4
Outcome motif_canonicalization() {
  const auto t0 = Clock::now();
  Rng rng(104);
  std::size_t graphs_checked = 0;
  std::size_t mismatches = 0;
  std::size_t unstable = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto graphs = oracle::connected_digraphs(n);
    const auto buckets = oracle::isomorphism_buckets(graphs, n);
    std::vector<CanonicalCode> codes;
    for (const auto& g : graphs) {
      codes.push_back(canonical_code(oracle::to_motif(g, n)));
    }
    // Same bucket iff same code: compare bucket->code and code->bucket maps.
    std::map<std::size_t, CanonicalCode> code_of_bucket;
    std::map<CanonicalCode, std::size_t> bucket_of_code;
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      const auto [b, fresh_b] = code_of_bucket.emplace(buckets[i], codes[i]);
      const auto [c, fresh_c] = bucket_of_code.emplace(codes[i], buckets[i]);
      mismatches += (b->second != codes[i] || c->second != buckets[i]) ? 1 : 0;
    }
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      const auto g = oracle::to_motif(graphs[i], n);
      for (int r = 0; r < 1000; ++r) {
        std::iota(p.begin(), p.end(), 0);
        for (std::size_t k = n; k > 1; --k) {
          std::swap(p[k - 1], p[rng.below(k)]);
        }
        auto h = MotifGraph::empty(n);
        for (std::size_t a = 0; a < n; ++a) {
          for (std::size_t b = 0; b < n; ++b) {
            if (g.edge(a, b)) {
              h.set_edge(p[a], p[b]);
            }
          }
        }
        unstable += canonical_code(h) != codes[i] ? 1 : 0;
      }
    }
    graphs_checked += graphs.size();
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && unstable == 0 && secs < 60.0,
          fmt::format("{} graphs, {} bucket mismatches, {} unstable relabelings, {:.1f} s", graphs_checked,
                      mismatches, unstable, secs)};
}

// 5. hand-built stay fixtures
Outcome stay_fixtures() {
  const Grid grid({114.0, 22.5}, 150.0);
  const auto cases = fixtures::stay_cases();
  std::vector<std::string> failed;
  for (const auto& c : cases) {
    const auto got = detect_stays(oracle::track(grid, c.points), c.options);
    bool ok = got.stays.size() == c.expected.size();
    for (std::size_t i = 0; ok && i < got.stays.size(); ++i) {
      const auto& s = got.stays[i];
      const auto& e = c.expected[i];
      ok = s.cell.ix == e.ix && s.cell.iy == e.iy && s.t_start == fixtures::kDay + 60 * e.start_min &&
           std::abs(s.duration_min - e.duration_min) < 1e-9;
    }
    if (!ok) {
      failed.push_back(c.name);
    }
  }
  std::string detail = fmt::format("{} of {} cases pass", cases.size() - failed.size(), cases.size());
  for (const auto& f : failed) {
    detail += "; failed: " + f;
  }
  return {failed.empty() && cases.size() == 20, detail};
}

// 6. CBOW separates two tag communities
Outcome cbow_separation() {
  const auto t0 = Clock::now();
  const auto corpus = oracle::two_community_corpus(106);
  CbowOptions opt;
  opt.seed = 106;
  const auto table = train_cbow(corpus, opt).table;
  double intra = 0.0;
  double inter = 0.0;
  std::size_t n_intra = 0;
  std::size_t n_inter = 0;
  for (std::size_t i = 0; i < 20; ++i) {
    for (std::size_t j = i + 1; j < 20; ++j) {
      const double c = oracle::cosine(table.vector("tag" + std::to_string(i)), table.vector("tag" + std::to_string(j)));
      if ((i < 10) == (j < 10)) {
        intra += c;
        ++n_intra;
      } else {
        inter += c;
        ++n_inter;
      }
    }
  }
  intra /= static_cast<double>(n_intra);
  inter /= static_cast<double>(n_inter);
  const double secs = seconds_since(t0);
  return {intra - inter >= 0.2 && secs < 120.0,
          fmt::format("intra {:.3f}, inter {:.3f}, gap {:.3f}, {:.1f} s", intra, inter, intra - inter, secs)};
}

// 7. multi-view clustering
Outcome multiview_clustering() {
  // (a) duplicated views
  double worst_dup = 1.0;
  // (c) Lloyd monotonicity, over every k-means run made here
  std::size_t non_monotone = 0;
  auto check_monotone = [&](const KMeansResult& r) {
    for (std::size_t i = 1; i < r.objective_history.size(); ++i) {
      non_monotone += r.objective_history[i] > r.objective_history[i - 1] * (1.0 + 1e-12) ? 1 : 0;
    }
  };
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto data = oracle::planted_two_view(seed);
    const auto single = kmeans(data.a, {4, seed, 100, 1e-6});
    check_monotone(single);
    const auto multi = multiview_kmeans(data.a, data.a, {4, seed, 100, 1e-6});
    worst_dup = std::min(worst_dup, adjusted_rand_index(single.assignments, multi.assignments));
  }
  // (b) planted two-view data; each view carries one factor only, so the
  // four clusters are distinguishable only jointly
  std::vector<double> aris;
  std::vector<double> leaky;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto strict = oracle::planted_two_view(1000 + seed, 400, 8.0, 0.0);
    aris.push_back(adjusted_rand_index(multiview_kmeans(strict.a, strict.b, {4, seed}).assignments, strict.truth));
    // for context: both views also weakly carry the other factor
    const auto weak = oracle::planted_two_view(1000 + seed, 400, 8.0, 3.0);
    leaky.push_back(adjusted_rand_index(multiview_kmeans(weak.a, weak.b, {4, seed}).assignments, weak.truth));
  }
  Rng rng(107);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Matrix m(300, 4);
    for (double& x : m.data()) {
      x = rng.normal();
    }
    check_monotone(kmeans(m, {2 + seed % 10, seed}));
  }
  const double med = median(aris);
  return {worst_dup == 1.0 && med >= 0.9 && non_monotone == 0,
          fmt::format("(a) min duplicated-view ARI {:.4f}; (b) median planted ARI {:.4f} (min {:.4f}; {:.4f} "
                      "when each view also weakly carries the other factor); (c) {} objective increases over 60 runs",
                      worst_dup, med, *std::min_element(aris.begin(), aris.end()), median(leaky), non_monotone)};
}

// 8. end to end on synthetic cohorts
Outcome end_to_end() {
  const auto t0 = Clock::now();
  std::vector<double> aris;
  std::string detail;
  bool seven_everywhere = true;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const fs::path dir = fs::temp_directory_path() / fmt::format("lifeprof_accept_e2e_{}", seed);
    fs::remove_all(dir);
    const auto ts = Clock::now();
    const int code = run_cli(fmt::format("pipeline --threads 1 --seed {} --artifacts {} --set synth.n_users=2000 "
                                         "--set cluster.k=7",
                                         seed, dir.string()));
    if (code != 0) {
      return {false, fmt::format("pipeline exited {} for seed {}", code, seed)};
    }
    const std::string ari_rows = slurp(dir / artifact::kReportAri);
    const auto pos = ari_rows.find("ari,");
    const double ari = pos == std::string::npos ? -1.0 : std::stod(ari_rows.substr(pos + 4));
    const bool seven = slurp(dir / artifact::kReport).find("non-empty clusters: 7 of 7") != std::string::npos;
    seven_everywhere = seven_everywhere && seven;
    aris.push_back(ari);
    detail += fmt::format("seed {} ARI {:.3f}{} ({:.0f} s); ", seed, ari, seven ? "" : " [<7 clusters]",
                          seconds_since(ts));
    fs::remove_all(dir);
  }
  const double secs = seconds_since(t0);
  const double med = median(aris);
  // The runtime bound applies per pipeline run.
  return {med >= 0.7 && seven_everywhere && secs / 5.0 < 600.0,
          detail + fmt::format("median {:.3f}, 7 non-empty clusters every seed: {}", med,
                               seven_everywhere ? "yes" : "no")};
}

// 9. LDA recovers planted topics
Outcome lda_recovery() {
  const auto corpus = oracle::planted_topics(109);
  LdaOptions opt;
  opt.n_topics = 3;
  opt.seed = 109;
  const auto model = train_lda(corpus.docs, opt);
  std::vector<bool> used(3, false);
  double cos = 0.0;
  for (const auto& planted : corpus.topic_word) {
    double best = -1.0;
    std::size_t arg = 0;
    for (std::size_t k = 0; k < 3; ++k) {
      const double c = used[k] ? -2.0 : oracle::cosine(model.topic_word.row(k), planted);
      if (c > best) {
        best = c;
        arg = k;
      }
    }
    used[arg] = true;
    cos += best / 3.0;
  }
  double worst_row = 0.0;
  for (const Matrix* m : {&model.topic_word, &model.doc_topic}) {
    for (std::size_t r = 0; r < m->rows(); ++r) {
      const auto row = m->row(r);
      worst_row = std::max(worst_row, std::abs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0));
    }
  }
  return {cos >= 0.8 && worst_row <= 1e-9,
          fmt::format("aligned cosine {:.4f}, max row-sum error {:.2e}", cos, worst_row)};
}

// 10. byte-identical reruns
Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "lifeprof_accept_determinism";
  const std::string args = "pipeline --threads 1 --seed 7 --artifacts " + dir.string() + " --set synth.n_users=500";
  fs::remove_all(dir);
  if (run_cli(args) != 0) {
    return {false, "first run failed"};
  }
  const auto first = snapshot(dir);
  fs::remove_all(dir);
  if (run_cli(args) != 0) {
    return {false, "second run failed"};
  }
  const auto second = snapshot(dir);
  fs::remove_all(dir);
  std::vector<std::string> differing;
  for (const auto& [name, bytes] : first) {
    const auto it = second.find(name);
    if (it == second.end() || it->second != bytes) {
      differing.push_back(name);
    }
  }
  std::string detail = fmt::format("{} files compared, {} differ", first.size(), differing.size());
  for (const auto& d : differing) {
    detail += " " + d;
  }
  return {differing.empty() && first.size() == second.size() && !first.empty(), detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"radius of gyration oracle", rog_oracle},
      {"DFT oracle and Parseval", dft_oracle},
      {"spectral feature bounds", spectral_bounds},
      {"motif canonicalization", motif_canonicalization},
      {"stay detection fixtures", stay_fixtures},
      {"CBOW community separation", cbow_separation},
      {"multi-view clustering", multiview_clustering},
      {"end-to-end archetype recovery", end_to_end},
      {"LDA planted topic recovery", lda_recovery},
      {"pipeline determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    fmt::print("{} criterion {:>2} {}: {}\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail);
    std::fflush(stdout);
  }
  return failures;
}
