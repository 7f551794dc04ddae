// Copyright 2026 The SFL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment harness: every solver within its size limits, over a directory
// of instance files and a seed range, reported as CSV.

#ifndef SFL_BENCH_H_
#define SFL_BENCH_H_

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "sfl/baselines.h"
#include "sfl/conf_lp.h"
#include "sfl/generators.h"
#include "sfl/instance.h"
#include "sfl/io.h"
#include "sfl/pipeline.h"

namespace sfl {

inline constexpr const char* kBenchHeader =
    "instance,algo,seed,n,m,conn,open,total,lp_obj,ratio_vs_lp,runtime_ms";

struct BenchRow {
  std::string instance;
  std::string algo;
  uint64_t seed = 0;
  int n = 0;
  int m = 0;
  CostBreakdown cost;
  std::optional<double> lp_obj;
  std::optional<double> runtime_ms;

  auto Key() const { return std::tie(instance, algo, seed); }
};

struct BenchOptions {
  uint64_t seed_lo = 0;
  uint64_t seed_hi = 0;  // inclusive
  bool timing = false;
  int threads = 0;  // 0: hardware concurrency
};

// Parses "a..b" (inclusive, a <= b) or a single seed.
inline std::pair<uint64_t, uint64_t> ParseSeedRange(const std::string& text) {
  const auto dots = text.find("..");
  try {
    size_t used = 0;
    if (dots == std::string::npos) {
      const uint64_t s = std::stoull(text, &used);
      if (used != text.size()) throw DomainError("");
      return {s, s};
    }
    const std::string a = text.substr(0, dots);
    const std::string b = text.substr(dots + 2);
    const uint64_t lo = std::stoull(a, &used);
    if (used != a.size()) throw DomainError("");
    const uint64_t hi = std::stoull(b, &used);
    if (used != b.size() || hi < lo) throw DomainError("");
    return {lo, hi};
  } catch (const std::exception&) {
    throw DomainError("seeds: expected 'a..b' with a <= b, got '" + text + "'");
  }
}

// Instance files (*.json) of a directory, sorted by file name.
inline std::vector<std::filesystem::path> ListInstances(
    const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw DomainError("bench: '" + dir.string() + "' is not a directory");
  }
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace internal {

inline std::string FormatNumber(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Runs `task(k)` for k in [0, count) on a pool of threads; the first
// exception is rethrown after every worker stops.
template <typename Task>
void ParallelFor(int count, int threads, Task task) {
  if (threads <= 0) {
    threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  threads = std::max(1, std::min(threads, count));
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    while (true) {
      const int k = next.fetch_add(1);
      if (k >= count) return;
      try {
        task(k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        next.store(count);
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace internal

// One row per (instance, algorithm, seed). Deterministic algorithms run once
// per instance and are repeated for every seed. Rows are sorted by
// (instance, algo, seed).
inline std::vector<BenchRow> RunBench(
    const std::vector<std::filesystem::path>& files, const BenchOptions& opt) {
  struct Loaded {
    std::string name;
    SflInstance inst;
    std::optional<double> lp_obj;
  };
  std::vector<Loaded> loaded;
  for (const auto& path : files) {
    loaded.push_back({path.filename().string(), ReadInstanceFile(path.string()), {}});
  }

  // Tasks: (instance, algo, seed); seed is ignored for deterministic algos.
  struct Task {
    int instance;
    std::string algo;
    uint64_t seed;
  };
  std::vector<Task> tasks;
  for (int k = 0; k < static_cast<int>(loaded.size()); ++k) {
    const SflInstance& inst = loaded[k].inst;
    if (inst.n <= kMaxLpClients) tasks.push_back({k, "lp", 0});
    if (inst.n <= kMaxExactDpClients) tasks.push_back({k, "exact", 0});
    if (inst.n <= kMaxGreedyExactClients) {
      tasks.push_back({k, "greedy", 0});
    } else if (HypercubeDim(inst) > 0) {
      tasks.push_back({k, "greedy-structured", 0});
    }
    if (inst.n <= kMaxLpClients) {
      for (uint64_t s = opt.seed_lo;; ++s) {
        tasks.push_back({k, "pipeline", s});
        if (s == opt.seed_hi) break;
      }
    }
  }

  std::vector<BenchRow> results(tasks.size());
  internal::ParallelFor(static_cast<int>(tasks.size()), opt.threads, [&](int t) {
    const Task& task = tasks[t];
    const SflInstance& inst = loaded[task.instance].inst;
    BenchRow row;
    row.instance = loaded[task.instance].name;
    row.algo = task.algo;
    row.seed = task.seed;
    row.n = inst.n;
    row.m = inst.m;
    const auto start = std::chrono::steady_clock::now();
    if (task.algo == "lp") {
      const auto lp = SolveConfLp(inst, LpMode::kColgen);
      row.cost = FracCost(inst, lp.x);
      row.cost.total = lp.x.objective;
    } else if (task.algo == "exact") {
      row.cost = ExactDp(inst).cost;
    } else if (task.algo == "greedy") {
      row.cost = GreedyExact(inst).cost;
    } else if (task.algo == "greedy-structured") {
      row.cost = GreedyStructured(inst).cost;
    } else {
      PipelineOptions po;
      po.seed = task.seed;
      row.cost = PipelineSolve(inst, po).cost;
    }
    const auto stop = std::chrono::steady_clock::now();
    if (opt.timing) {
      row.runtime_ms =
          std::chrono::duration<double, std::milli>(stop - start).count();
    }
    results[t] = std::move(row);
  });

  // LP objective of each instance, then expand deterministic rows per seed.
  for (const auto& row : results) {
    if (row.algo == "lp") {
      for (auto& l : loaded) {
        if (l.name == row.instance) l.lp_obj = row.cost.total;
      }
    }
  }
  std::vector<BenchRow> rows;
  for (auto& row : results) {
    for (const auto& l : loaded) {
      if (l.name == row.instance) row.lp_obj = l.lp_obj;
    }
    if (row.algo == "pipeline") {
      rows.push_back(row);
      continue;
    }
    for (uint64_t s = opt.seed_lo;; ++s) {
      BenchRow copy = row;
      copy.seed = s;
      rows.push_back(std::move(copy));
      if (s == opt.seed_hi) break;
    }
  }
  std::sort(rows.begin(), rows.end(),
            [](const BenchRow& a, const BenchRow& b) { return a.Key() < b.Key(); });
  return rows;
}

inline std::string FormatBenchCsv(const std::vector<BenchRow>& rows) {
  std::string out = std::string(kBenchHeader) + "\n";
  for (const auto& r : rows) {
    out += r.instance + "," + r.algo + "," + std::to_string(r.seed) + "," +
           std::to_string(r.n) + "," + std::to_string(r.m) + "," +
           internal::FormatNumber(r.cost.conn) + "," +
           internal::FormatNumber(r.cost.open) + "," +
           internal::FormatNumber(r.cost.total) + ",";
    if (r.lp_obj) {
      out += internal::FormatNumber(*r.lp_obj);
      out += ",";
      if (*r.lp_obj > 0) out += internal::FormatNumber(r.cost.total / *r.lp_obj);
    } else {
      out += ",";
    }
    out += ",";
    if (r.runtime_ms) out += internal::FormatNumber(*r.runtime_ms);
    out += "\n";
  }
  return out;
}

}  // namespace sfl

#endif  // SFL_BENCH_H_
