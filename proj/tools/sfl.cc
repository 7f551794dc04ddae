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

// sfl: instance generation, solving, tree embedding and benchmarking.
//
//   sfl gen hypercube --dim D --out F
//   sfl gen random --n N --m M --seed S --oracle K --out F [--weights W]
//   sfl solve --algo A --in F --seed S [--eps E] [--fix-L X] [--trace]
//   sfl embed --in F --seed S --out F2
//   sfl bench --dir D --seeds a..b --out C.csv [--timing] [--threads T]
//
// Exit status: 0 on success, 1 on invalid input, 2 when a size limit is
// exceeded, 3 when an internal invariant fails (a JSON dump is written and
// its path printed on stderr).

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sfl/baselines.h"
#include "sfl/bench.h"
#include "sfl/common.h"
#include "sfl/conf_lp.h"
#include "sfl/frt.h"
#include "sfl/generators.h"
#include "sfl/io.h"
#include "sfl/pipeline.h"

namespace {

using sfl::Json;

constexpr int kExitInput = 1;
constexpr int kExitCap = 2;
constexpr int kExitInvariant = 3;

struct GenHypercubeArgs {
  int dim = 2;
  std::string out;
};

struct GenRandomArgs {
  int n = 8;
  int m = 8;
  uint64_t seed = 0;
  std::string oracle = "coverage";
  std::string weights = "none";
  std::string out;
};

struct SolveArgs {
  std::string algo = "pipeline";
  std::string in;
  uint64_t seed = 0;
  double eps = 0.1;
  std::optional<double> fix_L;
  bool trace = false;
};

struct EmbedArgs {
  std::string in;
  uint64_t seed = 0;
  std::string out;
};

struct BenchArgs {
  std::string dir;
  std::string seeds = "0..0";
  std::string out;
  bool timing = false;
  int threads = 0;
};

Json Solve(const SolveArgs& a) {
  const sfl::SflInstance inst = sfl::ReadInstanceFile(a.in);
  Json out = {{"algo", a.algo}, {"instance", a.in}, {"seed", a.seed},
              {"n", inst.n},    {"m", inst.m}};
  if (a.algo == "pipeline") {
    sfl::PipelineOptions opt;
    opt.seed = a.seed;
    opt.eps = a.eps;
    opt.fix_L = a.fix_L;
    const auto r = sfl::PipelineSolve(inst, opt);
    out["cost"] = sfl::CostToJson(r.cost);
    out["lp_obj"] = r.lp_obj ? Json(*r.lp_obj) : Json(nullptr);
    out["assignment"] = sfl::AssignmentToJson(r.S);
    if (a.trace) out["trace"] = sfl::PipelineToJson(r);
  } else if (a.algo == "greedy" || a.algo == "greedy-structured") {
    const auto r = a.algo == "greedy" ? sfl::GreedyExact(inst)
                                      : sfl::GreedyStructured(inst);
    out["cost"] = sfl::CostToJson(r.cost);
    out["assignment"] = sfl::AssignmentToJson(r.S);
    if (a.trace) out["trace"] = sfl::GreedyStepsToJson(r.steps);
  } else if (a.algo == "exact") {
    const auto r = sfl::ExactDp(inst);
    out["cost"] = sfl::CostToJson(r.cost);
    out["assignment"] = sfl::AssignmentToJson(r.S);
  } else {
    const auto r = sfl::SolveConfLp(inst, sfl::LpMode::kColgen);
    sfl::CostBreakdown c = sfl::FracCost(inst, r.x);
    c.total = r.x.objective;
    out["cost"] = sfl::CostToJson(c);
    out["lp_obj"] = r.x.objective;
    out["solution"] = sfl::FractionalToJson(r.x);
    if (a.trace) {
      out["trace"] = {{"master_solves", r.master_solves},
                      {"simplex_iterations", r.simplex_iterations},
                      {"dual_objective", r.dual_objective},
                      {"min_reduced_cost", r.min_reduced_cost},
                      {"duals", r.duals}};
    }
  }
  return out;
}

// The tree embedding of every point of the instance, after rescaling the
// metric so that its smallest non-zero distance is 2.
Json Embed(const EmbedArgs& a) {
  const sfl::SflInstance inst = sfl::ReadInstanceFile(a.in);
  const double dmin = inst.metric.d_min();
  const double scale = dmin > 0 ? 2.0 / dmin : 1.0;
  std::vector<double> flat(inst.metric.flat().begin(), inst.metric.flat().end());
  for (double& d : flat) d *= scale;
  const auto metric = sfl::Metric::Trusted(inst.metric.size(), std::move(flat));
  std::vector<int> points(metric.size());
  std::iota(points.begin(), points.end(), 0);
  sfl::FrtTrace trace;
  const sfl::Hst tree = sfl::FrtEmbed(metric, points, a.seed, &trace);
  Json out = sfl::HstToJson(tree, &trace);
  out["seed"] = a.seed;
  out["scale"] = scale;
  out["non_contracting"] = sfl::IsNonContracting(tree, metric, points);
  return out;
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw sfl::DomainError("cannot write '" + path + "'");
  out << text;
}

std::string DumpInvariantFailure(const std::string& what,
                                 const std::vector<std::string>& argv) {
  const auto path = std::filesystem::temp_directory_path() /
                    ("sfl_invariant_" + std::to_string(::getpid()) + ".json");
  Json dump = {{"error", what}, {"argv", argv}};
  std::ofstream(path) << dump.dump(1) << '\n';
  return path.string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Submodular facility location solvers"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "Generate an instance");
  gen->require_subcommand(1);
  GenHypercubeArgs hc;
  auto* gen_hc = gen->add_subcommand("hypercube", "Greedy lower-bound family");
  gen_hc->add_option("--dim", hc.dim, "Hypercube dimension")
      ->required()
      ->check(CLI::Range(sfl::kMinHypercubeGenDim, sfl::kMaxHypercubeGenDim));
  gen_hc->add_option("--out", hc.out, "Output JSON file")->required();

  GenRandomArgs rnd;
  auto* gen_rnd = gen->add_subcommand("random", "Random Euclidean instance");
  gen_rnd->add_option("--n", rnd.n, "Clients")->required();
  gen_rnd->add_option("--m", rnd.m, "Facilities")->required();
  gen_rnd->add_option("--seed", rnd.seed, "Seed")->required();
  gen_rnd->add_option("--oracle", rnd.oracle, "Oracle family")
      ->required()
      ->check(CLI::IsMember({"coverage", "uniform", "independent_activation"}));
  gen_rnd->add_option("--weights", rnd.weights, "Facility weights")
      ->check(CLI::IsMember({"none", "mult", "add"}));
  gen_rnd->add_option("--out", rnd.out, "Output JSON file")->required();

  SolveArgs solve;
  double fix_L = 0.0;
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance");
  solve_cmd->add_option("--algo", solve.algo, "Algorithm")
      ->required()
      ->check(CLI::IsMember({"pipeline", "greedy", "greedy-structured", "exact", "lp"}));
  solve_cmd->add_option("--in", solve.in, "Instance JSON file")->required();
  solve_cmd->add_option("--seed", solve.seed, "Seed")->required();
  solve_cmd->add_option("--eps", solve.eps, "Distance reduction epsilon");
  auto* fix_opt = solve_cmd->add_option("--fix-L", fix_L, "Single distance guess");
  solve_cmd->add_flag("--trace", solve.trace, "Include the solver trace");

  EmbedArgs embed;
  auto* embed_cmd = app.add_subcommand("embed", "Tree-embed an instance metric");
  embed_cmd->add_option("--in", embed.in, "Instance JSON file")->required();
  embed_cmd->add_option("--seed", embed.seed, "Seed")->required();
  embed_cmd->add_option("--out", embed.out, "Output JSON file")->required();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run every solver over a directory");
  bench_cmd->add_option("--dir", bench.dir, "Instance directory")->required();
  bench_cmd->add_option("--seeds", bench.seeds, "Seed range a..b")->required();
  bench_cmd->add_option("--out", bench.out, "Output CSV file")->required();
  bench_cmd->add_flag("--timing", bench.timing, "Fill the runtime_ms column");
  bench_cmd->add_option("--threads", bench.threads, "Worker threads (0: all cores)");

  CLI11_PARSE(app, argc, argv);
  std::vector<std::string> args(argv, argv + argc);

  try {
    if (gen_hc->parsed()) {
      sfl::WriteJsonFile(hc.out, sfl::InstanceToJson(sfl::GenHypercube(hc.dim)));
    } else if (gen_rnd->parsed()) {
      sfl::RandomInstanceOptions opt{rnd.n, rnd.m, rnd.seed, rnd.oracle};
      opt.weights = rnd.weights == "mult"  ? sfl::WeightMode::kMult
                    : rnd.weights == "add" ? sfl::WeightMode::kAdd
                                           : sfl::WeightMode::kNone;
      sfl::WriteJsonFile(rnd.out, sfl::InstanceToJson(sfl::GenRandomEuclidean(opt)));
    } else if (solve_cmd->parsed()) {
      if (fix_opt->count() > 0) solve.fix_L = fix_L;
      std::cout << Solve(solve).dump(1) << '\n';
    } else if (embed_cmd->parsed()) {
      sfl::WriteJsonFile(embed.out, Embed(embed));
    } else if (bench_cmd->parsed()) {
      sfl::BenchOptions opt;
      std::tie(opt.seed_lo, opt.seed_hi) = sfl::ParseSeedRange(bench.seeds);
      opt.timing = bench.timing;
      opt.threads = bench.threads;
      const auto rows = sfl::RunBench(sfl::ListInstances(bench.dir), opt);
      WriteText(bench.out, sfl::FormatBenchCsv(rows));
    }
  } catch (const sfl::CapError& e) {
    std::cerr << "sfl: size limit exceeded: " << e.what() << '\n';
    return kExitCap;
  } catch (const sfl::InvariantError& e) {
    std::cerr << "sfl: invariant failure: " << e.what() << '\n'
              << "sfl: diagnostic dump: " << DumpInvariantFailure(e.what(), args)
              << '\n';
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "sfl: " << e.what() << '\n';
    return kExitInput;
  }
  return 0;
}
