// Copyright 2026 The safearm Authors
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

#include "safearm/harness/config.h"

#include <fstream>
#include <numbers>
#include <set>
#include <stdexcept>

#include "safearm/util/json_number.h"

namespace safearm::harness {
namespace {

using nlohmann::json;

void CheckKeys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw std::invalid_argument(where + ": unknown key '" + key + "'");
  }
}

void Read(const json& j, const char* key, double* out) {
  if (j.contains(key)) *out = util::ParseNumber(j.at(key));
}

void Read(const json& j, const char* key, int* out) {
  if (j.contains(key)) *out = j.at(key).get<int>();
}

void Read(const json& j, const char* key, bool* out) {
  if (j.contains(key)) *out = j.at(key).get<bool>();
}

}  // namespace

HarnessConfig DefaultConfig() {
  HarnessConfig c;
  c.bank.n_jrs = 400;
  c.bank.dq_lim = std::numbers::pi;
  c.bank.ddq_lim = std::numbers::pi / 3;
  c.bank.r_a1 = 1.0 / 3;
  c.bank.r_a2 = std::numbers::pi / 24;
  c.planner.timing = c.bank.timing;
  return c;
}

HarnessConfig ConfigFromJson(const json& j) {
  HarnessConfig c = DefaultConfig();
  CheckKeys(j, {"timing", "jrs", "compose", "constraints", "solver", "planner", "oracle",
                "threads", "deterministic", "description"},
            "config");
  if (j.contains("timing")) {
    const json& t = j["timing"];
    CheckKeys(t, {"t_plan", "t_f", "dt"}, "timing");
    Read(t, "t_plan", &c.bank.timing.t_plan);
    Read(t, "t_f", &c.bank.timing.t_f);
    Read(t, "dt", &c.bank.timing.dt);
  }
  c.bank.timing.Validate();
  c.planner.timing = c.bank.timing;
  if (j.contains("jrs")) {
    const json& b = j["jrs"];
    CheckKeys(b, {"n_jrs", "dq_lim", "ddq_lim", "ka_center", "r_a1", "r_a2"}, "jrs");
    Read(b, "n_jrs", &c.bank.n_jrs);
    Read(b, "dq_lim", &c.bank.dq_lim);
    Read(b, "ddq_lim", &c.bank.ddq_lim);
    Read(b, "r_a1", &c.bank.r_a1);
    Read(b, "r_a2", &c.bank.r_a2);
    if (b.contains("ka_center") && util::ParseNumber(b["ka_center"]) != 0.0) {
      throw std::invalid_argument("jrs: only ka_center = 0 is supported");
    }
  }
  if (j.contains("compose")) {
    CheckKeys(j["compose"], {"n_red"}, "compose");
    Read(j["compose"], "n_red", &c.planner.compose.n_red);
  }
  if (j.contains("constraints")) {
    const json& k = j["constraints"];
    CheckKeys(k, {"margin", "n_buf", "prune"}, "constraints");
    Read(k, "margin", &c.planner.constraints.margin);
    Read(k, "n_buf", &c.planner.constraints.n_buf);
    Read(k, "prune", &c.planner.constraints.prune);
  }
  if (j.contains("solver")) {
    const json& s = j["solver"];
    CheckKeys(s, {"n_rand", "max_iterations", "internal_margin", "mu_initial", "mu_growth",
                  "mu_max", "rng_seed", "rel_tolerance", "patience"},
              "solver");
    auto& o = c.planner.solver;
    Read(s, "n_rand", &o.n_rand);
    Read(s, "max_iterations", &o.max_iterations);
    Read(s, "internal_margin", &o.internal_margin);
    Read(s, "mu_initial", &o.mu_initial);
    Read(s, "mu_growth", &o.mu_growth);
    Read(s, "mu_max", &o.mu_max);
    Read(s, "rel_tolerance", &o.rel_tolerance);
    Read(s, "patience", &o.patience);
    if (s.contains("rng_seed")) o.rng_seed = s["rng_seed"].get<std::uint64_t>();
  }
  if (j.contains("planner")) {
    const json& p = j["planner"];
    CheckKeys(p, {"hlp_step", "goal_tolerance", "stagnation_iterations", "progress_tolerance",
                  "max_iterations", "strict_real_time", "budget_override",
                  "keep_better_plan", "livelock_iterations", "settle_tolerance",
                  "settle_iterations"},
              "planner");
    auto& o = c.planner;
    Read(p, "hlp_step", &o.hlp_step);
    Read(p, "goal_tolerance", &o.goal_tolerance);
    Read(p, "stagnation_iterations", &o.stagnation_iterations);
    Read(p, "progress_tolerance", &o.progress_tolerance);
    Read(p, "max_iterations", &o.max_iterations);
    Read(p, "strict_real_time", &o.strict_real_time);
    Read(p, "keep_better_plan", &o.keep_better_plan);
    Read(p, "livelock_iterations", &o.livelock_iterations);
    Read(p, "settle_tolerance", &o.settle_tolerance);
    Read(p, "settle_iterations", &o.settle_iterations);
    if (p.contains("budget_override") && !p["budget_override"].is_null()) {
      o.budget_override = util::ParseNumber(p["budget_override"]);
    }
  }
  if (j.contains("oracle")) {
    CheckKeys(j["oracle"], {"dt"}, "oracle");
    Read(j["oracle"], "dt", &c.oracle_dt);
    if (!(c.oracle_dt > 0.0 && c.oracle_dt <= kOracleDt)) {
      throw std::invalid_argument("oracle.dt must be in (0, 1e-3]");
    }
  }
  Read(j, "threads", &c.threads);
  Read(j, "deterministic", &c.planner.solver.deterministic);
  if (c.planner.strict_real_time && c.planner.solver.deterministic) {
    throw std::invalid_argument("strict_real_time and deterministic are exclusive");
  }
  return c;
}

HarnessConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("invalid config " + path + ": " + e.what());
  }
  return ConfigFromJson(j);
}

json ToJson(const HarnessConfig& c) {
  const auto& p = c.planner;
  json out = {
      {"timing", {{"t_plan", c.bank.timing.t_plan}, {"t_f", c.bank.timing.t_f},
                  {"dt", c.bank.timing.dt}}},
      {"jrs", {{"n_jrs", c.bank.n_jrs}, {"dq_lim", c.bank.dq_lim},
               {"ddq_lim", c.bank.ddq_lim}, {"ka_center", 0.0},
               {"r_a1", c.bank.r_a1}, {"r_a2", c.bank.r_a2}}},
      {"compose", {{"n_red", p.compose.n_red}}},
      {"constraints", {{"margin", p.constraints.margin}, {"n_buf", p.constraints.n_buf},
                       {"prune", p.constraints.prune}}},
      {"solver", {{"n_rand", p.solver.n_rand}, {"max_iterations", p.solver.max_iterations},
                  {"internal_margin", p.solver.internal_margin},
                  {"mu_initial", p.solver.mu_initial}, {"mu_growth", p.solver.mu_growth},
                  {"mu_max", p.solver.mu_max}, {"rng_seed", p.solver.rng_seed},
                  {"rel_tolerance", p.solver.rel_tolerance},
                  {"patience", p.solver.patience}}},
      {"planner", {{"hlp_step", p.hlp_step}, {"goal_tolerance", p.goal_tolerance},
                   {"stagnation_iterations", p.stagnation_iterations},
                   {"progress_tolerance", p.progress_tolerance},
                   {"max_iterations", p.max_iterations},
                   {"strict_real_time", p.strict_real_time},
                   {"keep_better_plan", p.keep_better_plan},
                   {"livelock_iterations", p.livelock_iterations},
                   {"settle_tolerance", p.settle_tolerance},
                   {"settle_iterations", p.settle_iterations},
                   {"budget_override", p.budget_override ? json(*p.budget_override)
                                                         : json(nullptr)}}},
      {"oracle", {{"dt", c.oracle_dt}}},
      {"threads", c.threads},
      {"deterministic", p.solver.deterministic}};
  return out;
}

}  // namespace safearm::harness
