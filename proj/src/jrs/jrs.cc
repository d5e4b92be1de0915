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

#include "safearm/jrs/jrs.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "safearm/geom/set_ops.h"
#include "safearm/util/json_number.h"
#include "safearm/util/parallel.h"

namespace safearm::jrs {
namespace {

using geom::IndeterminateId;
using nlohmann::json;
using traj::Basis;
using traj::JointParamBox;
using traj::PositionBasis;
using traj::TimingConfig;
using util::HexDouble;

constexpr const char* kBankVersion = "1";

geom::Zonotope JrsZonotope(const JointParamBox& box, const TimingConfig& timing,
                           int n, double* error_radius) {
  const double t0 = n * timing.dt;
  const double t1 = (n + 1) * timing.dt;
  const double tc = 0.5 * (t0 + t1);
  const Basis bc = PositionBasis(tc, timing);
  const double q_bar = bc.a_v * box.kv_center + bc.a_a * box.ka_center;
  const double c = std::cos(q_bar);
  const double s = std::sin(q_bar);

  // Both basis functions are nondecreasing in t, so the interval extremes
  // sit at the endpoints.
  double delta = 0.0;
  double eta = 0.0;
  for (double t : {t0, t1}) {
    const Basis b = PositionBasis(t, timing);
    const double dv = std::abs(b.a_v - bc.a_v);
    const double da = std::abs(b.a_a - bc.a_a);
    delta = std::max(delta, dv * std::abs(box.kv_center) +
                                da * std::abs(box.ka_center) +
                                b.a_v * box.kv_halfwidth +
                                b.a_a * box.ka_halfwidth);
    eta = std::max(eta, dv * (std::abs(box.kv_center) + box.kv_halfwidth) +
                            da * (std::abs(box.ka_center) + box.ka_halfwidth));
  }
  const double eps = eta + 0.5 * delta * delta;
  *error_radius = eps;

  Eigen::VectorXd center(kJrsDim);
  center << c, s, box.kv_center, box.ka_center;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(kJrsDim, 4);
  const double wv = bc.a_v * box.kv_halfwidth;
  const double wa = bc.a_a * box.ka_halfwidth;
  g.col(kVelGen) << -s * wv, c * wv, box.kv_halfwidth, 0.0;
  g.col(kAccGen) << -s * wa, c * wa, 0.0, box.ka_halfwidth;
  g(0, kCosErrGen) = eps;
  g(1, kSinErrGen) = eps;
  const auto uid = static_cast<std::uint64_t>(2 * n);
  return geom::Zonotope(center, g,
                        {IndeterminateId::Kv(0), IndeterminateId::Ka(0),
                         IndeterminateId::Generic(uid),
                         IndeterminateId::Generic(uid + 1)});
}

double ParseDouble(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) throw BankFormatError("bank: expected number");
  const std::string s = j.get<std::string>();
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw BankFormatError("bank: bad number '" + s + "'");
  }
  return v;
}

json HexVector(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(HexDouble(v(i)));
  return out;
}

Eigen::VectorXd ParseVector(const json& j, int expected) {
  if (!j.is_array() || static_cast<int>(j.size()) != expected) {
    throw BankFormatError("bank: vector of wrong length");
  }
  Eigen::VectorXd v(expected);
  for (int i = 0; i < expected; ++i) v(i) = ParseDouble(j[i]);
  return v;
}

json TimingJson(const TimingConfig& t) {
  return {{"t_plan", HexDouble(t.t_plan)},
          {"t_f", HexDouble(t.t_f)},
          {"dt", HexDouble(t.dt)}};
}

TimingConfig ParseTiming(const json& j) {
  TimingConfig t;
  t.t_plan = ParseDouble(j.at("t_plan"));
  t.t_f = ParseDouble(j.at("t_f"));
  t.dt = ParseDouble(j.at("dt"));
  return t;
}

json SequenceJson(const JrsSequence& seq) {
  json zonos = json::array();
  for (std::size_t n = 0; n < seq.zonos.size(); ++n) {
    const geom::Zonotope& z = seq.zonos[n];
    json gens = json::array();
    for (int i = 0; i < z.num_generators(); ++i) {
      gens.push_back({{"vec", HexVector(z.generators().col(i))},
                      {"id", geom::ToJson(z.ids()[i])}});
    }
    zonos.push_back({{"center", HexVector(z.center())},
                     {"generators", gens},
                     {"error_radius", HexDouble(seq.error_radius[n])}});
  }
  return {{"kv_center", HexDouble(seq.box.kv_center)},
          {"kv_halfwidth", HexDouble(seq.box.kv_halfwidth)},
          {"ka_center", HexDouble(seq.box.ka_center)},
          {"ka_halfwidth", HexDouble(seq.box.ka_halfwidth)},
          {"zonos", zonos}};
}

JrsSequence ParseSequence(const json& j, const TimingConfig& timing) {
  JrsSequence seq;
  seq.timing = timing;
  seq.box.kv_center = ParseDouble(j.at("kv_center"));
  seq.box.kv_halfwidth = ParseDouble(j.at("kv_halfwidth"));
  seq.box.ka_center = ParseDouble(j.at("ka_center"));
  seq.box.ka_halfwidth = ParseDouble(j.at("ka_halfwidth"));
  for (const json& zj : j.at("zonos")) {
    const json& gens = zj.at("generators");
    Eigen::MatrixXd g(kJrsDim, gens.size());
    std::vector<IndeterminateId> ids;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      g.col(i) = ParseVector(gens[i].at("vec"), kJrsDim);
      ids.push_back(geom::IdFromJson(gens[i].at("id")));
    }
    seq.zonos.emplace_back(ParseVector(zj.at("center"), kJrsDim), g, ids);
    seq.error_radius.push_back(ParseDouble(zj.at("error_radius")));
  }
  if (static_cast<int>(seq.zonos.size()) != timing.num_steps()) {
    throw BankFormatError("bank: sequence length does not match timing");
  }
  return seq;
}

std::vector<double> Boundaries(int n, double dq_lim) {
  std::vector<double> b(n + 1);
  for (int i = 0; i <= n; ++i) b[i] = -dq_lim + 2.0 * dq_lim * i / n;
  b[n] = dq_lim;
  return b;
}

}  // namespace

JrsSequence ComputeJrs(const JointParamBox& box, const TimingConfig& timing) {
  timing.Validate();
  if (box.kv_halfwidth < 0.0 || box.ka_halfwidth < 0.0) {
    throw std::invalid_argument("ComputeJrs: negative half-width");
  }
  JrsSequence seq;
  seq.timing = timing;
  seq.box = box;
  const int steps = timing.num_steps();
  seq.zonos.reserve(steps);
  seq.error_radius.resize(steps);
  for (int n = 0; n < steps; ++n) {
    seq.zonos.push_back(JrsZonotope(box, timing, n, &seq.error_radius[n]));
  }
  return seq;
}

ContainmentReport ValidateContainment(const JrsSequence& seq, int n_samples,
                                      std::uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> ut(0.0, seq.timing.t_f);
  std::uniform_real_distribution<double> uv(seq.box.kv_lo(), seq.box.kv_hi());
  std::uniform_real_distribution<double> ua(seq.box.ka_lo(), seq.box.ka_hi());
  const int steps = static_cast<int>(seq.zonos.size());
  ContainmentReport report;
  for (int s = 0; s < n_samples; ++s) {
    const double t = ut(rng);
    const double kv = seq.box.kv_halfwidth > 0 ? uv(rng) : seq.box.kv_center;
    const double ka = seq.box.ka_halfwidth > 0 ? ua(rng) : seq.box.ka_center;
    const int n = std::clamp(static_cast<int>(t / seq.timing.dt), 0, steps - 1);
    const double q = traj::JointPosition(kv, ka, 0.0, t, seq.timing);
    Eigen::VectorXd p(kJrsDim);
    p << std::cos(q), std::sin(q), kv, ka;
    const geom::Zonotope& z = seq.zonos[n];
    ++report.samples;
    if (!geom::ContainsPoint(z, p)) ++report.violations;
    report.max_margin = std::max(report.max_margin, geom::Gauge(z, p) - 1.0);
  }
  return report;
}

int JrsBank::IntervalIndex(double dq0) const {
  const double lim = params.dq_lim;
  if (!(std::abs(dq0) <= lim)) {
    throw std::out_of_range("SelectJrs: |dq0| exceeds dq_lim");
  }
  const int n = static_cast<int>(sequences.size());
  int i = static_cast<int>(std::ceil((dq0 + lim) * n / (2.0 * lim))) - 1;
  i = std::clamp(i, 0, n - 1);
  // Settle rounding against the stored boundaries: smallest i with
  // dq0 <= boundaries[i + 1].
  while (i > 0 && dq0 <= boundaries[i]) --i;
  while (i < n - 1 && dq0 > boundaries[i + 1]) ++i;
  return i;
}

JrsBank BuildBank(const BankParams& params, int validation_samples,
                  int num_threads) {
  if (params.n_jrs < 1) throw std::invalid_argument("BuildBank: n_JRS < 1");
  if (!(params.dq_lim > 0.0)) throw std::invalid_argument("BuildBank: dq_lim");
  params.timing.Validate();
  JrsBank bank;
  bank.params = params;
  bank.boundaries = Boundaries(params.n_jrs, params.dq_lim);
  bank.sequences.resize(params.n_jrs);
  std::vector<ContainmentReport> reports(params.n_jrs);
  util::ParallelFor(params.n_jrs, num_threads, [&](int i) {
    const double lo = bank.boundaries[i];
    const double hi = bank.boundaries[i + 1];
    const JointParamBox box = traj::BuildParamBox(
        0.5 * (lo + hi), 0.5 * (hi - lo), params.ddq_lim, params.r_a1,
        params.r_a2);
    bank.sequences[i] = ComputeJrs(box, params.timing);
    if (validation_samples > 0) {
      reports[i] = ValidateContainment(bank.sequences[i], validation_samples,
                                       0x5eed0000ULL + i);
    }
  });
  for (int i = 0; i < params.n_jrs; ++i) {
    if (reports[i].violations > 0) {
      std::ostringstream msg;
      msg << "BuildBank: containment failed for interval " << i << " ["
          << bank.boundaries[i] << ", " << bank.boundaries[i + 1] << "] ("
          << reports[i].violations << " violations)";
      throw std::runtime_error(msg.str());
    }
  }
  return bank;
}

const JrsSequence& SelectJrs(const JrsBank& bank, double dq0) {
  return bank.sequences[bank.IntervalIndex(dq0)];
}

void SaveBank(const JrsBank& bank, const std::string& path) {
  json seqs = json::array();
  for (const auto& s : bank.sequences) seqs.push_back(SequenceJson(s));
  json bounds = json::array();
  for (double b : bank.boundaries) bounds.push_back(HexDouble(b));
  const json doc = {
      {"version", kBankVersion},
      {"timing", TimingJson(bank.params.timing)},
      {"n_JRS", bank.params.n_jrs},
      {"dq_lim", HexDouble(bank.params.dq_lim)},
      {"hyperparams",
       {{"ddq_lim", HexDouble(bank.params.ddq_lim)},
        {"r_a1", HexDouble(bank.params.r_a1)},
        {"r_a2", HexDouble(bank.params.r_a2)}}},
      {"boundaries", bounds},
      {"sequences", seqs}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("SaveBank: cannot open " + path);
  out << doc.dump();
  if (!out) throw std::runtime_error("SaveBank: write failed for " + path);
}

JrsBank LoadBank(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("LoadBank: cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw BankFormatError(std::string("LoadBank: malformed file: ") + e.what());
  }
  try {
    if (!doc.contains("version") || doc["version"] != kBankVersion) {
      throw BankFormatError("LoadBank: unsupported bank version " +
                            (doc.contains("version") ? doc["version"].dump()
                                                     : std::string("<none>")));
    }
    JrsBank bank;
    bank.params.timing = ParseTiming(doc.at("timing"));
    bank.params.timing.Validate();
    bank.params.n_jrs = doc.at("n_JRS").get<int>();
    bank.params.dq_lim = ParseDouble(doc.at("dq_lim"));
    const json& hp = doc.at("hyperparams");
    bank.params.ddq_lim = ParseDouble(hp.at("ddq_lim"));
    bank.params.r_a1 = ParseDouble(hp.at("r_a1"));
    bank.params.r_a2 = ParseDouble(hp.at("r_a2"));
    for (const json& b : doc.at("boundaries")) {
      bank.boundaries.push_back(ParseDouble(b));
    }
    for (const json& s : doc.at("sequences")) {
      bank.sequences.push_back(ParseSequence(s, bank.params.timing));
    }
    if (static_cast<int>(bank.sequences.size()) != bank.params.n_jrs ||
        static_cast<int>(bank.boundaries.size()) != bank.params.n_jrs + 1) {
      throw BankFormatError("LoadBank: sequence count does not match n_JRS");
    }
    return bank;
  } catch (const json::exception& e) {
    throw BankFormatError(std::string("LoadBank: malformed file: ") + e.what());
  }
}

}  // namespace safearm::jrs
