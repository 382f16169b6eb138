// SPDX-License-Identifier: Apache-2.0
#include "iegirs/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace iegirs {

double norm(const Vec3& v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

std::string_view to_string(Scenario s) {
  return s == Scenario::obscured ? "obscured" : "unobscured";
}

std::string_view to_string(GroupingMethod m) {
  switch (m) {
    case GroupingMethod::qp: return "qp";
    case GroupingMethod::phase_partition: return "phase-partition";
    case GroupingMethod::knn: return "knn";
    case GroupingMethod::adjacent: return "adjacent";
    case GroupingMethod::identity: return "identity";
  }
  return "?";
}

std::string_view to_string(InitMode m) { return m == InitMode::heuristic ? "heuristic" : "random"; }

std::string_view to_string(SchemeId s) {
  switch (s) {
    case SchemeId::ieg: return "ieg";
    case SchemeId::aeg: return "aeg";
    case SchemeId::uirs_q: return "uirs_q";
    case SchemeId::random_rcv: return "random_rcv";
    case SchemeId::no_irs: return "no_irs";
  }
  return "?";
}

Scenario parse_scenario(std::string_view s) {
  if (s == "obscured") return Scenario::obscured;
  if (s == "unobscured") return Scenario::unobscured;
  throw std::invalid_argument("unknown scenario '" + std::string(s) + "'");
}

GroupingMethod parse_grouping_method(std::string_view s) {
  if (s == "qp") return GroupingMethod::qp;
  if (s == "phase-partition" || s == "phase_partition") return GroupingMethod::phase_partition;
  if (s == "knn") return GroupingMethod::knn;
  if (s == "adjacent") return GroupingMethod::adjacent;
  if (s == "identity") return GroupingMethod::identity;
  throw std::invalid_argument("unknown grouping method '" + std::string(s) + "'");
}

InitMode parse_init_mode(std::string_view s) {
  if (s == "heuristic") return InitMode::heuristic;
  if (s == "random") return InitMode::random;
  throw std::invalid_argument("unknown init mode '" + std::string(s) + "'");
}

SchemeId parse_scheme(std::string_view s) {
  if (s == "ieg") return SchemeId::ieg;
  if (s == "aeg") return SchemeId::aeg;
  if (s == "uirs_q") return SchemeId::uirs_q;
  if (s == "random_rcv") return SchemeId::random_rcv;
  if (s == "no_irs") return SchemeId::no_irs;
  throw std::invalid_argument("unknown scheme id '" + std::string(s) + "'");
}

std::vector<double> ScenarioConfig::user_weights() const {
  if (weights.empty()) return std::vector<double>(K, 1.0);
  return weights;
}

double ScenarioConfig::power_watts() const { return dbm_to_watts(power_dbm); }
double ScenarioConfig::noise_watts() const { return dbm_to_watts(noise_dbm); }

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("ScenarioConfig: " + msg); };
  if (M == 0 || K == 0 || N == 0 || Q == 0) fail("M, K, N and Q must be positive");
  if (Q > Q0) fail("Q must not exceed the pilot budget Q0");
  if (Q0 > N) fail("Q0 must not exceed N");
  if (trials == 0) fail("trials must be >= 1");
  if (!weights.empty()) {
    if (weights.size() != K) fail("weights must have K entries");
    for (double w : weights) {
      if (!(w > 0.0)) fail("weights must be positive");
    }
  }
  if (kappa_bi < 0 || kappa_iu < 0 || kappa_bu < 0) fail("Rician factors must be >= 0");
  if (!(geometry.user_radius >= 0.0)) fail("user radius must be >= 0");
  if (schemes.empty()) fail("scheme list is empty");
  if (!std::isfinite(power_dbm) || !std::isfinite(noise_dbm)) fail("power and noise must be finite");
}

namespace {

using nlohmann::json;

Vec3 parse_vec3(const json& j, const char* key) {
  if (!j.is_array() || j.size() != 3) {
    throw std::invalid_argument(std::string("config: '") + key + "' must be a 3-element array");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const char* where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* a : allowed) known = known || it.key() == a;
    if (!known) throw std::invalid_argument(std::string("config: unknown key '") + it.key() + "' in " + where);
  }
}

}  // namespace

ScenarioConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (!root.is_object()) throw std::invalid_argument("config: top level must be an object");
  reject_unknown(root,
                 {"M", "K", "N", "Q", "Q0", "irs_layout", "positions", "radius", "kappas", "noise_dbm",
                  "power_dbm", "scenario", "seed", "trials", "weights", "schemes", "solver", "threads",
                  "record_timing"},
                 "top level");

  ScenarioConfig cfg;
  try {
    if (root.contains("M")) cfg.M = root["M"].get<std::size_t>();
    if (root.contains("K")) cfg.K = root["K"].get<std::size_t>();
    if (root.contains("N")) cfg.N = root["N"].get<std::size_t>();
    if (root.contains("Q")) cfg.Q = root["Q"].get<std::size_t>();
    cfg.Q0 = root.contains("Q0") ? root["Q0"].get<std::size_t>() : cfg.Q;
    if (root.contains("irs_layout")) {
      const auto layout = root["irs_layout"].get<std::string>();
      if (layout != "planar" && layout != "linear") throw std::invalid_argument("config: irs_layout");
      cfg.irs_planar = layout == "planar";
    }
    if (root.contains("positions")) {
      const auto& p = root["positions"];
      reject_unknown(p, {"bs", "irs", "user_center"}, "positions");
      if (p.contains("bs")) cfg.geometry.bs = parse_vec3(p["bs"], "positions.bs");
      if (p.contains("irs")) cfg.geometry.irs = parse_vec3(p["irs"], "positions.irs");
      if (p.contains("user_center")) cfg.geometry.user_center = parse_vec3(p["user_center"], "positions.user_center");
    }
    if (root.contains("radius")) cfg.geometry.user_radius = root["radius"].get<double>();
    if (root.contains("kappas")) {
      const auto& k = root["kappas"];
      reject_unknown(k, {"bi", "iu", "bu"}, "kappas");
      if (k.contains("bi")) cfg.kappa_bi = k["bi"].get<double>();
      if (k.contains("iu")) cfg.kappa_iu = k["iu"].get<double>();
      if (k.contains("bu")) cfg.kappa_bu = k["bu"].get<double>();
    }
    if (root.contains("noise_dbm")) cfg.noise_dbm = root["noise_dbm"].get<double>();
    if (root.contains("power_dbm")) cfg.power_dbm = root["power_dbm"].get<double>();
    if (root.contains("scenario")) cfg.scenario = parse_scenario(root["scenario"].get<std::string>());
    if (root.contains("seed")) cfg.master_seed = root["seed"].get<std::uint64_t>();
    if (root.contains("trials")) cfg.trials = root["trials"].get<std::size_t>();
    if (root.contains("weights")) cfg.weights = root["weights"].get<std::vector<double>>();
    if (root.contains("schemes")) {
      cfg.schemes.clear();
      for (const auto& s : root["schemes"]) cfg.schemes.push_back(parse_scheme(s.get<std::string>()));
    }
    if (root.contains("threads")) cfg.threads = root["threads"].get<std::size_t>();
    if (root.contains("record_timing")) cfg.record_timing = root["record_timing"].get<bool>();
    if (root.contains("solver")) {
      const auto& s = root["solver"];
      reject_unknown(s,
                     {"tol", "max_outer", "max_inner_mm", "mm_tol", "init", "init_seed", "grouping",
                      "qp_regularization", "regroup_pass", "extrapolate"},
                     "solver");
      auto& o = cfg.solver;
      if (s.contains("tol")) o.tol = s["tol"].get<double>();
      if (s.contains("max_outer")) o.max_outer = s["max_outer"].get<int>();
      if (s.contains("max_inner_mm")) o.max_inner_mm = s["max_inner_mm"].get<int>();
      if (s.contains("mm_tol")) o.mm_tol = s["mm_tol"].get<double>();
      if (s.contains("init")) o.init = parse_init_mode(s["init"].get<std::string>());
      if (s.contains("init_seed")) o.init_seed = s["init_seed"].get<std::uint64_t>();
      if (s.contains("grouping")) o.grouping = parse_grouping_method(s["grouping"].get<std::string>());
      if (s.contains("qp_regularization")) o.qp_regularization = s["qp_regularization"].get<double>();
      if (s.contains("regroup_pass")) o.regroup_pass = s["regroup_pass"].get<bool>();
      if (s.contains("extrapolate")) o.extrapolate = s["extrapolate"].get<bool>();
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace iegirs
