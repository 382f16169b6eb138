// SPDX-License-Identifier: Apache-2.0
// iegirs command-line tool: simulate, sweep, asymptotics, validate.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "iegirs/asymptotics.hpp"
#include "iegirs/config.hpp"
#include "iegirs/criteria.hpp"
#include "iegirs/harness.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> threads;
  std::string out;
  std::string summary;
  std::string artifacts;
  bool full_scale = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "JSON scenario configuration")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "Master seed");
  cmd->add_option("--trials", f.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
  cmd->add_option("--out", f.out, "Per-trial CSV path (default: stdout)");
  cmd->add_option("--summary", f.summary, "Mean and standard error CSV path");
  cmd->add_option("--artifacts", f.artifacts, "JSON-lines file with grouping, phases and precoder per row");
  cmd->add_flag("--full-scale", f.full_scale, "Use the full N = 10000 surface");
}

iegirs::ScenarioConfig resolve(const CommonFlags& f) {
  iegirs::ScenarioConfig cfg = f.config.empty() ? iegirs::ScenarioConfig{} : iegirs::load_config(f.config);
  if (f.seed) cfg.master_seed = *f.seed;
  if (f.trials) cfg.trials = *f.trials;
  if (f.threads) cfg.threads = *f.threads;
  if (f.full_scale) cfg.N = 10000;
  cfg.validate();
  return cfg;
}

template <class Writer>
void emit(const std::string& path, Writer&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(out);
}

int report(const iegirs::SweepReport& rep, const CommonFlags& f) {
  emit(f.out, [&](std::ostream& o) { iegirs::write_trials_csv(o, rep.rows); });
  if (!f.summary.empty()) emit(f.summary, [&](std::ostream& o) { iegirs::write_summary_csv(o, rep.aggregates); });
  if (!f.artifacts.empty()) emit(f.artifacts, [&](std::ostream& o) { iegirs::write_artifacts_jsonl(o, rep.rows); });
  for (const auto& a : rep.aggregates) {
    std::fprintf(stderr, "%-10s axis=%-8g trials=%-3zu WSR %.4f +- %.4f bps/Hz\n",
                 std::string(iegirs::to_string(a.scheme)).c_str(), a.axis_value, a.count, a.mean, a.standard_error);
  }
  std::fprintf(stderr, "wall clock %.1f s\n", rep.wall_ms / 1000.0);
  if (rep.failure) {
    std::fprintf(stderr, "error: %s (partial results written)\n", rep.failure->c_str());
    return 1;
  }
  return 0;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double x = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad value '" + item + "'");
    v.push_back(x);
  }
  if (v.empty()) throw std::invalid_argument("--values needs at least one number");
  return v;
}

int run_asymptotics(std::size_t trials, std::uint64_t seed, std::size_t threads, const std::string& out) {
  using namespace iegirs;
  std::ostringstream csv;
  csv << "quantity,N,Q,kappa_bi,kappa_iu,closed_form,monte_carlo,std_error,relative_error\n";
  auto row = [&](const char* what, std::size_t n, std::size_t q, double k, double closed, double mc, double se) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", what, n, q, k, k, closed, mc,
                  se, std::abs(mc - closed) / std::abs(closed));
    csv << buf;
  };
  for (double k : {0.0, 1.0, 10.0}) {
    const GainEstimate g = uirs_gain_monte_carlo(4096, k, k, trials, seed, threads);
    row("uirs_gain_per_q2", 4096, 4096, k, g.closed_form, g.empirical, g.standard_error);
  }
  for (std::size_t q : {std::size_t{1}, std::size_t{4}}) {
    for (std::size_t n : {std::size_t{256}, std::size_t{1024}, std::size_t{4096}, std::size_t{16384}}) {
      const GainEstimate g = grouped_gain_monte_carlo(AsymptoticInputs::make(n, q, 10.0, 10.0), trials, seed,
                                                      0.70710678118654752440, threads);
      row("ieg_gain", n, q, 10.0, g.closed_form, g.empirical, g.standard_error);
    }
  }
  const AsymptoticInputs lin = AsymptoticInputs::make(8192, 4, 10.0, 10.0);
  const Lemma1Report lr = validate_lemma1_monte_carlo(lin, std::max<std::size_t>(trials, 2), seed,
                                                      0.70710678118654752440, threads);
  for (Eigen::Index q = 0; q < lr.expected.mean.size(); ++q) {
    row("lemma1_mean_modulus", 8192, 4, 10.0, std::abs(lr.expected.mean[q]), std::abs(lr.empirical_mean[q]), 0.0);
    row("lemma1_variance", 8192, 4, 10.0, lr.expected.variance, lr.empirical_variance[q], 0.0);
  }
  for (double k : {1.0, 10.0, 100.0}) {
    for (double mu : {100.0, 1000.0, 10000.0}) {
      const std::size_t qi = 10000;
      const auto n = static_cast<std::size_t>(mu) * qi;
      const AsymptoticInputs in = AsymptoticInputs::make(n, qi, k, k);
      row("performance_loss", n, qi, k, performance_loss(k, k, mu), 1.0 - ieg_gain(in) / uirs_gain(n, in), 0.0);
    }
  }
  emit(out, [&](std::ostream& o) { o << csv.str(); });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Element-grouping IRS simulator"};
  app.require_subcommand(1);

  CommonFlags sim_flags;
  CLI::App* simulate = app.add_subcommand("simulate", "Run every configured scheme over seeded trials");
  add_common(simulate, sim_flags);

  CommonFlags sweep_flags;
  std::string axis;
  std::string values;
  CLI::App* sweep = app.add_subcommand("sweep", "Sweep one scenario parameter");
  add_common(sweep, sweep_flags);
  sweep->add_option("--axis", axis, "groups | elements | distance | power")
      ->required()
      ->check(CLI::IsMember({"groups", "elements", "distance", "power"}));
  sweep->add_option("--values", values, "Comma-separated axis values")->required();

  std::size_t asym_trials = 100;
  std::uint64_t asym_seed = 1;
  std::size_t asym_threads = 1;
  std::string asym_out;
  CLI::App* asym = app.add_subcommand("asymptotics", "Closed-form versus Monte Carlo table as CSV");
  asym->add_option("--trials", asym_trials, "Monte Carlo trials per row")->check(CLI::PositiveNumber);
  asym->add_option("--seed", asym_seed, "Seed");
  asym->add_option("--threads", asym_threads, "Worker threads");
  asym->add_option("--out", asym_out, "CSV path (default: stdout)");

  std::string criteria;
  std::size_t val_threads = 1;
  CLI::App* validate = app.add_subcommand("validate", "Run the acceptance criteria; nonzero exit on any FAIL");
  validate->add_option("--criteria", criteria, "Comma-separated criterion ids (default: all)");
  validate->add_option("--threads", val_threads, "Worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      return report(iegirs::run_monte_carlo(resolve(sim_flags)), sim_flags);
    }
    if (sweep->parsed()) {
      const iegirs::ScenarioConfig cfg = resolve(sweep_flags);
      return report(iegirs::sweep(iegirs::parse_axis(axis), parse_values(values), cfg), sweep_flags);
    }
    if (asym->parsed()) {
      return run_asymptotics(asym_trials, asym_seed, asym_threads, asym_out);
    }
    if (validate->parsed()) {
      iegirs::validation::CriteriaOptions opt;
      opt.threads = val_threads;
      std::error_code ec;
      const auto self = std::filesystem::read_symlink("/proc/self/exe", ec);
      if (!ec) opt.cli_path = self.string();
      opt.work_dir = std::filesystem::temp_directory_path().string();
      std::vector<int> ids;
      for (double v : criteria.empty() ? std::vector<double>{} : parse_values(criteria)) ids.push_back(static_cast<int>(v));
      bool all = true;
      for (int id : ids.empty() ? std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12} : ids) {
        const auto r = iegirs::validation::run_criterion(id, opt);
        std::cout << iegirs::validation::format_line(r) << std::endl;
        all = all && r.pass;
      }
      return all ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
