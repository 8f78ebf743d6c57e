#include "dstsp/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <memory>
#include <numbers>
#include <variant>

#include "CLI11.hpp"
#include "dstsp/agility.hpp"
#include "dstsp/bounds.hpp"
#include "dstsp/cbo.hpp"
#include "dstsp/error.hpp"
#include "dstsp/hcp.hpp"
#include "dstsp/hcs.hpp"
#include "dstsp/parallel.hpp"
#include "dstsp/planner.hpp"
#include "dstsp/report.hpp"
#include "dstsp/stats.hpp"
#include "json.hpp"

namespace dstsp::cli {
namespace {

using json = nlohmann::ordered_json;
using report::Field;
using C = ExperimentConfig;

using Member = std::variant<std::string C::*, double C::*, std::uint64_t C::*, unsigned C::*, bool C::*,
                            std::vector<std::uint64_t> C::*, std::vector<double> C::*>;

struct FieldSpec {
  const char* key;
  const char* flag;
  Member member;
  const char* help;
};

const std::vector<FieldSpec>& field_specs() {
  static const std::vector<FieldSpec> specs{
      {"model", "--model", &C::model, "dynamics model id"},
      {"r_min", "--r-min", &C::r_min, "minimum turning radius (reeds_shepp)"},
      {"c_pi", "--c-pi", &C::c_pi, "speed bound"},
      {"sigma", "--sigma", &C::sigma, "scale field: <value> or <x_split>:<left>:<right>"},
      {"v_max", "--v-max", &C::v_max, "diff_drive linear speed bound"},
      {"omega_max", "--omega-max", &C::omega_max, "diff_drive turn rate bound"},
      {"density", "--density", &C::density, "uniform | linear | worst | anti | file:<grid.json>"},
      {"n", "--n", &C::n, "target counts, ascending"},
      {"seeds", "--seeds", &C::seeds, "trials per setting"},
      {"seed", "--seed", &C::seed, "base seed"},
      {"delta", "--delta", &C::delta, "bound slack"},
      {"zeta", "--zeta", &C::zeta, "regularization parameter"},
      {"eps0", "--eps0", &C::eps0, "root cell radius (0 picks it from n)"},
      {"c0", "--c0", &C::c0, "eps0 = c0 n^(-1/gamma) when eps0 is 0"},
      {"threads", "--threads", &C::threads, "worker threads (0: DSTSP_LAB_THREADS or all cores)"},
      {"assert", "--assert", &C::assert_properties, "exit nonzero when a checked property fails"},
      {"out", "--out", &C::out, "output path, - for stdout"},
      {"format", "--format", &C::format, "csv or json"},
      {"samples", "--samples", &C::samples, "Monte Carlo samples"},
      {"lambda", "--lambda", &C::lambda, "orienteering budgets"},
      {"m", "--m", &C::m, "bin counts"},
      {"exponents", "--exponents", &C::exponents, "moment exponents in (0, 1]"},
      {"trials", "--trials", &C::trials, "balls-in-bins trials"},
      {"instance", "--instance", &C::instance, "HCP instance JSON"},
      {"plan_out", "--plan-out", &C::plan_out, "where to write the HCP plan JSON"},
      {"b", "--b", &C::b, "branching factor (0 measures it)"},
      {"beta", "--beta", &C::beta, "lower constant (0 derives it from b)"},
      {"s", "--s", &C::s, "HCS scale"},
      {"alpha", "--alpha", &C::alpha, "HCS efficiency (0 measures it)"},
      {"gamma", "--gamma", &C::gamma, "small-time constraint factor (0 uses the model's)"},
      {"J", "--J", &C::J, "interaction integral"},
      {"int_g_inv", "--int-g-inv", &C::int_g_inv, "integral of 1/g"},
  };
  return specs;
}

[[noreturn]] void field_error(const std::string& key, const std::string& what) {
  fail(ErrorKind::ConfigError, "field '" + key + "': " + what);
}

template <class T>
void read_field(const json& j, const std::string& key, T& out) {
  if constexpr (std::is_same_v<T, std::string>) {
    if (!j.is_string()) field_error(key, "expected a string");
    out = j.get<std::string>();
  } else if constexpr (std::is_same_v<T, bool>) {
    if (!j.is_boolean()) field_error(key, "expected true or false");
    out = j.get<bool>();
  } else if constexpr (std::is_same_v<T, double>) {
    if (!j.is_number()) field_error(key, "expected a number");
    out = j.get<double>();
  } else if constexpr (std::is_unsigned_v<T>) {
    if (!j.is_number_unsigned()) field_error(key, "expected a nonnegative integer");
    out = j.get<T>();
  } else {
    if (!j.is_array()) field_error(key, "expected an array");
    out.clear();
    for (std::size_t i = 0; i < j.size(); ++i) {
      typename T::value_type v{};
      read_field(j[i], key + "[" + std::to_string(i) + "]", v);
      out.push_back(v);
    }
  }
}

hcs::Box unit_support(const DynamicsModel& model) { return hcs::Box::unit(model.workspace_dim()); }

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

double model_gamma(const ExperimentConfig& cfg, const DynamicsModel& model) {
  return cfg.gamma > 0.0 ? cfg.gamma : static_cast<double>(model.gamma());
}

// Constant g for translation- and rotation-invariant models without a closed form.
double estimated_g(const ExperimentConfig& cfg, const DynamicsModel& model, unsigned threads) {
  const double eps = 0.05;
  Rng rng = Rng::substream(cfg.seed, 0x6167);
  const double vol = agility::reachable_volume(model, lift(model, {0.5, 0.5, 0.5}), eps, cfg.samples, rng,
                                               {20.0, threads});
  return vol / std::pow(eps, model.gamma());
}

GridField g_field(const ExperimentConfig& cfg, const DynamicsModel& model, const GridField& grid, unsigned threads) {
  if (agility::has_analytic_agility(model)) return agility::analytic_agility_field(model, grid);
  GridField g = grid;
  std::fill(g.values.begin(), g.values.end(), estimated_g(cfg, model, threads));
  return g;
}

double g_at(const ExperimentConfig& cfg, const DynamicsModel& model, const WorkspacePoint& x, unsigned threads) {
  return agility::has_analytic_agility(model) ? agility::analytic_agility(model, x) : estimated_g(cfg, model, threads);
}

double measured_alpha(const ExperimentConfig& cfg, const DynamicsModel& model, const Configuration& anchor, double eps,
                      unsigned threads) {
  const auto cell = hcs::build_hcs(model, anchor, eps, 0);
  Rng rng = Rng::substream(cfg.seed, 0xa1fa);
  return hcs::measure_alpha(cell, model, g_at(cfg, model, project(model, anchor), threads), 4000, rng).alpha;
}

double resolved_beta(const ExperimentConfig& cfg, const DynamicsModel& model, double gamma, double eps) {
  if (cfg.beta > 0.0) return cfg.beta;
  const double b = cfg.b > 0.0 ? cfg.b : static_cast<double>(hcs::measured_branching(model, eps));
  return bounds::beta_constant(b, gamma, model.symmetric()).beta;
}

struct Manifest {
  json inputs = json::object();
  std::vector<std::string> outputs;
};

void write_manifest(const ExperimentConfig& cfg, const Manifest& m) {
  if (cfg.out == "-") return;
  json doc;
  doc["tool"] = "dstsp_lab";
  doc["subcommand"] = cfg.subcommand;
  doc["config"] = json::parse(cfg.to_json());
  json inputs = m.inputs;
  inputs["config"] = report::git_blob_hash(cfg.to_json());
  doc["inputs"] = inputs;
  json outs = json::object();
  for (const auto& p : m.outputs) outs[p] = report::git_blob_hash(report::read_file(p));
  doc["outputs"] = outs;
  report::write_file(cfg.out + ".manifest.json", doc.dump(2) + "\n");
}

std::vector<std::string> tour_header() {
  return {"seed", "model", "density", "n", "tour_time", "J", "ratio", "eps0", "alpha_hat"};
}

int run_tours(const ExperimentConfig& cfg, std::ostream& log, const std::vector<std::string>& densities,
              Manifest& manifest) {
  const unsigned threads = resolve_threads(cfg.threads);
  const auto model = make_model(cfg);
  const auto support = unit_support(model);
  const double gamma = model.gamma();
  const bool cube = model.workspace_dim() == 3;
  const auto grid = GridField::unit_square(64);
  const GridField g = g_field(cfg, model, grid, threads);

  std::vector<GridField> fields;
  for (const auto& d : densities) {
    if (cube && d != "uniform") fail(ErrorKind::ConfigError, "field 'density': only uniform is supported in 3-D");
    ExperimentConfig c = cfg;
    c.density = d;
    fields.push_back(make_density(c, g));
    if (d.rfind("file:", 0) == 0) manifest.inputs["density"] = report::git_blob_hash(report::read_file(d.substr(5)));
  }

  report::ReportWriter out(cfg.out, report::parse_format(cfg.format), tour_header());
  bool ok = true;
  for (std::uint64_t n : cfg.n) {
    const double eps0 = cfg.eps0 > 0.0 ? cfg.eps0 : planner::choose_eps0(model, support, n, cfg.c0);
    planner::DstspPlanner planner(model, hcs::build_cover(model, support, eps0));
    const auto& cover = planner.cover();
    const double alpha = measured_alpha(cfg, model, cover.roots.front().anchor, eps0, threads);
    const double beta = resolved_beta(cfg, model, gamma, eps0);
    const double lo = (1.0 - cfg.delta) / beta;
    const double hi = (1.0 + cfg.delta) * 12.0 * cover.s * std::pow(alpha, -1.0 / gamma);
    std::vector<double> medians;
    for (std::size_t d = 0; d < densities.size(); ++d) {
      const double J = cube ? std::pow(agility::analytic_agility(model, {0.5, 0.5, 0.5}), -1.0 / gamma)
                            : bounds::interaction_integral(fields[d], g, gamma);
      std::vector<double> times(cfg.seeds);
      parallel_for(cfg.seeds, threads, [&](std::size_t s) {
        Rng rng = Rng::substream(cfg.seed + s, n);
        std::vector<WorkspacePoint> targets;
        if (cube) {
          targets.resize(n);
          for (auto& x : targets) x = {rng.uniform(), rng.uniform(), rng.uniform()};
        } else {
          targets = bounds::sample_density(fields[d], n, rng);
        }
        times[s] = planner.solve(targets, {false, 1}).total_time;
      });
      const double scale = std::pow(static_cast<double>(n), 1.0 - 1.0 / gamma) * J;
      for (std::size_t s = 0; s < cfg.seeds; ++s) {
        const double ratio = times[s] / scale;
        if (ratio < lo || ratio > hi) ok = false;
        out.row({static_cast<std::int64_t>(cfg.seed + s), model.id(), densities[d], static_cast<std::int64_t>(n),
                 times[s], J, ratio, eps0, alpha});
      }
      medians.push_back(median(times));
    }
    if (densities.size() == 3 && densities[0] == "worst" && !(medians[0] > medians[1] && medians[0] > medians[2])) {
      log << "worst-case density did not give the longest median tour at n = " << n << "\n";
      ok = false;
    }
  }
  out.close();
  manifest.outputs.push_back(cfg.out);
  return ok ? 0 : 1;
}

int run_estimate_agility(const ExperimentConfig& cfg, Manifest& manifest) {
  const unsigned threads = resolve_threads(cfg.threads);
  const auto model = make_model(cfg);
  const WorkspacePoint x{0.5, 0.5, 0.5};
  Rng rng = Rng::substream(cfg.seed, 0);
  const auto est = agility::estimate_gamma(model, lift(model, x), agility::eps_ladder(cfg.eps0 > 0 ? cfg.eps0 : 0.1),
                                           cfg.samples, rng, {20.0, threads});
  report::ReportWriter out(cfg.out, report::parse_format(cfg.format),
                           {"model", "x", "y", "eps", "volume", "gamma_hat", "g_hat", "r2"});
  for (std::size_t i = 0; i < est.epsilons.size(); ++i)
    out.row({model.id(), x[0], x[1], est.epsilons[i], est.volumes[i], est.gamma_hat, est.g_hat, est.fit_r2});
  out.close();
  manifest.outputs.push_back(cfg.out);
  return est.gamma_hat >= 1.9 ? 0 : 1;
}

int run_build_cover(const ExperimentConfig& cfg, Manifest& manifest) {
  const auto model = make_model(cfg);
  const auto support = unit_support(model);
  const double eps0 = cfg.eps0 > 0.0 ? cfg.eps0 : planner::choose_eps0(model, support, cfg.n.front(), cfg.c0);
  const std::string text = hcs::cover_to_json(hcs::build_cover(model, support, eps0)) + "\n";
  if (cfg.out == "-") {
    std::cout << text;
  } else {
    report::write_file(cfg.out, text);
    manifest.outputs.push_back(cfg.out);
  }
  return 0;
}

int run_hcp_solve(const ExperimentConfig& cfg, Manifest& manifest) {
  if (cfg.instance.empty()) fail(ErrorKind::ConfigError, "field 'instance': hcp-solve needs an instance file");
  const std::string text = report::read_file(cfg.instance);
  manifest.inputs["instance"] = report::git_blob_hash(text);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ConfigError, cfg.instance + ": " + e.what());
  }
  hcp::HcpInstance inst;
  int b = 0, s = 0;
  if (!j.is_object() || !j.contains("b") || !j.contains("s") || !j.contains("targets"))
    fail(ErrorKind::ConfigError, cfg.instance + ": expected an object with b, s and targets");
  std::uint64_t ub = 0, us = 0;
  read_field(j["b"], "b", ub);
  read_field(j["s"], "s", us);
  b = static_cast<int>(ub);
  s = static_cast<int>(us);
  inst.params = {b, s};
  std::vector<std::vector<std::uint64_t>> paths;
  if (!j["targets"].is_array()) field_error("targets", "expected an array of index arrays");
  for (std::size_t i = 0; i < j["targets"].size(); ++i) {
    std::vector<std::uint64_t> p;
    read_field(j["targets"][i], "targets[" + std::to_string(i) + "]", p);
    hcp::TargetPath t;
    for (auto c : p) t.child.push_back(static_cast<int>(c));
    inst.targets.push_back(std::move(t));
  }
  inst.params.validate();
  inst.validate();
  const auto plan = hcp::construct_optimal_plan(inst);
  const double cost = hcp::plan_cost(plan, inst);
  const double bound = hcp::hcp_star_bound(inst.n(), inst.params);
  report::ReportWriter out(cfg.out, report::parse_format(cfg.format), {"n", "b", "s", "cost", "bound", "actions"});
  out.row({static_cast<std::int64_t>(inst.n()), static_cast<std::int64_t>(b), static_cast<std::int64_t>(s), cost, bound,
           static_cast<std::int64_t>(plan.size())});
  out.close();
  manifest.outputs.push_back(cfg.out);
  if (!cfg.plan_out.empty()) {
    json arr = json::array();
    for (const auto& a : plan) {
      const char* op = a.kind == hcp::Action::Kind::Down ? "down" : a.kind == hcp::Action::Kind::Up ? "up" : "collect";
      arr.push_back({{"op", op}, {"arg", a.arg}});
    }
    report::write_file(cfg.plan_out, arr.dump() + "\n");
    manifest.outputs.push_back(cfg.plan_out);
  }
  return cost <= bound ? 0 : 1;
}

int run_check_bounds(const ExperimentConfig& cfg, Manifest& manifest) {
  const unsigned threads = resolve_threads(cfg.threads);
  const auto model = make_model(cfg);
  const double gamma = model_gamma(cfg, model);
  const double eps = cfg.eps0 > 0.0 ? cfg.eps0 : 0.1;
  const double beta = resolved_beta(cfg, model, gamma, eps);
  const double alpha = cfg.alpha > 0.0 ? cfg.alpha
                                       : measured_alpha(cfg, model, lift(model, {0.5, 0.5, 0.5}), eps, threads);
  const auto r = bounds::bound_report(static_cast<double>(cfg.n.front()), cfg.delta, beta, cfg.s, alpha, gamma, cfg.J,
                                      cfg.int_g_inv);
  json j;
  j["n"] = r.n;
  j["gamma"] = r.gamma;
  j["beta"] = r.beta;
  j["s"] = r.s;
  j["alpha"] = r.alpha;
  j["J"] = r.J;
  j["int_g_inv"] = r.int_g_inv;
  j["delta"] = r.delta;
  j["lower"] = r.lower;
  j["upper"] = r.upper;
  j["adversarial_lower"] = r.adversarial_lower;
  j["adversarial_upper"] = r.adversarial_upper;
  const std::string text = j.dump(2) + "\n";
  if (cfg.out == "-") {
    std::cout << text;
  } else {
    report::write_file(cfg.out, text);
    manifest.outputs.push_back(cfg.out);
  }
  return r.lower <= r.upper ? 0 : 1;
}

int run_cbo_check(const ExperimentConfig& cfg, Manifest& manifest) {
  const unsigned threads = resolve_threads(cfg.threads);
  const auto model = make_model(cfg);
  if (model.kind() != ModelKind::Euclidean2 && model.kind() != ModelKind::ScaledEuclidean2)
    fail(ErrorKind::ConfigError, "field 'model': cbo-check supports euclidean2 and scaled_euclidean2");
  const double gamma = model.gamma();
  const auto grid = GridField::unit_square(64);
  const GridField g = g_field(cfg, model, grid, threads);
  const GridField f = make_density(cfg, g);
  const GridField cost = bounds::cost_field(f, g, cfg.zeta, gamma);
  const double beta = resolved_beta(cfg, model, gamma, cfg.eps0 > 0.0 ? cfg.eps0 : 0.1);

  report::ReportWriter out(cfg.out, report::parse_format(cfg.format), {"seed", "n", "lambda", "greedy", "brute", "bound"});
  bool ok = true;
  for (std::uint64_t n : cfg.n)
    for (std::size_t li = 0; li < cfg.lambda.size(); ++li) {
      const double lambda = cfg.lambda[li];
      std::vector<std::int64_t> greedy(cfg.seeds), brute(cfg.seeds, -1);
      parallel_for(cfg.seeds, threads, [&](std::size_t s) {
        Rng rng = Rng::substream(cfg.seed + s, n * 1000 + li);
        const auto targets = bounds::sample_density(f, n, rng);
        greedy[s] = static_cast<std::int64_t>(cbo::greedy_orienteering(model, cost, targets, lambda, rng));
        if (n <= 8) brute[s] = static_cast<std::int64_t>(cbo::brute_cbo_small(model, cost, targets, lambda));
      });
      const double bound = cbo::cbo_bound(beta, lambda, static_cast<double>(n), gamma, cfg.delta);
      for (std::size_t s = 0; s < cfg.seeds; ++s) {
        if (static_cast<double>(greedy[s]) > bound) ok = false;
        if (brute[s] >= 0 && (brute[s] < greedy[s] || static_cast<double>(brute[s]) > bound)) ok = false;
        out.row({static_cast<std::int64_t>(cfg.seed + s), static_cast<std::int64_t>(n), lambda, greedy[s], brute[s], bound});
      }
    }
  out.close();
  manifest.outputs.push_back(cfg.out);
  return ok ? 0 : 1;
}

int run_concentration(const ExperimentConfig& cfg, Manifest& manifest) {
  const unsigned threads = resolve_threads(cfg.threads);
  report::ReportWriter out(cfg.out, report::parse_format(cfg.format),
                           {"regime", "m", "n", "zeta", "trials", "empirical", "bound"});
  bool ok = true;
  for (std::uint64_t m : cfg.m)
    for (double z : cfg.exponents)
      for (std::uint64_t n : cfg.n) {
        stats::BinExperiment exp;
        exp.p.assign(m, 1.0 / static_cast<double>(m));
        exp.n = n;
        exp.zeta_exp = z;
        exp.trials = cfg.trials;
        exp.seed = cfg.seed;
        const auto r = stats::balls_bins_experiment(exp, threads);
        const double se = r.sd_y / std::sqrt(static_cast<double>(r.trials));
        if (r.empirical_prob > r.theoretical_bound || r.mean_y > r.expectation_bound + 3.0 * se) ok = false;
        out.row({std::string(stats::to_string(r.regime)), static_cast<std::int64_t>(m), static_cast<std::int64_t>(n), z,
                 static_cast<std::int64_t>(r.trials), r.empirical_prob, r.theoretical_bound});
      }
  out.close();
  manifest.outputs.push_back(cfg.out);
  return ok ? 0 : 1;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (std::find(std::begin(kSubcommands), std::end(kSubcommands), subcommand) == std::end(kSubcommands))
    fail(ErrorKind::ConfigError, "unknown subcommand '" + subcommand + "'");
  parse_model_kind(model);
  if (n.empty()) field_error("n", "must not be empty");
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] == 0 && subcommand != "check-bounds") field_error("n", "entries must be positive");
    if (i > 0 && n[i] <= n[i - 1]) field_error("n", "must be strictly ascending");
  }
  if (seeds == 0) field_error("seeds", "must be at least 1");
  if (!(delta > 0.0 && delta < 1.0)) field_error("delta", "must lie in (0, 1)");
  if (!(zeta > 0.0)) field_error("zeta", "must be positive");
  if (eps0 < 0.0) field_error("eps0", "must be nonnegative");
  if (!(c0 > 0.0)) field_error("c0", "must be positive");
  if (!(r_min > 0.0) || !(c_pi > 0.0) || !(v_max > 0.0) || !(omega_max > 0.0))
    fail(ErrorKind::ConfigError, "model parameters must be positive");
  report::parse_format(format);
  if (out.empty()) field_error("out", "must not be empty");
  if (samples == 0) field_error("samples", "must be positive");
  if (trials == 0) field_error("trials", "must be positive");
  for (double l : lambda)
    if (!(l >= 0.0)) field_error("lambda", "entries must be nonnegative");
  for (auto v : m)
    if (v == 0) field_error("m", "entries must be positive");
  for (double z : exponents)
    if (!(z > 0.0 && z <= 1.0)) field_error("exponents", "entries must lie in (0, 1]");
  if (alpha > 1.0) field_error("alpha", "must not exceed 1");
  make_model(*this);
}

std::string ExperimentConfig::to_json() const {
  json j;
  j["subcommand"] = subcommand;
  for (const auto& f : field_specs()) {
    if (std::string(f.key) == "threads") continue;
    std::visit([&](auto member) { j[f.key] = this->*member; }, f.member);
  }
  return j.dump();
}

ExperimentConfig config_from_json(const std::string& text, ExperimentConfig base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ConfigError, std::string("config: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorKind::ConfigError, "config: top level must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "subcommand") {
      read_field(value, key, base.subcommand);
      continue;
    }
    const auto& specs = field_specs();
    auto it = std::find_if(specs.begin(), specs.end(), [&](const FieldSpec& f) { return key == f.key; });
    if (it == specs.end()) field_error(key, "unknown field");
    std::visit([&](auto member) { read_field(value, key, base.*member); }, it->member);
  }
  return base;
}

DynamicsModel make_model(const ExperimentConfig& cfg) {
  switch (parse_model_kind(cfg.model)) {
    case ModelKind::Euclidean2:
      return DynamicsModel::euclidean2(cfg.c_pi);
    case ModelKind::Euclidean3:
      return DynamicsModel::euclidean3(cfg.c_pi);
    case ModelKind::ScaledEuclidean2: {
      std::vector<double> parts;
      std::size_t start = 0;
      while (true) {
        const auto colon = cfg.sigma.find(':', start);
        const std::string piece = cfg.sigma.substr(start, colon == std::string::npos ? std::string::npos : colon - start);
        try {
          std::size_t used = 0;
          parts.push_back(std::stod(piece, &used));
          if (used != piece.size()) throw std::invalid_argument(piece);
        } catch (const std::exception&) {
          field_error("sigma", "cannot parse '" + cfg.sigma + "'");
        }
        if (colon == std::string::npos) break;
        start = colon + 1;
      }
      if (parts.size() == 1) return DynamicsModel::scaled_euclidean2(ScaleField::constant(parts[0]), cfg.c_pi);
      if (parts.size() == 3) return DynamicsModel::scaled_euclidean2(ScaleField::split(parts[0], parts[1], parts[2]), cfg.c_pi);
      field_error("sigma", "expected <value> or <x_split>:<left>:<right>");
    }
    case ModelKind::ReedsShepp:
      return DynamicsModel::reeds_shepp(cfg.r_min, cfg.c_pi);
    case ModelKind::DiffDrive:
      return DynamicsModel::diff_drive(cfg.v_max, cfg.omega_max);
  }
  fail(ErrorKind::ConfigError, "unknown model");
}

GridField make_density(const ExperimentConfig& cfg, const GridField& g) {
  const std::string& d = cfg.density;
  if (d.rfind("file:", 0) == 0) {
    GridField f = grid_from_json(report::read_file(d.substr(5)));
    const auto hi = f.upper();
    if (f.origin[0] < -1e-12 || f.origin[1] < -1e-12 || hi[0] > 1 + 1e-12 || hi[1] > 1 + 1e-12)
      field_error("density", "grid must lie inside the unit square");
    if (f.integral() <= 0.0 || f.min() < 0.0) field_error("density", "grid must be nonnegative with positive mass");
    return bounds::normalized(f);
  }
  if (d == "uniform") return GridField::unit_square(64, 1.0);
  if (d == "linear") return GridField::from_function({0, 0}, 1.0 / 64, 64, 64, [](double x, double) { return 2 * x; });
  if (d == "worst") return bounds::worst_case_density(g);
  if (d == "anti") return bounds::normalized(g);
  field_error("density", "unknown density '" + d + "'");
}

int run(const ExperimentConfig& cfg, std::ostream& log) {
  cfg.validate();
  Manifest manifest;
  int code = 0;
  const std::string& sub = cfg.subcommand;
  if (sub == "estimate-agility") code = run_estimate_agility(cfg, manifest);
  else if (sub == "build-cover") code = run_build_cover(cfg, manifest);
  else if (sub == "run-dstsp") code = run_tours(cfg, log, {cfg.density}, manifest);
  else if (sub == "run-adversarial") code = run_tours(cfg, log, {"worst", "uniform", "anti"}, manifest);
  else if (sub == "hcp-solve") code = run_hcp_solve(cfg, manifest);
  else if (sub == "check-bounds") code = run_check_bounds(cfg, manifest);
  else if (sub == "cbo-check") code = run_cbo_check(cfg, manifest);
  else code = run_concentration(cfg, manifest);
  write_manifest(cfg, manifest);
  if (code != 0) log << sub << ": property check failed\n";
  return cfg.assert_properties ? code : 0;
}

int main(int argc, char** argv) {
  CLI::App app{"Dynamic stochastic TSP experiments"};
  app.require_subcommand(1);
  std::vector<std::function<void(ExperimentConfig&)>> apply;
  std::vector<std::pair<CLI::App*, CLI::Option*>> config_opts;
  auto config_path = std::make_shared<std::string>();

  for (const char* name : kSubcommands) {
    CLI::App* sub = app.add_subcommand(name);
    config_opts.emplace_back(sub, sub->add_option("--config", *config_path, "JSON config file; flags override it"));
    for (const auto& spec : field_specs()) {
      std::visit(
          [&](auto member) {
            using T = std::remove_reference_t<decltype(std::declval<ExperimentConfig&>().*member)>;
            auto holder = std::make_shared<T>();
            CLI::Option* opt = nullptr;
            if constexpr (std::is_same_v<T, bool>) {
              opt = sub->add_flag(spec.flag, *holder, spec.help);
            } else {
              opt = sub->add_option(spec.flag, *holder, spec.help);
              if constexpr (!std::is_same_v<T, std::string> && !std::is_arithmetic_v<T>) opt->delimiter(',');
            }
            apply.push_back([opt, holder, member](ExperimentConfig& c) {
              if (opt->count() > 0) c.*member = *holder;
            });
          },
          spec.member);
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    ExperimentConfig cfg;
    cfg.subcommand = app.get_subcommands().front()->get_name();
    for (const auto& [sub, opt] : config_opts)
      if (sub->parsed() && opt->count() > 0) {
        cfg = config_from_json(report::read_file(*config_path), cfg);
        cfg.subcommand = sub->get_name();
      }
    for (const auto& fn : apply) fn(cfg);
    return run(cfg, std::cerr);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::ConfigError ? 2 : 3;
  }
}

}  // namespace dstsp::cli
