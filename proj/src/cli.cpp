#include "irsa/cli.hpp"

#include "irsa/analysis.hpp"
#include "irsa/errors.hpp"
#include "irsa/montecarlo.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace irsa {

const std::set<std::string>& simulate_keys()
{
  static const std::set<std::string> keys = {"lambda_poly", "N", "mu", "nu", "beta", "delta", "D", "G_grid",
                                             "K_grid", "decoders", "frames", "seed", "output", "workers", "batch",
                                             "target_rel_ci", "rounding", "pvtc_T", "exclude_on_empty_slot"};
  return keys;
}

const std::set<std::string>& analyze_keys()
{
  static const std::set<std::string> keys = {"mode", "lambda_poly", "K",  "K_grid", "G",      "mu",       "nu",
                                             "beta", "delta",       "D",  "U_max",  "output", "rounding", "beta_grid"};
  return keys;
}

const std::set<std::string>& threshold_keys()
{
  static const std::set<std::string> keys = {"lambda_poly", "beta_grid", "delta", "D",        "mu",
                                             "G",           "schemes",   "tol",   "pvtc_rule", "output"};
  return keys;
}

void apply_overrides(RunConfig& config, const Overrides& flags)
{
  auto put = [&](const char* key, const std::string& value) {
    if (!value.empty()) {
      config.set(key, value);
    }
  };
  put("output", flags.out);
  put("seed", flags.seed);
  put("workers", flags.workers);
  put("frames", flags.frames);
  put("tol", flags.tol);
}

namespace {

void require(bool ok, const std::string& message)
{
  if (!ok) {
    throw ConfigError(message);
  }
}

DegreeDistribution lambda_of(const RunConfig& config)
{
  try {
    return DegreeDistribution::parse(config.text("lambda_poly", "x^2"));
  } catch (const std::exception& e) {
    throw ConfigError(std::string("lambda_poly: ") + e.what());
  }
}

PayloadRounding rounding_of(const RunConfig& config)
{
  const auto text = config.text("rounding", "up");
  if (text == "up") {
    return PayloadRounding::up;
  }
  if (text == "nearest") {
    return PayloadRounding::nearest;
  }
  throw ConfigError("rounding must be 'up' or 'nearest'");
}

bool flag_of(const RunConfig& config, const std::string& key, bool fallback)
{
  const auto text = config.text(key, fallback ? "true" : "false");
  if (text == "true" || text == "1") {
    return true;
  }
  if (text == "false" || text == "0") {
    return false;
  }
  throw ConfigError(key + " must be true or false");
}

void check_scaling(double beta, double delta, double offset)
{
  require(beta >= 1.0, "beta must be >= 1");
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  require(offset > 0.0, "D must be positive");
}

std::ostream& numbers(std::ostream& out)
{
  return out << std::setprecision(10);
}

}  // namespace

bool cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& diag)
{
  ExperimentSpec spec;
  spec.lambda = lambda_of(config);
  spec.slots = static_cast<std::size_t>(std::max<std::int64_t>(0, config.integer("N", 200)));
  spec.activation = config.real("mu", 0.2);
  spec.nu = config.real("nu", 0.5);
  spec.beta = config.real("beta", 2.0);
  spec.delta = config.real("delta", 0.9);
  spec.offset = config.real("D", 1.0);
  spec.rounding = rounding_of(config);
  spec.pvtc_capability = static_cast<int>(config.integer("pvtc_T", 0));
  const auto frames = config.integer("frames", 10000);
  const auto seed = config.integer("seed", 1);
  const auto workers = config.integer("workers", 1);
  const auto batch = config.integer("batch", 500);

  require(config.integer("N", 200) >= 1, "N must be at least 1");
  require(spec.activation > 0.0 && spec.activation <= 1.0, "mu must lie in (0, 1]");
  require(spec.nu > 0.0 && spec.nu < 1.0, "nu must lie in (0, 1)");
  check_scaling(spec.beta, spec.delta, spec.offset);
  require(frames >= 1, "frames must be at least 1");
  require(seed >= 0, "seed must be nonnegative");
  require(workers >= 1 && workers <= 1024, "workers must lie in [1, 1024]");
  require(batch >= 1, "batch must be at least 1");
  require(spec.pvtc_capability >= 0, "pvtc_T must be nonnegative");
  require(!(config.has("G_grid") && config.has("K_grid")), "give either G_grid or K_grid, not both");

  spec.frames = static_cast<std::uint64_t>(frames);
  spec.seed = static_cast<std::uint64_t>(seed);
  if (config.has("K_grid")) {
    for (double k : config.grid("K_grid")) {
      require(k >= 1.0 && k == std::floor(k), "K_grid entries must be positive integers");
      spec.loads.push_back(spec.activation * k / static_cast<double>(spec.slots));
    }
  } else {
    spec.loads = config.grid("G_grid");
  }
  for (double g : spec.loads) {
    require(g > 0.0, "channel loads must be positive");
  }
  for (const auto& name : split_list(config.text("decoders", "original,ed-mpr,ed-fg,pvtc"))) {
    try {
      spec.decoders.push_back(parse_decoder_kind(name));
    } catch (const std::exception&) {
      throw ConfigError("unknown decoder '" + name + "'");
    }
  }
  require(!spec.decoders.empty(), "decoders must name at least one decoder");
  const double target = config.real("target_rel_ci", 0.0);
  require(target >= 0.0, "target_rel_ci must be nonnegative");

  RunOptions options;
  options.workers = static_cast<unsigned>(workers);
  options.batch = static_cast<std::uint64_t>(batch);
  options.target_rel_ci = target;
  options.decode.exclude_on_empty_slot = flag_of(config, "exclude_on_empty_slot", true);

  const auto result = sweep(spec, options);
  write_plr_csv_header(out);
  for (const auto& e : result.estimates) {
    write_plr_csv_row(out, e);
  }
  for (const auto& message : result.errors) {
    diag << "point failed: " << message << '\n';
  }
  return result.errors.empty();
}

namespace {

void analyze_pi_u(const RunConfig& config, std::ostream& out)
{
  const auto lambda = lambda_of(config);
  const double load = config.real("G", 0.5);
  const double mu = config.real("mu", 0.2);
  const double beta = config.real("beta", 2.0);
  const double delta = config.real("delta", 0.9);
  const double offset = config.real("D", 1.0);
  const auto u_max = config.integer("U_max", 8);
  const auto rounding = rounding_of(config);
  require(load > 0.0, "G must be positive");
  require(mu > 0.0 && mu <= 1.0, "mu must lie in (0, 1]");
  check_scaling(beta, delta, offset);
  require(u_max >= 1 && u_max <= 4096, "U_max must lie in [1, 4096]");
  require(!(config.has("K") && config.has("K_grid")), "give either K or K_grid, not both");
  const auto users = config.has("K") ? std::vector<double>{config.real("K", 0.0)} : config.grid("K_grid");
  for (double k : users) {
    require(k >= 1.0, "K must be at least 1");
  }
  const auto nus = config.has("nu") ? config.grid("nu") : std::vector<double>{0.5};
  for (double nu : nus) {
    require(nu > 0.0 && nu < 1.0, "nu must lie in (0, 1)");
  }

  AsymptoticRegime regime{load, offset, beta, delta, mu};
  regime.validate();
  const double avg = lambda.average_degree();

  out << "# schema: irsa-pi-u/1\n";
  out << "K,N,M,n0,nu,U,pi_exact,pi_half,pi_lower,pi_asymptotic\n";
  numbers(out);
  for (double k : users) {
    const auto point = scaling_point(k, load / mu, offset, beta, delta, rounding);
    const double a = avg / point.slots;
    require(a < 1.0, "Lambda'(1)/N must be below 1; increase K");
    for (double nu : nus) {
      for (int u = 1; u <= u_max && u <= point.codebook_size; ++u) {
        out << k << ',' << point.slots << ',' << point.codebook_size << ',' << point.n0 << ',' << nu << ',' << u
            << ',' << pi_u_exact(u, point.n0, nu, point.codebook_size, a) << ',';
        if (nu == 0.5) {
          out << pi_u_half(u, point.n0, point.codebook_size, a);
        } else {
          out << "nan";
        }
        out << ',' << pi_u_lower_bound(u, point.n0, point.codebook_size, a) << ','
            << pi_u_asymptotic(u, regime, avg) << '\n';
      }
    }
  }
}

void analyze_regions(const RunConfig& config, std::ostream& out)
{
  const double delta = config.real("delta", 0.9);
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  const auto betas = config.has("beta_grid") ? config.grid("beta_grid") : parse_grid("1:10:0.05");
  for (double beta : betas) {
    require(beta >= 1.0, "beta_grid entries must be >= 1");
  }
  out << "# schema: irsa-regions/1\n";
  out << "beta,T_pvtc,delta_lower,delta_upper,delta,T_ed_mpr,order\n";
  numbers(out);
  for (double beta : betas) {
    const auto curves = region_boundaries(beta);
    out << beta << ',' << std::floor(beta) << ',' << curves.lower << ',' << curves.upper << ',' << delta << ','
        << t_ed_mpr(beta, delta) << ',' << to_string(compare_regimes(beta, delta)) << '\n';
  }
}

}  // namespace

void cmd_analyze(const RunConfig& config, std::ostream& out)
{
  const auto mode = config.text("mode", "pi-u");
  if (mode == "pi-u") {
    analyze_pi_u(config, out);
  } else if (mode == "regions") {
    analyze_regions(config, out);
  } else {
    throw ConfigError("mode must be 'pi-u' or 'regions'");
  }
}

void cmd_threshold(const RunConfig& config, std::ostream& out)
{
  const auto lambda = lambda_of(config);
  const double delta = config.real("delta", 0.9);
  const double offset = config.real("D", 1.0);
  const double mu = config.real("mu", 0.2);
  const double tol = config.real("tol", 1e-4);
  const auto rule = config.text("pvtc_rule", "floor-beta");
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  require(offset > 0.0, "D must be positive");
  require(mu > 0.0 && mu <= 1.0, "mu must lie in (0, 1]");
  require(tol > 0.0 && tol < 1.0, "tol must lie in (0, 1)");
  require(rule == "floor-beta" || rule == "floor-beta-delta", "pvtc_rule must be 'floor-beta' or 'floor-beta-delta'");
  const auto betas = config.has("beta_grid") ? config.grid("beta_grid") : parse_grid("1:10:0.05");
  for (double beta : betas) {
    require(beta >= 1.0, "beta_grid entries must be >= 1");
  }
  std::vector<std::string> schemes = split_list(config.text("schemes", "original,pvtc,ed-mpr"));
  for (const auto& s : schemes) {
    require(s == "original" || s == "pvtc" || s == "ed-mpr", "unknown scheme '" + s + "'");
  }

  out << "# schema: irsa-threshold/1\n";
  out << "beta,scheme,G_star,R_sum\n";
  numbers(out);
  double singleton = -1.0;
  for (double beta : betas) {
    for (const auto& scheme : schemes) {
      double g_star = 0.0;
      if (scheme == "original") {
        if (singleton < 0.0) {
          singleton = de_threshold(lambda, MprProfile::up_to(1), tol);
        }
        g_star = singleton;
      } else if (scheme == "pvtc") {
        const double t = rule == "floor-beta" ? std::floor(beta) : std::floor(beta * delta + 1e-12);
        g_star = de_threshold(lambda, MprProfile::up_to(static_cast<int>(t)), tol);
      } else {
        g_star = threshold_ed_mpr(lambda, AsymptoticRegime{1.0, offset, beta, delta, mu}, tol);
      }
      out << beta << ',' << scheme << ',' << g_star << ',' << (1.0 - delta) / beta * g_star << '\n';
    }
  }
}

int run_tool(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{"IRSA over the binary adder channel: simulation, analysis and thresholds"};
  app.require_subcommand(1);
  std::string config_path;
  Overrides flags;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value parameter file")->required();
    sub->add_option("--out", flags.out, "CSV output path (default stdout)");
    sub->add_option("--seed", flags.seed, "master seed");
    sub->add_option("--workers", flags.workers, "worker threads");
    sub->add_option("--frames", flags.frames, "frames per point");
    sub->add_option("--tol", flags.tol, "threshold bisection tolerance");
  };
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo PLR sweep");
  auto* analyze = app.add_subcommand("analyze", "slot resolution probabilities and regime regions");
  auto* threshold = app.add_subcommand("threshold", "density-evolution thresholds and sum rates");
  add_common(simulate);
  add_common(analyze);
  add_common(threshold);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    const auto& keys = simulate->parsed() ? simulate_keys() : analyze->parsed() ? analyze_keys() : threshold_keys();
    auto config = RunConfig::load(config_path, keys);
    auto reject = [&](const std::string& value, const std::string& key) {
      if (!value.empty() && keys.count(key) == 0) {
        throw ConfigError("--" + key + " does not apply to this subcommand");
      }
    };
    reject(flags.seed, "seed");
    reject(flags.workers, "workers");
    reject(flags.frames, "frames");
    reject(flags.tol, "tol");
    apply_overrides(config, flags);

    std::ostringstream csv;
    bool complete = true;
    if (simulate->parsed()) {
      complete = cmd_simulate(config, csv, err);
    } else if (analyze->parsed()) {
      cmd_analyze(config, csv);
    } else {
      cmd_threshold(config, csv);
    }

    const auto path = config.text("output", "");
    if (path.empty() || path == "-") {
      out << csv.str();
    } else {
      std::ofstream file(path);
      file << csv.str();
      if (!file) {
        err << "error: cannot write '" << path << "'\n";
        return 3;
      }
    }
    return complete ? 0 : 3;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidParameters& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace irsa
