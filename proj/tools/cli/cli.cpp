#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "format.hpp"
#include "relay/relay.hpp"
#include "verify.hpp"

namespace relay::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Everything a command can be configured with. Field names mirror the long
/// flag names, which are also the keys accepted in --config files.
struct ExperimentConfig {
  std::string scheme;
  std::vector<double> sigma;
  double n0 = 1.0;
  int m = 50;
  double ps = 0.0;
  double pr = 0.0;
  std::vector<double> pr_list;
  double power = 0.0;
  double theta = 0.5;
  double delta_s = 0.1;
  double delta_r = 0.1;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  std::string method = "mc";
  int nodes = 64;
  unsigned threads = 1;
  bool bits = false;
  std::string out;
  std::string preset;
  std::string config;
  double lo = 0.5;
  double hi = 5.0;
  double step = 0.01;
  double theta_step = 0.01;
  bool global_delta = false;
  bool quick = false;
  double perturb = 0.0;
};

// ---------------------------------------------------------------------------
// Figure presets. The block length of the theta-sweep figures is not given
// with the figures; m = 50 (the training-fraction figure's value) is assumed.

struct ThetaPreset {
  const char* name;
  const char* scheme;
  double power;
};

constexpr ThetaPreset kThetaPresets[] = {
    {"fig2", "af", 100.0},     {"fig3", "df-rep", 100.0}, {"fig4", "df-par", 100.0},
    {"fig5", "af", 1.0},       {"fig6", "df-rep", 1.0},   {"fig7", "df-par", 1.0},
};

constexpr const char* kThetaPresetComment = "m=50 assumed; block length not stated for the theta-sweep figures";

const std::vector<std::array<double, 3>> kFigureSigmas = {
    {1.0, 10.0, 2.0}, {1.0, 6.0, 3.0}, {1.0, 4.0, 4.0}, {1.0, 2.0, 1.0}};

const ThetaPreset* find_theta_preset(const std::string& name) {
  for (const ThetaPreset& p : kThetaPresets) {
    if (name == p.name) return &p;
  }
  return nullptr;
}

std::vector<std::pair<std::string, std::string>> preset_entries(const std::string& command, const std::string& name) {
  if (name.empty()) return {};
  if (name == "fig1") {
    if (command != "sweep-sigma-rd") throw UsageError("preset fig1 applies to sweep-sigma-rd");
    return {{"m", "50"}, {"n0", "1"}, {"pr", "1,10,100"}, {"lo", "0.5"}, {"hi", "5"}, {"step", "0.1"}};
  }
  if (const ThetaPreset* p = find_theta_preset(name)) {
    if (command != "sweep-theta") throw UsageError("preset " + name + " applies to sweep-theta");
    return {{"scheme", p->scheme}, {"power", format_double(p->power)}, {"delta-s", "0.1"}, {"delta-r", "0.1"},
            {"n0", "1"},           {"m", "50"},                         {"step", "0.01"}};
  }
  throw UsageError("unknown preset '" + name + "' (expected fig1 ... fig7)");
}

// ---------------------------------------------------------------------------
// key=value config files and preset defaults are turned into extra
// "--key=value" arguments for every key not already given on the command
// line, so explicit flags always win.

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot read config file " + path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config " + path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return entries;
}

std::optional<std::string> flag_value(const std::vector<std::string>& args, const std::string& name) {
  const std::string flag = "--" + name;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == flag && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind(flag + "=", 0) == 0) return args[i].substr(flag.size() + 1);
  }
  return std::nullopt;
}

bool has_flag(const std::vector<std::string>& args, const std::string& name) {
  const std::string flag = "--" + name;
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

std::vector<std::string> expand_defaults(std::vector<std::string> args) {
  const auto command =
      std::find_if(args.begin() + 1, args.end(), [](const std::string& a) { return !a.starts_with("-"); });
  if (command == args.end()) return args;
  const std::string name = *command;

  std::vector<std::pair<std::string, std::string>> entries;
  if (auto path = flag_value(args, "config")) entries = read_config_file(*path);
  std::string preset = flag_value(args, "preset").value_or("");
  for (const auto& [key, value] : entries) {
    if (key == "preset" && preset.empty()) preset = value;
  }
  for (auto& e : preset_entries(name, preset)) entries.push_back(std::move(e));

  for (const auto& [key, value] : entries) {
    if (has_flag(args, key)) continue;
    args.push_back("--" + key + "=" + value);
  }
  return args;
}

// ---------------------------------------------------------------------------

void add_model_options(CLI::App* app, ExperimentConfig& c) {
  app->add_option("--scheme", c.scheme, "Relaying scheme")->check(CLI::IsMember({"af", "df-rep", "df-par"}));
  app->add_option("--sigma", c.sigma, "Fading std. devs sd,sr,rd")->delimiter(',')->expected(3);
  app->add_option("--n0", c.n0, "Noise variance N0");
  app->add_option("--m", c.m, "Coherence block length (even, >= 6)");
  app->add_option("--delta-s", c.delta_s, "Source training fraction");
  app->add_option("--delta-r", c.delta_r, "Relay training fraction");
}

void add_expectation_options(CLI::App* app, ExperimentConfig& c) {
  app->add_option("--samples", c.samples, "Monte Carlo samples");
  app->add_option("--seed", c.seed, "Random seed");
  app->add_option("--method", c.method, "Expectation method")->check(CLI::IsMember({"mc", "gl"}));
  app->add_option("--nodes", c.nodes, "Gauss-Laguerre nodes per dimension");
  app->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
  app->add_flag("--bits", c.bits, "Report rates in bits instead of nats");
}

void add_file_options(CLI::App* app, ExperimentConfig& c) {
  app->add_option("--config", c.config, "key=value file; flags override its entries");
  app->add_option("--preset", c.preset, "Figure preset (fig1 ... fig7)");
}

bool given(const CLI::App* app, const std::string& name) { return app->count("--" + name) > 0; }

void require(const CLI::App* app, std::initializer_list<const char*> names) {
  for (const char* n : names) {
    if (!given(app, n)) throw UsageError(std::string("--") + n + " is required for " + app->get_name() + " (see --help)");
  }
}

ChannelStats channel_stats(const ExperimentConfig& c) {
  if (c.sigma.size() != 3) throw UsageError("--sigma needs three values sd,sr,rd");
  ChannelStats s{c.sigma[0], c.sigma[1], c.sigma[2], c.n0};
  s.validate();
  return s;
}

ExpectationSpec expectation_spec(const ExperimentConfig& c, Scheme scheme) {
  ExpectationSpec spec;
  spec.samples = c.samples;
  spec.seed = c.seed;
  spec.method = c.method == "gl" ? Method::GaussLaguerre : Method::MonteCarlo;
  spec.nodes = c.nodes;
  spec.workers = c.threads;
  // The widest expectation a scheme needs decides which methods apply.
  spec.dims = scheme == Scheme::AmplifyForward ? 3 : 2;
  spec.validate();
  return spec;
}

double unit_scale(const ExperimentConfig& c) { return c.bits ? 1.0 / std::numbers::ln2 : 1.0; }
const char* unit_name(const ExperimentConfig& c) { return c.bits ? "bits" : "nats"; }

void emit(const ExperimentConfig& c, const std::filesystem::path& default_name, const std::string& contents,
          std::ostream& out, bool to_directory) {
  if (!to_directory) {
    if (c.out.empty()) {
      out << contents;
    } else {
      write_file_atomically(resolve_output(c.out), contents);
    }
    return;
  }
  const std::filesystem::path dir = c.out.empty() ? default_output_dir() : resolve_output(c.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  write_file_atomically(dir / default_name, contents);
}

// ---------------------------------------------------------------------------

int cmd_rate(const CLI::App* app, const ExperimentConfig& c, std::ostream& out) {
  require(app, {"scheme", "sigma"});
  const Scheme scheme = parse_scheme(c.scheme);
  const ChannelStats stats = channel_stats(c);
  SystemConfig cfg{c.m, c.ps, c.pr, c.delta_s, c.delta_r, scheme};
  if (given(app, "power")) {
    if (given(app, "ps") || given(app, "pr")) throw UsageError("use either --power/--theta or --ps/--pr");
    require(app, {"theta"});
    check_positive(c.power, "power");
    check_fraction(c.theta, "theta");
    const PowerSplit split{c.power, c.theta};
    cfg.p_s = split.source();
    cfg.p_r = split.relay();
  } else {
    require(app, {"ps", "pr"});
  }
  cfg.validate();
  const ExpectationSpec spec = expectation_spec(c, scheme);

  const RateEstimate r = evaluate_rate(cfg, stats, spec);
  const double k = unit_scale(c);
  out << "scheme=" << c.scheme << " rate=" << format_double(r.value * k)
      << " std_error=" << format_double(r.std_error * k) << " unit=" << unit_name(c) << " samples=" << r.samples
      << " method=" << to_string(r.method);
  if (r.df) {
    out << " i1=" << format_double(r.df->relay.value * k) << " i2=" << format_double(r.df->destination.value * k)
        << " binding=" << (r.df->relay_binds() ? "I1" : "I2");
  }
  out << '\n';
  return kOk;
}

std::string theta_csv(const Sweep& sweep, const ExperimentConfig& c, const ChannelStats& s) {
  std::ostringstream os;
  os << "theta,rate_nats,std_error,scheme,sigma_sd,sigma_sr,sigma_rd,P,m,delta_s,delta_r,seed\n";
  for (const SweepPoint& p : sweep.curve) {
    os << format_double(p.argument) << ',' << format_double(p.rate.value) << ',' << format_double(p.rate.std_error)
       << ',' << c.scheme << ',' << format_double(s.sigma_sd) << ',' << format_double(s.sigma_sr) << ','
       << format_double(s.sigma_rd) << ',' << format_double(c.power) << ',' << c.m << ','
       << format_double(c.delta_s) << ',' << format_double(c.delta_r) << ',' << c.seed << '\n';
  }
  return os.str();
}

std::string curve_file_name(const std::string& preset, const ChannelStats& s) {
  return preset + "_sd" + format_double(s.sigma_sd) + "_sr" + format_double(s.sigma_sr) + "_rd" +
         format_double(s.sigma_rd) + ".csv";
}

int cmd_sweep_theta(const CLI::App* app, const ExperimentConfig& c, std::ostream& out) {
  require(app, {"scheme", "power"});
  if (c.preset.empty()) require(app, {"sigma"});
  const Scheme scheme = parse_scheme(c.scheme);
  check_nonnegative(c.power, "power");
  if (!(c.step > 0.0 && c.step <= 0.1) && c.step != 0.5) {
    // 0.5 is accepted so that a three-point sweep {0, 0.5, 1} is expressible.
    throw UsageError("--step must be in (0, 0.1] or exactly 0.5");
  }
  SystemConfig probe{c.m, c.power, c.power, c.delta_s, c.delta_r, scheme};
  probe.validate();
  const ExpectationSpec spec = expectation_spec(c, scheme);

  std::vector<ChannelStats> curves;
  if (given(app, "sigma")) {
    curves.push_back(channel_stats(c));
  } else {
    for (const auto& s : kFigureSigmas) curves.push_back(ChannelStats{s[0], s[1], s[2], c.n0});
  }
  for (const ChannelStats& s : curves) s.validate();

  std::vector<std::string> files;
  for (const ChannelStats& s : curves) {
    Sweep sweep;
    if (c.step == 0.5) {
      // grid_points handles any step; optimize_theta limits it to 0.1.
      sweep.best.method = AllocationMethod::Grid;
      for (double theta : grid_points(0.0, 1.0, 0.5)) {
        const PowerSplit split{c.power, theta};
        const SystemConfig cfg{c.m, split.source(), split.relay(), c.delta_s, c.delta_r, scheme};
        sweep.curve.push_back({theta, evaluate_rate(cfg, s, spec)});
      }
    } else {
      sweep = optimize_theta(c.power, s, c.m, c.delta_s, c.delta_r, scheme, spec, c.step);
    }
    files.push_back(theta_csv(sweep, c, s));
  }

  if (curves.size() == 1 && c.preset.empty()) {
    emit(c, "", files.front(), out, false);
  } else {
    if (!c.preset.empty()) out << "# preset " << c.preset << ": " << kThetaPresetComment << '\n';
    for (std::size_t i = 0; i < curves.size(); ++i) {
      const std::string name = curve_file_name(c.preset.empty() ? "sweep" : c.preset, curves[i]);
      emit(c, name, files[i], out, true);
      out << "wrote " << name << '\n';
    }
  }
  return kOk;
}

int cmd_sweep_sigma_rd(const CLI::App* app, const ExperimentConfig& c, std::ostream& out) {
  require(app, {"pr"});
  check_block_length(c.m);
  check_positive(c.n0, "n0");
  for (double p : c.pr_list) check_positive(p, "P_r");
  if (!(c.lo > 0.0 && c.lo <= c.hi) || !std::isfinite(c.hi)) throw UsageError("sigma_rd range needs 0 < lo <= hi");
  if (!(c.step > 0.0)) throw UsageError("--step must be positive");
  const std::vector<double> sigmas = c.lo == c.hi ? std::vector<double>{c.lo} : grid_points(c.lo, c.hi, c.step);

  std::ostringstream os;
  os << "sigma_rd,delta_r_opt,P_r,m\n";
  for (double p : c.pr_list) {
    for (double sigma : sigmas) {
      const AllocationResult r = checked_optimal_delta(c.m, p, sigma, c.n0);
      os << format_double(sigma) << ',' << format_double(r.argument) << ',' << format_double(p) << ',' << c.m
         << '\n';
    }
  }
  if (c.preset.empty()) {
    emit(c, "", os.str(), out, false);
  } else {
    emit(c, c.preset + ".csv", os.str(), out, true);
    out << "wrote " << c.preset << ".csv\n";
  }
  return kOk;
}

int cmd_optimal_training(const CLI::App* app, const ExperimentConfig& c, std::ostream& out) {
  require(app, {"sigma"});
  const ChannelStats stats = channel_stats(c);
  check_block_length(c.m);
  const bool joint = given(app, "power");
  if (joint) {
    require(app, {"scheme"});
    check_positive(c.power, "power");
  } else {
    require(app, {"pr"});
    check_positive(c.pr, "pr");
    if (given(app, "ps")) check_positive(c.ps, "ps");
  }
  if (c.global_delta && !joint) require(app, {"scheme", "ps"});
  std::optional<ExpectationSpec> spec;
  if (given(app, "scheme")) spec = expectation_spec(c, parse_scheme(c.scheme));

  const double k = unit_scale(c);
  if (joint) {
    JointOptions options;
    options.theta_step = c.theta_step;
    options.global_delta = c.global_delta;
    const JointAllocation a = joint_allocation(c.power, stats, c.m, parse_scheme(c.scheme), *spec, options);
    out << "theta=" << format_double(a.theta) << " delta_s=" << format_double(a.delta_s)
        << " delta_r=" << format_double(a.delta_r) << " rate=" << format_double(a.rate.value * k)
        << " std_error=" << format_double(a.rate.std_error * k) << " unit=" << unit_name(c)
        << " evaluations=" << a.evaluations << '\n';
    return kOk;
  }

  const AllocationResult dr = checked_optimal_delta(c.m, c.pr, stats.sigma_rd, c.n0);
  out << "delta_r_opt=" << format_double(dr.argument) << " method=closed-form grid_check=pass\n";
  if (given(app, "ps")) {
    const SourceTrainingCandidates ds = suboptimal_delta_s(c.m, c.ps, stats);
    out << "delta_s_direct=" << format_double(ds.direct) << " delta_s_relay=" << format_double(ds.relay) << '\n';
    if (c.global_delta) {
      const SystemConfig cfg{c.m, c.ps, c.pr, c.delta_s, dr.argument, parse_scheme(c.scheme)};
      const Sweep g = global_delta_r(cfg, stats, *spec, 0.001);
      out << "delta_r_global=" << format_double(g.best.argument) << " rate=" << format_double(g.best.rate.value * k)
          << " unit=" << unit_name(c) << '\n';
    }
  }
  return kOk;
}

int cmd_verify(const ExperimentConfig& c, std::ostream& out) {
  VerifyOptions o;
  o.quick = c.quick;
  o.perturb = c.perturb;
  o.seed = c.seed;
  o.workers = c.threads;
  const std::vector<CheckResult> results = run_verification(o);
  print_report(results, out);
  const bool ok = std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
  return ok ? kOk : kFailure;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  ExperimentConfig c;
  CLI::App app{"Achievable rates and resource allocation for pilot-trained relay channels", "relay-rates"};
  app.require_subcommand(1);

  CLI::App* rate = app.add_subcommand("rate", "Evaluate one operating point");
  add_model_options(rate, c);
  add_expectation_options(rate, c);
  rate->add_option("--config", c.config, "key=value file; flags override its entries");
  rate->add_option("--ps", c.ps, "Source power P_s");
  rate->add_option("--pr", c.pr, "Relay power P_r");
  rate->add_option("--power", c.power, "Total power P (with --theta)");
  rate->add_option("--theta", c.theta, "Source share of the total power");

  CLI::App* sweep_theta = app.add_subcommand("sweep-theta", "Rate vs. power split theta, as CSV");
  add_model_options(sweep_theta, c);
  add_expectation_options(sweep_theta, c);
  add_file_options(sweep_theta, c);
  sweep_theta->add_option("--power", c.power, "Total power P");
  sweep_theta->add_option("--step", c.step, "Theta grid step");
  sweep_theta->add_option("--out", c.out, "Output CSV (directory for presets); stdout if omitted");

  CLI::App* sweep_sigma = app.add_subcommand("sweep-sigma-rd", "Optimal relay training fraction vs. sigma_rd, as CSV");
  add_file_options(sweep_sigma, c);
  sweep_sigma->add_option("--m", c.m, "Coherence block length");
  sweep_sigma->add_option("--n0", c.n0, "Noise variance N0");
  sweep_sigma->add_option("--pr", c.pr_list, "Relay power(s), comma separated")->delimiter(',');
  sweep_sigma->add_option("--lo", c.lo, "Smallest sigma_rd");
  sweep_sigma->add_option("--hi", c.hi, "Largest sigma_rd");
  sweep_sigma->add_option("--step", c.step, "sigma_rd step");
  sweep_sigma->add_option("--out", c.out, "Output CSV (directory for presets); stdout if omitted");

  CLI::App* training = app.add_subcommand("optimal-training", "Training fractions and joint allocation");
  add_model_options(training, c);
  add_expectation_options(training, c);
  training->add_option("--config", c.config, "key=value file; flags override its entries");
  training->add_option("--ps", c.ps, "Source power P_s");
  training->add_option("--pr", c.pr, "Relay power P_r");
  training->add_option("--power", c.power, "Total power P: run the joint (theta, delta) allocation");
  training->add_option("--theta-step", c.theta_step, "Theta grid step for the joint allocation");
  training->add_flag("--global-delta", c.global_delta, "Also grid-search delta_r against the full rate");

  CLI::App* verify = app.add_subcommand("verify", "Run the oracle-equivalence checks");
  verify->add_option("--config", c.config, "key=value file; flags override its entries");
  verify->add_flag("--quick", c.quick, "10^4 samples per Monte Carlo check");
  verify->add_option("--perturb", c.perturb, "Multiply scalar-side gains by (1 + value)");
  verify->add_option("--seed", c.seed, "Random seed");
  verify->add_option("--threads", c.threads, "Worker threads (0 = all cores)");

  try {
    const std::vector<std::string> args = expand_defaults(raw_args);
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());

    if (*rate) return cmd_rate(rate, c, out);
    if (*sweep_theta) return cmd_sweep_theta(sweep_theta, c, out);
    if (*sweep_sigma) return cmd_sweep_sigma_rd(sweep_sigma, c, out);
    if (*training) return cmd_optimal_training(training, c, out);
    if (*verify) return cmd_verify(c, out);
    return kUsage;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return kFailure;
  }
}

}  // namespace relay::cli
