#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "alf/asymmetry.hpp"
#include "alf/calibration.hpp"
#include "alf/cli.hpp"
#include "alf/losses.hpp"
#include "alf/noise.hpp"
#include "alf/rng.hpp"
#include "alf/toy.hpp"
#include "alf/trainer.hpp"

namespace alf::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> strings(const Json& j) { return j.get<std::vector<std::string>>(); }
std::vector<double> numbers(const Json& j) { return j.get<std::vector<double>>(); }

std::size_t count(const Json& j, const char* key) {
  const auto v = j.at(key).get<std::int64_t>();
  if (v < 0) throw ConfigError(key, "must be >= 0");
  return static_cast<std::size_t>(v);
}

std::string join(std::span<const double> values, char sep) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += sep;
    out += format_number(values[i]);
  }
  return out;
}

// Either "lo:hi:step" or a comma-separated list.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::vector<std::string> parts;
  std::string cell;
  const char sep = text.find(':') != std::string::npos ? ':' : ',';
  std::stringstream ss(text);
  while (std::getline(ss, cell, sep)) parts.push_back(cell);
  if (sep == ':') {
    if (parts.size() != 3) throw InvalidInput("grid must look like lo:hi:step");
    return make_grid(parse_number(parts[0]), parse_number(parts[1]), parse_number(parts[2]));
  }
  for (const auto& p : parts) out.push_back(parse_number(p));
  if (out.empty()) throw InvalidInput("grid is empty");
  return out;
}

// Ratios that are undefined for the family are reported as nan.
double try_ratio(double (*fn)(const LossSpec&, double), const LossSpec& spec, double step) {
  if (!is_single_argument(spec)) return kNaN;
  try {
    return fn(spec, step);
  } catch (const DegenerateLoss&) {
    return kNaN;
  }
}

CommandResult cmd_losses(const Json& cfg) {
  const ProbVector u(numbers(cfg.at("probs")));
  const std::size_t label = count(cfg, "label");
  CsvTable t;
  t.header = {"loss", "label", "value", "symmetric_sum", "grad_prob"};
  for (const auto& text : strings(cfg.at("loss"))) {
    const LossSpec spec = parse_loss_spec(text);
    std::string grad;
    try {
      grad = join(loss_grad_prob(spec, u, label), ';');
    } catch (const DomainError&) {
      grad = "undefined";
    }
    t.rows.push_back({spec.to_string(), std::to_string(label),
                      format_number(loss_value(spec, u, label)),
                      format_number(symmetric_sum(spec, u)), grad});
  }
  CommandResult r;
  r.csv = t.to_string();
  r.summary = std::to_string(t.rows.size()) + " losses evaluated at u = (" + join(u.values(), ',') +
              "), label " + std::to_string(label) + "\n";
  return r;
}

CommandResult cmd_asym(const Json& cfg) {
  const double step = cfg.at("grid_step").get<double>();
  const std::string noise_flag = cfg.at("noise").get<std::string>();
  CommandResult r;
  std::ostringstream summary;

  std::optional<WeightVector> weights;
  double level = kNaN;
  if (!noise_flag.empty()) {
    const NoiseModel noise = parse_noise_flag(noise_flag, count(cfg, "k"));
    level = clean_level(noise);
    // Worst row of the model: the clean level against unit flip weights.
    std::vector<double> wv(noise.k(), std::isinf(level) ? 0.0 : 1.0);
    wv[0] = std::isinf(level) ? 1.0 : level;
    weights.emplace(std::move(wv));
    r.results["clean_level"] = format_number(level);
    summary << "clean level c = " << format_number(level) << "\n";
  } else {
    weights.emplace(numbers(cfg.at("weights")));
  }

  CsvTable t;
  t.header = {"family", "params", "r_closed", "r_numeric", "r_u_numeric",
              "weight_ratio", "product", "verdict"};
  r.results["losses"] = Json::array();
  for (const auto& text : strings(cfg.at("loss"))) {
    const LossSpec spec = parse_loss_spec(text);
    const auto closed = asymmetry_ratio_closed(spec);
    const double rn = try_ratio(&asymmetry_ratio_numeric, spec, step);
    const double ru = try_ratio(&upper_ratio_numeric, spec, step);
    const auto verdict = check_asymmetric_on_weights(spec, *weights, step);
    t.rows.push_back({std::string(family_name(spec.family())), spec.params_string(),
                      closed ? format_number(*closed) : "none", format_number(rn),
                      format_number(ru), format_number(verdict.weight_ratio),
                      format_number(verdict.product), std::string(status_name(verdict.status))});
    Json entry{{"loss", spec.to_string()}, {"verdict", status_name(verdict.status)}};
    summary << spec.to_string() << ": " << status_name(verdict.status);
    if (const auto a = critical_parameter(spec, verdict.weight_ratio)) {
      entry["a_critical"] = format_number(*a);
      summary << ", a* = " << format_number(*a);
    }
    if (!std::isnan(level)) {
      const double ratio = closed ? *closed : rn;
      entry["margin"] = format_number(std::isinf(level) ? level : level * ratio);
    }
    if (cfg.at("brute").get<bool>()) {
      const auto brute = verify_argmin_brute(spec, *weights, std::max(step, 0.01));
      entry["brute_asymmetric"] = brute.asymmetric;
      entry["brute_tie"] = brute.tie;
      entry["brute_minimizer"] = join(brute.minimizer, ';');
      summary << ", brute force " << (brute.asymmetric ? "agrees on vertex" : "finds interior/tie");
    }
    summary << "\n";
    r.results["losses"].push_back(entry);
  }
  r.csv = t.to_string();
  r.summary = summary.str();
  return r;
}

CommandResult cmd_calib(const Json& cfg) {
  const LossSpec spec = parse_loss_spec(cfg.at("loss").get<std::string>());
  const auto grid = parse_grid(cfg.at("eta_grid").get<std::string>());
  const auto rows = calibration_table(spec, grid, cfg.at("alpha_step").get<double>());
  CsvTable t;
  t.header = {"eta", "H", "H_minus", "gap"};
  std::size_t positive = 0;
  std::size_t checked = 0;
  for (const auto& row : rows) {
    t.rows.push_back({format_number(row.eta), format_number(row.H), format_number(row.H_minus),
                      format_number(row.gap)});
    if (std::abs(row.eta - 0.5) > 1e-12) {
      ++checked;
      if (row.gap > 0.0) ++positive;
    }
  }
  CommandResult r;
  r.csv = t.to_string();
  r.results = {{"loss", spec.to_string()}, {"positive_gaps", positive}, {"checked", checked}};
  r.summary = spec.to_string() + ": H^- > H at " + std::to_string(positive) + " of " +
              std::to_string(checked) + " eta values away from 1/2\n";
  return r;
}

CommandResult cmd_bound(const Json& cfg) {
  const std::size_t instances = count(cfg, "instances");
  const std::size_t max_points = count(cfg, "max_points");
  const double alpha_step = cfg.at("alpha_step").get<double>();
  const auto seed = cfg.at("seed").get<std::uint64_t>();
  CsvTable t;
  t.header = {"loss", "instance", "points", "lhs", "rhs", "holds"};
  CommandResult r;
  std::ostringstream summary;
  for (const auto& text : strings(cfg.at("loss"))) {
    const LossSpec spec = parse_loss_spec(text);
    Rng rng(seed);
    std::size_t violations = 0;
    for (std::size_t i = 0; i < instances; ++i) {
      const auto inst = random_binary_instance(rng, max_points);
      const auto rep = excess_risk_bound_check(spec, inst, alpha_step);
      if (!rep.holds) ++violations;
      t.rows.push_back({spec.to_string(), std::to_string(i), std::to_string(inst.points().size()),
                        format_number(rep.lhs), format_number(rep.rhs),
                        rep.holds ? "true" : "false"});
    }
    r.results[spec.to_string()] = {{"instances", instances}, {"violations", violations}};
    summary << spec.to_string() << ": " << violations << " violations in " << instances
            << " instances\n";
  }
  r.csv = t.to_string();
  r.summary = summary.str();
  return r;
}

FlipMap parse_flips(const std::string& text) {
  FlipMap flips;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw InvalidInput("flip '" + item + "' must be SRC:DST");
    const double from = parse_number(item.substr(0, colon));
    const double to = parse_number(item.substr(colon + 1));
    if (from < 0 || to < 0 || from != std::floor(from) || to != std::floor(to)) {
      throw InvalidInput("flip classes must be non-negative integers");
    }
    flips.emplace_back(static_cast<std::size_t>(from), static_cast<std::size_t>(to));
  }
  return flips;
}

NoiseModel noise_from_config(const Json& cfg) {
  const std::size_t k = count(cfg, "k");
  const std::string flag = cfg.at("noise").get<std::string>();
  if (!flag.empty()) return parse_noise_flag(flag, k);
  const std::string kind = cfg.at("kind").get<std::string>();
  const double eta = cfg.at("eta").get<double>();
  if (kind == "symmetric") return symmetric_noise_matrix(k, eta);
  if (kind == "asym-mnist") return asymmetric_map_matrix(k, eta, mnist_flips());
  if (kind == "asym-cifar10") return asymmetric_map_matrix(k, eta, cifar10_flips());
  if (kind == "grouped") return grouped_circular_matrix(k, eta, count(cfg, "group_size"));
  if (kind == "map") return asymmetric_map_matrix(k, eta, parse_flips(cfg.at("flips")));
  throw InvalidInput("unknown noise kind '" + kind + "'");
}

CommandResult cmd_noise(const Json& cfg) {
  const NoiseModel noise = noise_from_config(cfg);
  CommandResult r;
  r.csv = noise.to_csv();
  const bool dominant = is_clean_dominant(noise);
  std::ostringstream summary;
  summary << noise_kind_name(noise.kind()) << " noise, k = " << noise.k()
          << ", eta = " << format_number(noise.rate())
          << ", clean-labels-dominant: " << (dominant ? "yes" : "no");
  r.results = {{"kind", noise_kind_name(noise.kind())},
               {"k", noise.k()},
               {"eta", noise.rate()},
               {"clean_dominant", dominant}};
  if (dominant) {
    const double c = clean_level(noise);
    r.results["clean_level"] = format_number(c);
    summary << ", clean level c = " << format_number(c);
  }
  summary << "\n";
  const std::string dump = cfg.at("dump").get<std::string>();
  if (!dump.empty()) {
    write_file_atomic(dump, r.csv);
    summary << "matrix written to " << dump << "\n";
  }
  r.summary = summary.str();
  return r;
}

CommandResult cmd_fig2(const Json& cfg) {
  const std::string family = cfg.at("family").get<std::string>();
  const std::string params = cfg.at("params").get<std::string>();
  const LossSpec base = parse_loss_spec(params.empty() ? family : family + "(" + params + ")");
  const std::string param = cfg.at("param").get<std::string>();
  const auto grid = parse_grid(cfg.at("grid").get<std::string>());
  const double wratio = cfg.at("wratio").get<double>();
  const std::size_t k = count(cfg, "k");
  const std::size_t n_seeds = count(cfg, "seeds");
  if (n_seeds == 0) throw ConfigError("seeds", "must be >= 1");
  const auto seed0 = cfg.at("seed").get<std::uint64_t>();

  std::vector<std::uint64_t> seeds;
  std::vector<WeightVector> weights;
  CommandResult r;
  r.results["weights"] = Json::array();
  for (std::size_t s = 0; s < n_seeds; ++s) {
    seeds.push_back(seed0 + s);
    weights.push_back(random_toy_weights(k, wratio, mix_seed(seeds.back(), 0x3E16)));
    r.results["weights"].push_back(
        {{"seed", seeds.back()}, {"w", join(weights.back().values(), ';')}});
  }
  const auto sweep = sweep_param(base, param, grid, weights, count(cfg, "steps"),
                                 cfg.at("lr").get<double>(), seeds);

  CsvTable t;
  t.header = {"param", "seed", "p_m", "product", "converged"};
  std::ostringstream summary;
  summary << base.to_string() << " sweep over " << param << ", w_m/w_n = "
          << format_number(wratio) << "\n";
  r.results["curve"] = Json::array();
  for (const auto& pt : sweep.points) {
    for (const auto& run : pt.runs) {
      t.rows.push_back({format_number(pt.param), std::to_string(run.seed), format_number(run.p_m),
                        format_number(pt.product), run.converged ? "true" : "false"});
    }
    r.results["curve"].push_back({{"param", format_number(pt.param)},
                                  {"mean_p_m", format_number(pt.mean_p_m)},
                                  {"product", format_number(pt.product)}});
  }
  if (sweep.critical) {
    r.results["a_critical"] = format_number(*sweep.critical);
    summary << "critical a* = " << format_number(*sweep.critical) << "\n";
  }
  r.results["p_m_success"] = kToySuccess;
  r.results["p_m_failure"] = kToyFailure;
  r.csv = t.to_string();
  r.summary = summary.str();
  return r;
}

std::vector<std::size_t> sizes(const Json& j) {
  std::vector<std::size_t> out;
  for (const auto& v : j) {
    if (v.get<std::int64_t>() < 1) throw InvalidInput("hidden layer sizes must be >= 1");
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

CommandResult cmd_train(const Json& cfg) {
  const std::string dataset = cfg.at("dataset").get<std::string>();
  std::vector<NamedDataset> datasets;
  std::vector<std::size_t> hidden = sizes(cfg.at("hidden"));
  if (dataset == "blobs") {
    const Json& b = cfg.at("blobs");
    const std::size_t k = count(b, "k");
    const std::size_t dim = count(b, "dim");
    const double sep = b.at("separation").get<double>();
    const double spread = b.at("spread").get<double>();
    const auto seed = b.at("seed").get<std::uint64_t>();
    datasets.push_back({"blobs", make_blobs(k, count(b, "n_train"), dim, sep, spread, seed, 0),
                        make_blobs(k, count(b, "n_test"), dim, sep, spread, seed, 1)});
  } else if (dataset == "mnist") {
    const Json& m = cfg.at("mnist");
    const std::filesystem::path dir = m.at("dir").get<std::string>();
    if (dir.empty()) throw ConfigError("mnist.dir", "required for the mnist dataset");
    auto train = load_idx(dir / "train-images-idx3-ubyte", dir / "train-labels-idx1-ubyte");
    auto test = load_idx(dir / "t10k-images-idx3-ubyte", dir / "t10k-labels-idx1-ubyte");
    if (const std::size_t n = count(m, "train_limit"); n > 0) train = head(train, n);
    if (const std::size_t n = count(m, "test_limit"); n > 0) test = head(test, n);
    train.k = test.k = std::max(train.k, test.k);
    datasets.push_back({"mnist", std::move(train), std::move(test)});
    hidden = sizes(m.at("hidden"));
  } else {
    throw ConfigError("dataset", "expected 'blobs' or 'mnist'");
  }

  std::vector<LossSpec> specs;
  for (const auto& text : strings(cfg.at("loss"))) specs.push_back(parse_loss_spec(text));
  std::vector<NoiseModel> noises;
  for (const auto& text : strings(cfg.at("noise"))) {
    noises.push_back(parse_noise_flag(text, datasets.front().train.k));
  }
  TrainConfig tc;
  tc.epochs = count(cfg, "epochs");
  tc.batch_size = count(cfg, "batch_size");
  tc.learn_rate = cfg.at("learn_rate").get<double>();
  tc.momentum = cfg.at("momentum").get<double>();
  tc.weight_decay = cfg.at("weight_decay").get<double>();
  tc.cosine_anneal = cfg.at("cosine_anneal").get<bool>();
  tc.seed = cfg.at("seed").get<std::uint64_t>();

  const auto report = run_noise_experiment(specs, noises, datasets, hidden, tc, count(cfg, "seeds"));
  CommandResult r;
  r.csv = report.epoch_table().to_string();
  r.extra_csv.emplace_back("summary", report.summary_table().to_string());
  std::ostringstream summary;
  for (const auto& row : report.summary) {
    summary << row.dataset << " " << row.noise_kind << ":" << format_number(row.eta) << " "
            << row.loss << ": " << format_number(row.mean_acc) << " +- "
            << format_number(row.std_acc) << "\n";
  }
  r.results["cells"] = Json::array();
  for (const auto& run : report.runs) {
    r.results["cells"].push_back({{"dataset", run.dataset},
                                  {"loss", run.loss},
                                  {"noise_kind", run.noise_kind},
                                  {"eta", run.eta},
                                  {"seed", run.seed},
                                  {"final_acc", run.final_acc},
                                  {"seconds", run.seconds}});
  }
  r.summary = summary.str();
  return r;
}

template <typename F>
double best_seconds(std::size_t repeats, F&& body) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < std::max<std::size_t>(repeats, 1); ++i) {
    const auto start = std::chrono::steady_clock::now();
    body();
    const std::chrono::duration<double> d = std::chrono::steady_clock::now() - start;
    best = std::min(best, d.count());
  }
  return best;
}

CommandResult cmd_bench(const Json& cfg) {
  const std::size_t repeats = count(cfg, "repeats");
  const auto seed = cfg.at("seed").get<std::uint64_t>();
  const LossSpec agce = LossSpec::agce(0.6, 0.6);
  CsvTable t;
  t.header = {"task", "iterations", "seconds", "per_second"};
  const auto add = [&](const std::string& task, std::size_t iters, double seconds) {
    t.rows.push_back({task, std::to_string(iters), format_number(seconds),
                      format_number(static_cast<double>(iters) / seconds)});
  };
  volatile double sink = 0.0;

  Rng rng(seed);
  std::vector<double> z(10);
  for (double& v : z) v = rng.normal();
  const std::vector<double> u = softmax(z);
  constexpr std::size_t kEvals = 200000;
  add("loss_value", kEvals, best_seconds(repeats, [&] {
        for (std::size_t i = 0; i < kEvals; ++i) sink = sink + loss_value(agce, u, i % 10);
      }));
  add("loss_grad_logits", kEvals / 10, best_seconds(repeats, [&] {
        for (std::size_t i = 0; i < kEvals / 10; ++i) sink = sink + loss_grad_logits(agce, z, i % 10)[0];
      }));
  add("asymmetry_ratio_numeric", 1, best_seconds(repeats, [&] {
        sink = sink + asymmetry_ratio_numeric(agce, 0.01);
      }));
  const WeightVector w({0.5, 0.3, 0.2});
  add("verify_argmin_brute_k3", 1, best_seconds(repeats, [&] {
        sink = sink + verify_argmin_brute(agce, w, 0.01).minimum;
      }));
  const auto data = make_blobs(4, 1000, 20, 8.0, 1.0, seed);
  TrainConfig tc;
  tc.epochs = 1;
  tc.seed = seed;
  add("train_epoch_blobs", 1, best_seconds(repeats, [&] {
        sink = sink + train({20, 64, 64, 4}, tc, agce, data).history.back().train_loss;
      }));

  CommandResult r;
  r.csv = t.to_string();
  std::ostringstream summary;
  for (const auto& row : t.rows) summary << row[0] << ": " << row[2] << " s\n";
  r.summary = summary.str();
  return r;
}

}  // namespace

CommandResult run_command(std::string_view subcommand, const Json& config) {
  if (subcommand == "losses") return cmd_losses(config);
  if (subcommand == "asym") return cmd_asym(config);
  if (subcommand == "calib") return cmd_calib(config);
  if (subcommand == "bound") return cmd_bound(config);
  if (subcommand == "noise") return cmd_noise(config);
  if (subcommand == "fig2") return cmd_fig2(config);
  if (subcommand == "train") return cmd_train(config);
  if (subcommand == "bench") return cmd_bench(config);
  throw InvalidInput("unknown subcommand '" + std::string(subcommand) + "'");
}

}  // namespace alf::cli
