#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "formats.hpp"
#include "metric_cooks/error.hpp"
#include "metric_cooks/sdr.hpp"

namespace mcooks::cli {

namespace {

using linalg::Index;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MetricFlags {
  std::string metric;
  double diffusion_time = 1.0;
  bool diffusion_max = false;
  std::size_t fourier_grid = 64;
  std::size_t fourier_coeffs = 32;

  void attach(CLI::App* cmd) {
    cmd->add_option("--metric", metric, "Response metric (default depends on the space)");
    cmd->add_option("--diffusion-time", diffusion_time, "Heat-kernel time for the diffusion metric");
    cmd->add_flag("--diffusion-max", diffusion_max, "Maximise the diffusion distance over a time grid");
    cmd->add_option("--fourier-grid", fourier_grid, "Interpolation grid size for the fourier metric");
    cmd->add_option("--fourier-coeffs", fourier_coeffs, "Leading Fourier coefficients compared");
  }

  MetricOptions options() const {
    MetricOptions o;
    o.diffusion_time = diffusion_time;
    o.diffusion_maximize = diffusion_max;
    o.fourier_grid = fourier_grid;
    o.fourier_coeffs = fourier_coeffs;
    return o;
  }
};

Space usage_space(const std::string& name) {
  try {
    return parse_space(name);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

Metric usage_metric(const std::string& name, Space space) {
  if (name.empty()) return default_metric(space);
  Metric m;
  try {
    m = parse_metric(name);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (!metric_valid_for(space, m)) {
    throw UsageError("metric '" + name + "' does not apply to space '" +
                     std::string(to_string(space)) + "'");
  }
  return m;
}

std::optional<double> parse_threshold(const std::string& text) {
  if (text == "auto") return std::nullopt;
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || !(value > 0.0) ||
      !std::isfinite(value)) {
    throw UsageError("--threshold must be 'auto' or a positive number, got '" + text + "'");
  }
  return value;
}

nlohmann::ordered_json numbers(const Vector& v) {
  auto out = nlohmann::ordered_json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

nlohmann::ordered_json one_based(const std::vector<std::size_t>& idx) {
  auto out = nlohmann::ordered_json::array();
  for (auto i : idx) out.push_back(i + 1);
  return out;
}

// Replaces every float in the dump by its 17-digit form so reports are
// byte-stable regardless of the json library's float printer.
std::string dump_exact(const nlohmann::ordered_json& node, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  if (node.is_object()) {
    if (node.empty()) return "{}";
    std::string s = "{\n";
    bool first = true;
    for (const auto& [k, v] : node.items()) {
      if (!first) s += ",\n";
      first = false;
      s += inner + nlohmann::json(k).dump() + ": " + dump_exact(v, indent + 1);
    }
    return s + "\n" + pad + "}";
  }
  if (node.is_array()) {
    if (node.empty()) return "[]";
    const bool scalars = std::none_of(node.begin(), node.end(),
                                      [](const auto& e) { return e.is_structured(); });
    if (scalars) {
      std::string s = "[";
      for (std::size_t i = 0; i < node.size(); ++i) {
        if (i) s += ", ";
        s += dump_exact(node[i], indent + 1);
      }
      return s + "]";
    }
    std::string s = "[\n";
    for (std::size_t i = 0; i < node.size(); ++i) {
      if (i) s += ",\n";
      s += inner + dump_exact(node[i], indent + 1);
    }
    return s + "\n" + pad + "]";
  }
  if (node.is_number_float()) {
    const double v = node.get<double>();
    return std::isfinite(v) ? format_number(v) : "null";
  }
  return node.dump();
}

std::string loo_status(LooStatus s) { return s == LooStatus::Ok ? "ok" : "degenerate_loo"; }

std::filesystem::path plot_path_for(const std::filesystem::path& out) {
  std::filesystem::path p = out;
  p.replace_extension(".cooks.csv");
  return p;
}

struct AnalyzeArgs {
  std::string predictors, responses, space, threshold = "auto", out, format = "json", plot;
  MetricFlags metric;
};

int cmd_analyze(const AnalyzeArgs& a) {
  const Space space = usage_space(a.space);
  const Metric metric = usage_metric(a.metric.metric, space);
  const std::optional<double> threshold = parse_threshold(a.threshold);
  if (a.format != "json" && a.format != "csv") throw UsageError("--format must be json or csv");

  const Matrix x = parse_csv_matrix(read_file(a.predictors), a.predictors);
  const ResponseSet rs =
      parse_responses(read_file(a.responses), space, metric, a.metric.options(), a.responses);
  if (static_cast<std::size_t>(x.rows()) != rs.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "predictors have " + std::to_string(x.rows()) + " rows but responses have " +
                    std::to_string(rs.size()) + " objects");
  }

  const Parallelism par = parallelism_from_env();
  TrimResult result = trim_and_refit(x, rs, threshold, par);
  CooksReport& report = result.report;
  if (threshold) report.threshold = *threshold;
  report.flagged = result.trimmed;
  const std::vector<std::size_t> ranking = rank_observations(report.distances);
  const std::size_t n = rs.size();

  std::string plot = "index,delta,flagged\n";
  for (std::size_t i = 0; i < n; ++i) {
    const bool f = std::binary_search(report.flagged.begin(), report.flagged.end(), i);
    plot += std::to_string(i + 1) + "," + format_number(report.distances(static_cast<Index>(i))) +
            "," + (f ? "1" : "0") + "\n";
  }

  std::string main_out;
  if (a.format == "json") {
    nlohmann::ordered_json doc;
    doc["n"] = n;
    doc["p"] = static_cast<std::size_t>(x.cols());
    doc["space"] = std::string(to_string(space));
    doc["metric"] = std::string(to_string(metric));
    doc["threshold_mode"] = threshold ? "literal" : "auto";
    doc["threshold"] = report.threshold;
    doc["leading_eigenvalue"] = report.leading_eigenvalue;
    doc["s_squared"] = report.fit.s_squared;
    doc["coefficients"] = numbers(report.fit.coefficients);
    doc["basis_all"] = numbers(result.basis_all.direction);
    doc["basis_trimmed"] = numbers(result.basis_trimmed.direction);
    doc["flagged"] = one_based(report.flagged);
    doc["trimmed"] = one_based(result.trimmed);
    doc["ranking"] = one_based(ranking);
    auto obs = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < n; ++i) {
      nlohmann::ordered_json o;
      o["index"] = i + 1;
      o["delta"] = report.distances(static_cast<Index>(i));
      o["flagged"] = std::binary_search(report.flagged.begin(), report.flagged.end(), i);
      o["status"] = loo_status(report.status[i]);
      obs.push_back(o);
    }
    doc["observations"] = obs;
    main_out = dump_exact(doc) + "\n";
  } else {
    main_out = "key,value\n";
    main_out += "n," + std::to_string(n) + "\np," + std::to_string(x.cols()) + "\n";
    main_out += "space," + std::string(to_string(space)) + "\nmetric," +
                std::string(to_string(metric)) + "\n";
    main_out += "threshold," + format_number(report.threshold) + "\n";
    main_out += "leading_eigenvalue," + format_number(report.leading_eigenvalue) + "\n";
    main_out += "s_squared," + format_number(report.fit.s_squared) + "\n";
    const auto vec = [&main_out](const std::string& key, const Vector& v) {
      for (Index i = 0; i < v.size(); ++i) {
        main_out += key + "_" + std::to_string(i) + "," + format_number(v(i)) + "\n";
      }
    };
    vec("coefficient", report.fit.coefficients);
    vec("basis_all", result.basis_all.direction);
    vec("basis_trimmed", result.basis_trimmed.direction);
    for (std::size_t r = 0; r < ranking.size(); ++r) {
      main_out += "rank_" + std::to_string(r + 1) + "," + std::to_string(ranking[r] + 1) + "\n";
    }
  }

  const std::filesystem::path plot_path = a.plot.empty() ? plot_path_for(a.out) : std::filesystem::path(a.plot);
  write_file_atomic(plot_path, plot);
  write_file_atomic(a.out, main_out);
  return kOk;
}

struct SimulateArgs {
  std::vector<std::string> models;
  std::size_t n = 100, p = 5, reps = 500, nodes = 10;
  std::uint64_t seed = 1;
  std::string out;
  MetricFlags metric;
};

int cmd_simulate(const SimulateArgs& a) {
  if (a.reps == 0) throw UsageError("--reps must be at least 1");
  std::vector<ModelSpec> specs;
  for (const auto& item : a.models) {
    std::stringstream list(item);
    std::string name;
    while (std::getline(list, name, ',')) {
      if (name.empty()) continue;
      ModelSpec spec;
      try {
        spec.model = parse_model(name);
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      spec.n = a.n;
      spec.p = a.p;
      spec.graph_nodes = a.nodes;
      spec.metric_options = a.metric.options();
      const Space space = model_space(spec.model);
      std::vector<Metric> metrics;
      if (!a.metric.metric.empty()) {
        metrics.push_back(usage_metric(a.metric.metric, space));
      } else if (space == Space::Network) {
        metrics = {Metric::Centrality, Metric::Diffusion};
      } else {
        metrics.push_back(default_metric(space));
      }
      for (Metric m : metrics) {
        spec.metric = m;
        try {
          spec.validate();
        } catch (const Error& e) {
          throw UsageError(e.what());
        }
        specs.push_back(spec);
      }
    }
  }
  if (specs.empty()) throw UsageError("--model lists no models");

  const auto rows = run_experiment(specs, a.reps, a.seed, parallelism_from_env());
  write_file_atomic(a.out, simulate_csv(rows));
  const bool any_failed = std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.failed; });
  return any_failed ? kPipeline : kOk;
}

struct DistancesArgs {
  std::string responses, space, out;
  MetricFlags metric;
};

int cmd_distances(const DistancesArgs& a) {
  const Space space = usage_space(a.space);
  const Metric metric = usage_metric(a.metric.metric, space);
  const ResponseSet rs =
      parse_responses(read_file(a.responses), space, metric, a.metric.options(), a.responses);
  const DistanceMatrix d = pairwise_distances(rs, parallelism_from_env());
  write_file_atomic(a.out, write_csv_matrix(d.matrix()));
  return kOk;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return kParse;
    case ErrorKind::DimensionMismatch: return kDimension;
    default: return kPipeline;
  }
}

}  // namespace

std::vector<std::size_t> rank_observations(const Vector& distances) {
  std::vector<double> key(static_cast<std::size_t>(distances.size()));
  for (std::size_t i = 0; i < key.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", distances(static_cast<Index>(i)));
    key[i] = std::strtod(buf, nullptr);
  }
  std::vector<std::size_t> order(key.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&key](std::size_t l, std::size_t r) { return key[l] > key[r]; });
  return order;
}

Parallelism parallelism_from_env() {
  Parallelism par;
  const char* raw = std::getenv("METRIC_COOKS_THREADS");
  if (raw == nullptr || *raw == '\0') return par;
  const std::string_view text(raw);
  unsigned value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw UsageError("METRIC_COOKS_THREADS must be a nonnegative integer, got '" +
                     std::string(text) + "'");
  }
  par.threads = value;
  return par;
}

std::string simulate_csv(const std::vector<ExperimentRow>& rows) {
  std::string out =
      "model,n,p,method,metric,replications,failures,mean_delta_all,sd_delta_all,"
      "mean_delta_trimmed,sd_delta_trimmed,flagged_mean,status\n";
  for (const auto& r : rows) {
    out += std::string(to_string(r.spec.model)) + "," + std::to_string(r.spec.n) + "," +
           std::to_string(r.spec.p) + ",mds-ols," + std::string(to_string(r.spec.response_metric())) +
           "," + std::to_string(r.replications) + "," + std::to_string(r.failures) + "," +
           format_number(r.mean_delta_all) + "," + format_number(r.sd_delta_all) + "," +
           format_number(r.mean_delta_trimmed) + "," + format_number(r.sd_delta_trimmed) + "," +
           format_number(r.mean_flagged) + "," + (r.failed ? "ExperimentFailed" : "ok") + "\n";
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Metric Cook's distance for regression with metric-space responses", "metric-cooks"};
  app.require_subcommand(1);

  AnalyzeArgs analyze;
  auto* an = app.add_subcommand("analyze", "Cook's distances, flags and bases for one dataset");
  an->add_option("--predictors,-x", analyze.predictors, "Predictor CSV (n rows, p columns)")->required();
  an->add_option("--responses,-y", analyze.responses, "Response file")->required();
  an->add_option("--space", analyze.space, "euclidean | distribution | network | functional")->required();
  an->add_option("--threshold", analyze.threshold, "'auto' (4/(n-p-1)) or a positive number");
  an->add_option("--out", analyze.out, "Report path")->required();
  an->add_option("--format", analyze.format, "json | csv");
  an->add_option("--plot", analyze.plot, "Plot-ready CSV path (default: <out>.cooks.csv)");
  analyze.metric.attach(an);

  SimulateArgs simulate;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo study of basis recovery before and after trimming");
  sim->add_option("--model", simulate.models, "Model ids I..VIII; repeat or comma-separate")->required();
  sim->add_option("--n", simulate.n, "Sample size");
  sim->add_option("--p", simulate.p, "Predictor dimension");
  sim->add_option("--reps", simulate.reps, "Replications per row");
  sim->add_option("--seed", simulate.seed, "Base seed");
  sim->add_option("--nodes", simulate.nodes, "Graph size for the network models");
  sim->add_option("--out", simulate.out, "Output CSV path")->required();
  simulate.metric.attach(sim);

  DistancesArgs distances;
  auto* dist = app.add_subcommand("distances", "Pairwise response distance matrix");
  dist->add_option("--responses,-y", distances.responses, "Response file")->required();
  dist->add_option("--space", distances.space, "euclidean | distribution | network | functional")->required();
  dist->add_option("--out", distances.out, "Output CSV path")->required();
  distances.metric.attach(dist);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (an->parsed()) return cmd_analyze(analyze);
    if (sim->parsed()) return cmd_simulate(simulate);
    return cmd_distances(distances);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kPipeline;
  }
}

}  // namespace mcooks::cli
