#include "prodridge/cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "prodridge/bandwidth.hpp"
#include "prodridge/csv.hpp"
#include "prodridge/datagen.hpp"
#include "prodridge/metrics.hpp"
#include "prodridge/modeseek.hpp"
#include "prodridge/parallel.hpp"
#include "prodridge/ridgefind.hpp"

namespace prodridge {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string kernel_name(const KernelProfile& k) {
  switch (k.kind) {
    case KernelProfile::Kind::Gaussian: return "gaussian";
    case KernelProfile::Kind::VonMises: return "von_mises";
    case KernelProfile::Kind::Custom: return "custom";
  }
  return "custom";
}

std::string default_sidecar(const std::string& out, const std::string& suffix) {
  std::filesystem::path p(out);
  p.replace_extension();
  return p.string() + suffix;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  f << text;
  if (!f) fail(ErrorCode::Io, "failed writing '" + path + "'");
}

json read_json(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::Io, "cannot open '" + path + "' for reading");
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    fail(ErrorCode::MalformedInput, path + ": " + e.what());
  }
}

CoordinateSystem parse_coords(const std::string& s) {
  if (s == "ambient") return CoordinateSystem::Ambient;
  if (s == "angular") return CoordinateSystem::Angular;
  fail(ErrorCode::InvalidArgument, "unknown coordinate system '" + s + "'");
}

// Point columns followed by named annotation columns.
CsvTable point_table(const ProductSpace& space, const std::vector<Point>& pts,
                     const std::vector<std::pair<std::string, std::vector<double>>>& extra) {
  CsvTable t;
  t.header = point_header(space);
  for (const auto& [name, _] : extra) t.header.push_back(name);
  const int a = space.ambient_dim();
  t.rows.resize(Eigen::Index(pts.size()), Eigen::Index(t.header.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    t.rows.row(Eigen::Index(i)).head(a) = pts[i].transpose();
    for (std::size_t c = 0; c < extra.size(); ++c) {
      t.rows(Eigen::Index(i), a + Eigen::Index(c)) = extra[c].second[i];
    }
  }
  return t;
}

// Everything a run records about itself.
struct Manifest {
  json doc = json::object();
  std::optional<std::string> path;

  void write() const {
    if (path) write_text(*path, doc.dump(2) + "\n");
  }
};

struct Session {
  std::vector<std::string> argv;
  std::ostream& out;
  std::ostream& err;
  Clock::time_point t0 = Clock::now();

  Manifest start(const std::string& command) const {
    Manifest m;
    m.doc["tool"] = "prodridge";
    m.doc["command"] = command;
    m.doc["argv"] = argv;
    return m;
  }

  void warn(Manifest& m, const std::vector<std::string>& w) const {
    for (const auto& s : w) {
      err << "warning: " << s << "\n";
      m.doc["warnings"].push_back(s);
    }
  }
};

// Options shared by every command that builds a density model.
struct ModelOptions {
  std::string space;
  std::string in;
  std::string coords = "ambient";
  std::string h = "auto";
  std::optional<double> h1, h2;
  int threads = 0;

  void attach(CLI::App* app) {
    app->add_option("--space", space, "product space, e.g. s2xr1, s1xs1, r2xr1")->required();
    app->add_option("--in", in, "data CSV")->required();
    app->add_option("--coords", coords, "ambient | angular (degrees)")
        ->check(CLI::IsMember({"ambient", "angular"}));
    app->add_option("--h", h, "'auto' or a bandwidth used for both factors");
    app->add_option("--h1", h1, "bandwidth of the first factor");
    app->add_option("--h2", h2, "bandwidth of the second factor");
    app->add_option("--threads", threads, "worker threads (0 = $PRODRIDGE_THREADS or all cores)")
        ->check(CLI::NonNegativeNumber);
  }
};

struct LoadedModel {
  ProductSpace space;
  std::vector<Point> data_points;
  KdeModel model;
};

LoadedModel load_model(const ModelOptions& o, const Session& s, Manifest& m) {
  const ProductSpace space = ProductSpace::parse(o.space);
  PointFile pf = read_points(o.in, space, parse_coords(o.coords));
  s.warn(m, pf.warnings);
  if (pf.points.cols() == 0) fail(ErrorCode::MalformedInput, o.in + ": no data rows");

  std::optional<Bandwidths> selected;
  auto auto_h = [&](int j) {
    if (!selected) selected = select_bandwidths(space, pf.points);
    return (*selected)[j];
  };
  std::optional<double> both;
  if (o.h != "auto") {
    try {
      both = std::stod(o.h);
    } catch (const std::exception&) {
      fail(ErrorCode::InvalidArgument, "--h must be 'auto' or a number, got '" + o.h + "'");
    }
  }
  const double h1 = o.h1 ? *o.h1 : both ? *both : auto_h(0);
  const double h2 = o.h2 ? *o.h2 : both ? *both : auto_h(1);
  const Bandwidths h(h1, h2);

  KdeModel model(space, pf.points, h);
  m.doc["space"] = space.to_string();
  m.doc["input"] = {{"path", o.in}, {"coords", o.coords}, {"rows", pf.points.cols()}};
  m.doc["kernels"] = {kernel_name(model.profile(0)), kernel_name(model.profile(1))};
  m.doc["bandwidths"] = {{"h1", h1},
                         {"h2", h2},
                         {"h1_source", o.h1 ? "given" : both ? "given" : "auto"},
                         {"h2_source", o.h2 ? "given" : both ? "given" : "auto"}};
  m.doc["threads"] = o.threads == 0 ? default_thread_count() : o.threads;
  return {space, matrix_to_points(pf.points), std::move(model)};
}

// Start and query files are always ambient: they are usually outputs of this tool.
std::vector<Point> load_starts(const std::optional<std::string>& path, const LoadedModel& lm,
                               const Session& s, Manifest& m) {
  if (!path) return lm.data_points;
  PointFile pf = read_points(*path, lm.space, CoordinateSystem::Ambient);
  s.warn(m, pf.warnings);
  m.doc["starts"] = *path;
  return matrix_to_points(pf.points);
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
  std::string scenario;
  std::optional<int> n;
  std::uint64_t seed = 0;
  std::optional<double> noise;
  int truth_samples = 2000;
  std::string out;
  std::optional<std::string> truth, manifest;
};

void cmd_simulate(const SimulateOptions& o, Session& s) {
  Manifest m = s.start("simulate");
  m.path = o.manifest.value_or(default_sidecar(o.out, ".manifest.json"));
  Scenario sc;
  sc.kind = parse_scenario(o.scenario);
  sc.n = o.n.value_or(default_size(sc.kind));
  sc.seed = o.seed;
  sc.noise_sigma = o.noise;
  sc.truth_samples = o.truth_samples;
  const auto t = Clock::now();
  const GeneratedData g = generate(sc);

  std::vector<std::pair<std::string, std::vector<double>>> extra;
  if (!g.component.empty()) {
    extra.push_back({"component", std::vector<double>(g.component.begin(), g.component.end())});
  }
  write_csv(o.out, point_table(g.space, matrix_to_points(g.data), extra));

  const std::string truth_path = o.truth.value_or(default_sidecar(o.out, "_truth.csv"));
  std::string truth_kind;
  if (g.truth.manifold_sample) {
    const PointSet& ms = *g.truth.manifold_sample;
    if (ms.metric.kind == SetMetric::Kind::AmbientEuclidean) {
      CsvTable t;
      t.header = {"cx", "cy", "cz"};
      t.rows.resize(Eigen::Index(ms.size()), 3);
      for (std::size_t i = 0; i < ms.size(); ++i) t.rows.row(Eigen::Index(i)) = ms.points[i].transpose();
      write_csv(truth_path, t);
      truth_kind = "manifold_cartesian";
    } else {
      write_csv(truth_path, point_table(g.space, ms.points, {}));
      truth_kind = "manifold";
    }
  } else {
    write_csv(truth_path, point_table(g.space, g.truth.true_modes, {}));
    truth_kind = "modes";
  }

  m.doc["space"] = g.space.to_string();
  m.doc["scenario"] = scenario_name(sc.kind);
  m.doc["seed"] = o.seed;
  m.doc["config"] = {{"n", sc.n}, {"noise_sigma", g.noise_sigma}, {"truth_samples", sc.truth_samples}};
  if (sc.kind == ScenarioKind::ProductVmfMixture) {
    m.doc["config"]["mixture_weights"] = product_vmf_weights();
    m.doc["config"]["note"] = "per-factor mixture weights renormalized to sum to one";
  }
  m.doc["outputs"] = {{"data", o.out}, {"truth", truth_path}, {"truth_kind", truth_kind}};
  m.doc["counts"] = {{"points", g.data.cols()}};
  m.doc["timing_seconds"] = {{"generate", seconds_since(t)}, {"total", seconds_since(s.t0)}};
  m.write();
  s.out << json({{"data", o.out}, {"truth", truth_path}, {"rows", g.data.cols()}}).dump() << "\n";
}

// --------------------------------------------------------------- bandwidth

struct BandwidthOptions {
  std::string space, in, coords = "ambient";
  std::optional<std::string> out, manifest;
};

void cmd_bandwidth(const BandwidthOptions& o, Session& s) {
  Manifest m = s.start("bandwidth");
  m.path = o.manifest ? o.manifest : o.out ? std::optional(default_sidecar(*o.out, ".manifest.json"))
                                           : std::nullopt;
  const ProductSpace space = ProductSpace::parse(o.space);
  PointFile pf = read_points(o.in, space, parse_coords(o.coords));
  s.warn(m, pf.warnings);
  const Bandwidths h = select_bandwidths(space, pf.points);
  json res = {{"h1", h.h1}, {"h2", h.h2}, {"n", pf.points.cols()}, {"space", space.to_string()}};
  m.doc["space"] = space.to_string();
  m.doc["input"] = {{"path", o.in}, {"coords", o.coords}, {"rows", pf.points.cols()}};
  m.doc["bandwidths"] = {{"h1", h.h1}, {"h2", h.h2}, {"h1_source", "auto"}, {"h2_source", "auto"}};
  m.doc["timing_seconds"] = {{"total", seconds_since(s.t0)}};
  if (o.out) write_text(*o.out, res.dump(2) + "\n");
  m.write();
  s.out << res.dump() << "\n";
}

// ------------------------------------------------------------------- modes

struct ModesOptions {
  ModelOptions model;
  std::string variant = "simultaneous";
  double tol = 1e-7;
  int max_iter = 5000;
  double denoise = 0.05;
  std::optional<double> merge_radius;
  std::optional<std::string> starts, labels, manifest;
  std::string out;
};

void cmd_modes(const ModesOptions& o, Session& s) {
  Manifest m = s.start("modes");
  m.path = o.manifest.value_or(default_sidecar(o.out, ".manifest.json"));
  LoadedModel lm = load_model(o.model, s, m);
  const std::vector<Point> starts = load_starts(o.starts, lm, s, m);

  MeanShiftConfig cfg;
  cfg.variant = o.variant == "componentwise" ? MeanShiftVariant::Componentwise
                                             : MeanShiftVariant::Simultaneous;
  cfg.tolerance = o.tol;
  cfg.max_iterations = o.max_iter;
  cfg.denoise_quantile = o.denoise;
  cfg.merge_radius = o.merge_radius;
  cfg.threads = o.model.threads;

  const auto t = Clock::now();
  const ModeSet ms = find_modes(lm.model, starts, cfg);
  const double run_s = seconds_since(t);

  write_csv(o.out, point_table(lm.space, ms.modes,
                               {{"density", ms.density_values}, {"top_eigenvalue", ms.top_eigenvalues}}));
  if (o.labels) {
    CsvTable t;
    t.header = {"label", "iterations", "converged", "final_step"};
    t.rows.resize(Eigen::Index(starts.size()), 4);
    for (std::size_t i = 0; i < starts.size(); ++i) {
      const RunReport& r = ms.reports[i];
      t.rows.row(Eigen::Index(i)) << ms.basin_labels[i], r.iterations, r.converged ? 1.0 : 0.0,
          r.final_step;
    }
    write_csv(*o.labels, t);
  }

  const double radius = cfg.merge_radius.value_or(
      0.5 * std::min(lm.model.bandwidths().h1, lm.model.bandwidths().h2));
  m.doc["config"] = {{"variant", o.variant}, {"tolerance", o.tol}, {"max_iterations", o.max_iter},
                     {"denoise_quantile", o.denoise}, {"merge_radius", radius}};
  m.doc["counts"] = {{"inputs", starts.size()},       {"denoised", ms.denoised},
                     {"converged", ms.converged},     {"dropped", ms.dropped},
                     {"rejected_saddles", ms.rejected_saddles}, {"merged", ms.modes.size()}};
  m.doc["outputs"] = {{"modes", o.out}};
  if (o.labels) m.doc["outputs"]["labels"] = *o.labels;
  m.doc["timing_seconds"] = {{"mean_shift", run_s}, {"total", seconds_since(s.t0)}};
  m.write();
  s.out << json({{"modes", ms.modes.size()}, {"out", o.out}, {"converged", ms.converged}}).dump()
        << "\n";
}

// ------------------------------------------------------------------- ridge

struct RidgeOptions {
  ModelOptions model;
  int d = 1;
  std::string eta = "auto";
  std::string variant = "proposed";
  bool raw_density = false;
  double tol = 1e-7;
  int max_iter = 5000;
  double denoise = 0.0;
  std::optional<std::string> starts, report, manifest;
  std::string out;
};

void cmd_ridge(const RidgeOptions& o, Session& s) {
  Manifest m = s.start("ridge");
  m.path = o.manifest.value_or(default_sidecar(o.out, ".manifest.json"));
  LoadedModel lm = load_model(o.model, s, m);
  const std::vector<Point> starts = load_starts(o.starts, lm, s, m);

  ScmsConfig cfg;
  cfg.ridge_dim = o.d;
  if (o.eta != "auto") {
    try {
      cfg.step_size = std::stod(o.eta);
    } catch (const std::exception&) {
      fail(ErrorCode::InvalidArgument, "--eta must be 'auto' or a number, got '" + o.eta + "'");
    }
  }
  cfg.tolerance = o.tol;
  cfg.max_iterations = o.max_iter;
  cfg.use_log_density = !o.raw_density;
  cfg.variant = o.variant == "naive" ? ScmsVariant::NaivePitfall : ScmsVariant::Proposed;
  cfg.denoise_quantile = o.denoise;
  cfg.threads = o.model.threads;

  const auto t = Clock::now();
  const RidgeResult rr = find_ridge(lm.model, starts, cfg);
  const double run_s = seconds_since(t);

  std::vector<double> src, iters;
  for (std::size_t k = 0; k < rr.points.size(); ++k) {
    src.push_back(double(rr.source[k]));
    iters.push_back(rr.reports[rr.source[k]].iterations);
  }
  write_csv(o.out, point_table(lm.space, rr.points, {{"source", src}, {"iterations", iters}}));
  if (o.report) {
    CsvTable t;
    t.header = {"source", "iterations", "converged", "final_step"};
    t.rows.resize(Eigen::Index(starts.size()), 4);
    for (std::size_t i = 0; i < starts.size(); ++i) {
      const RunReport& r = rr.reports[i];
      t.rows.row(Eigen::Index(i)) << double(i), r.iterations, r.converged ? 1.0 : 0.0, r.final_step;
    }
    write_csv(*o.report, t);
  }

  m.doc["config"] = {{"ridge_dim", o.d},
                     {"step_size", rr.step_size},
                     {"step_size_source", cfg.step_size ? "given" : "auto"},
                     {"variant", o.variant},
                     {"log_density", cfg.use_log_density},
                     {"tolerance", o.tol},
                     {"max_iterations", o.max_iter},
                     {"denoise_quantile", o.denoise}};
  m.doc["counts"] = {{"inputs", starts.size()},
                     {"denoised", rr.denoised},
                     {"converged", rr.converged},
                     {"dropped", rr.dropped},
                     {"eigengap_warnings", rr.eigengap_warnings}};
  m.doc["outputs"] = {{"ridge", o.out}};
  if (o.report) m.doc["outputs"]["report"] = *o.report;
  m.doc["timing_seconds"] = {{"scms", run_s}, {"total", seconds_since(s.t0)}};
  if (rr.eigengap_warnings > 0) {
    s.warn(m, {std::to_string(rr.eigengap_warnings) + " trajectories hit an eigengap below 1e-10"});
  }
  m.write();
  s.out << json({{"points", rr.points.size()}, {"out", o.out}, {"dropped", rr.dropped},
                 {"step_size", rr.step_size}})
               .dump()
        << "\n";
}

// ----------------------------------------------------------------- density

struct DensityOptions {
  ModelOptions model;
  std::optional<std::string> query, manifest;
  bool log = false;
  bool gradient = false;
  std::string out;
};

void cmd_density(const DensityOptions& o, Session& s) {
  Manifest m = s.start("density");
  m.path = o.manifest.value_or(default_sidecar(o.out, ".manifest.json"));
  LoadedModel lm = load_model(o.model, s, m);
  const std::vector<Point> q = load_starts(o.query, lm, s, m);

  const int a = lm.space.ambient_dim();
  std::vector<double> val(q.size());
  std::vector<Vector> grad(o.gradient ? q.size() : 0);
  parallel_for(q.size(), o.model.threads, [&](std::size_t i) {
    if (o.gradient) {
      const DensityJet jet = o.log ? log_density_jet(lm.model, q[i]) : density_jet(lm.model, q[i]);
      val[i] = jet.value;
      grad[i] = jet.riem_gradient;
    } else {
      val[i] = o.log ? log_kde_value(lm.model, q[i]) : kde_value(lm.model, q[i]);
    }
  });
  std::vector<std::pair<std::string, std::vector<double>>> extra = {
      {o.log ? "log_density" : "density", val}};
  if (o.gradient) {
    for (int k = 0; k < a; ++k) {
      std::vector<double> col(q.size());
      for (std::size_t i = 0; i < q.size(); ++i) col[i] = grad[i][k];
      extra.push_back({"g" + std::to_string(k + 1), std::move(col)});
    }
  }
  write_csv(o.out, point_table(lm.space, q, extra));
  m.doc["config"] = {{"log", o.log}, {"gradient", o.gradient}};
  m.doc["counts"] = {{"queries", q.size()}};
  m.doc["outputs"] = {{"density", o.out}};
  m.doc["timing_seconds"] = {{"total", seconds_since(s.t0)}};
  m.write();
  s.out << json({{"queries", q.size()}, {"out", o.out}}).dump() << "\n";
}

// ----------------------------------------------------------------- metrics

struct MetricsOptions {
  std::string estimate, truth, space;
  std::string metric = "auto";
  std::string coords = "ambient";
  int threads = 0;
  std::optional<std::string> out, manifest;
};

std::vector<Vector> cartesian_rows(const CsvTable& t, const std::string& origin) {
  if (t.header.size() < 3) fail(ErrorCode::MalformedInput, origin + ": expected cx,cy,cz columns");
  std::vector<Vector> pts;
  for (Eigen::Index i = 0; i < t.rows.rows(); ++i) pts.push_back(t.rows.row(i).head(3).transpose());
  return pts;
}

void cmd_metrics(const MetricsOptions& o, Session& s) {
  Manifest m = s.start("metrics");
  m.path = o.manifest ? o.manifest : o.out ? std::optional(default_sidecar(*o.out, ".manifest.json"))
                                           : std::nullopt;
  const ProductSpace space = ProductSpace::parse(o.space);
  const CsvTable truth_t = read_csv(o.truth);
  const CsvTable est_t = read_csv(o.estimate);

  std::string metric = o.metric;
  if (metric == "auto") {
    metric = !truth_t.header.empty() && truth_t.header[0] == "cx" ? "cartesian" : "geodesic";
  }
  auto as_points = [&](const CsvTable& t, const std::string& origin) {
    PointFile pf = points_from_table(t, space, parse_coords(o.coords), origin);
    s.warn(m, pf.warnings);
    return matrix_to_points(pf.points);
  };

  std::optional<PointSet> est, truth;
  if (metric == "cartesian") {
    if (!(space.first == SpaceKind::sphere(2) && space.second == SpaceKind::euclidean(1))) {
      fail(ErrorCode::InvalidArgument, "cartesian metric needs space s2xr1");
    }
    est.emplace(to_cartesian(as_points(est_t, o.estimate)), SetMetric::ambient());
    const bool truth_cartesian = !truth_t.header.empty() && truth_t.header[0] == "cx";
    truth.emplace(truth_cartesian ? cartesian_rows(truth_t, o.truth)
                                  : to_cartesian(as_points(truth_t, o.truth)),
                  SetMetric::ambient());
  } else if (metric == "geodesic") {
    est.emplace(as_points(est_t, o.estimate), SetMetric::geodesic(space));
    truth.emplace(as_points(truth_t, o.truth), SetMetric::geodesic(space));
  } else {
    est.emplace(as_points(est_t, o.estimate), SetMetric::ambient());
    truth.emplace(as_points(truth_t, o.truth), SetMetric::ambient());
  }

  const double dh = hausdorff_distance(*est, *truth, o.threads);
  const double mre = manifold_recovering_error(*est, *truth, o.threads);
  json res = {{"hausdorff", dh},
              {"manifold_recovering_error", mre},
              {"metric", metric},
              {"estimate_points", est->size()},
              {"truth_points", truth->size()}};
  m.doc["space"] = space.to_string();
  m.doc["config"] = {{"metric", metric}, {"estimate", o.estimate}, {"truth", o.truth}};
  m.doc["counts"] = {{"estimate", est->size()}, {"truth", truth->size()}};
  m.doc["timing_seconds"] = {{"total", seconds_since(s.t0)}};
  if (o.out) write_text(*o.out, res.dump(2) + "\n");
  m.write();
  s.out << res.dump() << "\n";
}

// ------------------------------------------------------------------ replay

// Replaces the value of `--flag` in argv (or appends it).
void override_flag(std::vector<std::string>& argv, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    fail(ErrorCode::InvalidArgument, "--set expects FLAG=VALUE, got '" + assignment + "'");
  }
  const std::string flag = "--" + assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  for (std::size_t i = 0; i < argv.size(); ++i) {
    if (argv[i] == flag && i + 1 < argv.size()) {
      argv[i + 1] = value;
      return;
    }
    if (argv[i].rfind(flag + "=", 0) == 0) {
      argv[i] = flag + "=" + value;
      return;
    }
  }
  argv.push_back(flag);
  argv.push_back(value);
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

void cmd_replay(const std::string& manifest, const std::vector<std::string>& sets, Session& s,
                int& code) {
  const json doc = read_json(manifest);
  if (!doc.contains("argv") || !doc["argv"].is_array()) {
    fail(ErrorCode::MalformedInput, manifest + ": no argv recorded");
  }
  auto argv = doc["argv"].get<std::vector<std::string>>();
  if (!argv.empty() && argv[0] == "replay") fail(ErrorCode::MalformedInput, "refusing nested replay");
  for (const auto& a : sets) override_flag(argv, a);
  code = dispatch(argv, s.out, s.err);
}

void report_error(std::ostream& err, const std::string& code, const std::string& message) {
  err << json({{"error", code}, {"message", message}}).dump() << "\n";
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Session session{args, out, err};
  CLI::App app{"Mode and density-ridge estimation on product spaces"};
  app.name("prodridge");
  app.require_subcommand(1, 1);
  app.set_help_flag("--help", "print help");  // -h is taken by the bandwidth

  SimulateOptions sim;
  auto* c_sim = app.add_subcommand("simulate", "generate a scenario dataset and its truth file");
  c_sim->add_option("--scenario", sim.scenario,
                    "sim1 | sim2 | spiral | cone | cylinder | torus")->required();
  c_sim->add_option("--n", sim.n, "sample size (default: scenario's own)")->check(CLI::PositiveNumber);
  c_sim->add_option("--seed", sim.seed, "random seed");
  c_sim->add_option("--noise", sim.noise, "noise level (default: scenario's own)");
  c_sim->add_option("--truth-samples", sim.truth_samples, "points in the truth manifold sample")
      ->check(CLI::PositiveNumber);
  c_sim->add_option("--out", sim.out, "data CSV")->required();
  c_sim->add_option("--truth", sim.truth, "truth CSV (default <out>_truth.csv)");
  c_sim->add_option("--manifest", sim.manifest, "run manifest (default <out>.manifest.json)");

  BandwidthOptions bw;
  auto* c_bw = app.add_subcommand("bandwidth", "rule-of-thumb bandwidths per factor");
  c_bw->add_option("--space", bw.space)->required();
  c_bw->add_option("--in", bw.in)->required();
  c_bw->add_option("--coords", bw.coords)->check(CLI::IsMember({"ambient", "angular"}));
  c_bw->add_option("--out", bw.out, "JSON result file");
  c_bw->add_option("--manifest", bw.manifest);

  ModesOptions mo;
  auto* c_modes = app.add_subcommand("modes", "mean-shift mode estimation");
  mo.model.attach(c_modes);
  c_modes->add_option("--variant", mo.variant)
      ->check(CLI::IsMember({"simultaneous", "componentwise"}));
  c_modes->add_option("--tol", mo.tol)->check(CLI::PositiveNumber);
  c_modes->add_option("--max-iter", mo.max_iter)->check(CLI::PositiveNumber);
  c_modes->add_option("--denoise", mo.denoise, "density quantile below which starts are dropped")
      ->check(CLI::Range(0.0, 0.999999));
  c_modes->add_option("--merge-radius", mo.merge_radius)->check(CLI::PositiveNumber);
  c_modes->add_option("--starts", mo.starts, "start points CSV, ambient (default: the data)");
  c_modes->add_option("--out", mo.out, "modes CSV")->required();
  c_modes->add_option("--labels", mo.labels, "per-start basin labels CSV");
  c_modes->add_option("--manifest", mo.manifest);

  RidgeOptions ro;
  auto* c_ridge = app.add_subcommand("ridge", "SCMS density-ridge estimation");
  ro.model.attach(c_ridge);
  c_ridge->add_option("--d", ro.d, "ridge dimension")->check(CLI::NonNegativeNumber);
  c_ridge->add_option("--eta", ro.eta, "'auto' (min(h1 h2, 1)) or a step size");
  c_ridge->add_option("--variant", ro.variant)->check(CLI::IsMember({"proposed", "naive"}));
  c_ridge->add_flag("--raw-density", ro.raw_density, "use f instead of log f for the Hessian");
  c_ridge->add_option("--tol", ro.tol)->check(CLI::PositiveNumber);
  c_ridge->add_option("--max-iter", ro.max_iter)->check(CLI::PositiveNumber);
  c_ridge->add_option("--denoise", ro.denoise)->check(CLI::Range(0.0, 0.999999));
  c_ridge->add_option("--starts", ro.starts, "start points CSV, ambient (default: the data)");
  c_ridge->add_option("--out", ro.out, "ridge points CSV")->required();
  c_ridge->add_option("--report", ro.report, "per-start iteration report CSV");
  c_ridge->add_option("--manifest", ro.manifest);

  DensityOptions dn;
  auto* c_den = app.add_subcommand("density", "evaluate the KDE at query points");
  dn.model.attach(c_den);
  c_den->add_option("--query", dn.query, "query points CSV, ambient (default: the data)");
  c_den->add_flag("--log", dn.log);
  c_den->add_flag("--gradient", dn.gradient, "append Riemannian gradient columns");
  c_den->add_option("--out", dn.out)->required();
  c_den->add_option("--manifest", dn.manifest);

  MetricsOptions mt;
  auto* c_met = app.add_subcommand("metrics", "Hausdorff and manifold-recovering error");
  c_met->add_option("--estimate", mt.estimate)->required();
  c_met->add_option("--truth", mt.truth)->required();
  c_met->add_option("--space", mt.space)->required();
  c_met->add_option("--metric", mt.metric)
      ->check(CLI::IsMember({"auto", "cartesian", "geodesic", "ambient"}));
  c_met->add_option("--coords", mt.coords)->check(CLI::IsMember({"ambient", "angular"}));
  c_met->add_option("--threads", mt.threads)->check(CLI::NonNegativeNumber);
  c_met->add_option("--out", mt.out);
  c_met->add_option("--manifest", mt.manifest);

  std::string replay_manifest;
  std::vector<std::string> replay_sets;
  auto* c_rep = app.add_subcommand("replay", "re-run the command recorded in a manifest");
  c_rep->add_option("--manifest", replay_manifest)->required();
  c_rep->add_option("--set", replay_sets, "override a recorded flag, FLAG=VALUE");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    report_error(err, "usage", e.what());
    return 2;
  }

  try {
    int code = 0;
    if (*c_sim) cmd_simulate(sim, session);
    if (*c_bw) cmd_bandwidth(bw, session);
    if (*c_modes) cmd_modes(mo, session);
    if (*c_ridge) cmd_ridge(ro, session);
    if (*c_den) cmd_density(dn, session);
    if (*c_met) cmd_metrics(mt, session);
    if (*c_rep) cmd_replay(replay_manifest, replay_sets, session, code);
    return code;
  } catch (const Error& e) {
    report_error(err, std::string(to_string(e.code())), e.what());
  } catch (const std::exception& e) {
    report_error(err, "internal", e.what());
  }
  return 1;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return dispatch(args, out, err);
}

}  // namespace prodridge
