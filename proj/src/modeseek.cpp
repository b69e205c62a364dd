#include "prodridge/modeseek.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "prodridge/parallel.hpp"
#include "prodridge/ridgefind.hpp"

namespace prodridge {

namespace {

constexpr double kModeEigenThreshold = -1e-10;

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(std::size_t(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int i) {
    while (parent[std::size_t(i)] != i) {
      parent[std::size_t(i)] = parent[std::size_t(parent[std::size_t(i)])];
      i = parent[std::size_t(i)];
    }
    return i;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::size_t(std::max(a, b))] = std::min(a, b);
  }
};

bool lex_less(const Point& a, const Point& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

}  // namespace

Vector mean_shift_vector(const KdeModel& model, const Point& z) {
  return mean_shift_decomposition(model, z).xi;
}

Point mean_shift_step(const KdeModel& model, const Point& z, MeanShiftVariant variant) {
  const ProductSpace& space = model.space();
  Point next = z;
  if (variant == MeanShiftVariant::Simultaneous) {
    next += mean_shift_vector(model, z);
    normalize_directional(space, next);
    return next;
  }
  for (int j = 0; j < 2; ++j) {
    auto b = block(space, next, j);
    b += mean_shift_block(model, next, j);
    if (space.factor(j).directional()) {
      const double norm = b.norm();
      if (!(norm >= 1e-300)) fail(ErrorCode::ZeroNorm, "directional block collapsed to zero norm");
      b /= norm;
    }
  }
  return next;
}

RunReport run_mean_shift(const KdeModel& model, const Point& start, const MeanShiftConfig& config) {
  if (!(config.tolerance > 0.0) || config.max_iterations < 1) {
    fail(ErrorCode::InvalidArgument, "mean shift needs tolerance > 0 and max_iterations >= 1");
  }
  RunReport report;
  Point z = start;
  if (config.record_trace) report.density_trace.push_back(kde_value(model, z));
  for (int t = 0; t < config.max_iterations; ++t) {
    Point next = mean_shift_step(model, z, config.variant);
    report.final_step = (next - z).norm();
    report.iterations = t + 1;
    z = std::move(next);
    if (config.record_trace) report.density_trace.push_back(kde_value(model, z));
    if (report.final_step <= config.tolerance) {
      report.converged = true;
      break;
    }
  }
  report.final_density = config.record_trace ? report.density_trace.back() : kde_value(model, z);
  report.final_point = std::move(z);
  return report;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) fail(ErrorCode::InvalidArgument, "quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * double(values.size() - 1);
  const auto lo = std::size_t(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - double(lo)) * (values[hi] - values[lo]);
}

std::vector<int> single_linkage(const ProductSpace& space, const std::vector<Point>& pts,
                                double radius) {
  const int m = int(pts.size());
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return lex_less(pts[std::size_t(a)], pts[std::size_t(b)]); });
  UnionFind uf(m);
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      if (uf.find(a) == uf.find(b)) continue;
      const auto& pa = pts[std::size_t(order[std::size_t(a)])];
      const auto& pb = pts[std::size_t(order[std::size_t(b)])];
      if (geodesic_distance(space, pa, pb) <= radius) uf.unite(a, b);
    }
  }
  // number clusters by first appearance in sorted order
  std::vector<int> root_id(static_cast<std::size_t>(m), -1);
  std::vector<int> out(static_cast<std::size_t>(m));
  int next = 0;
  for (int a = 0; a < m; ++a) {
    const int r = uf.find(a);
    if (root_id[std::size_t(r)] < 0) root_id[std::size_t(r)] = next++;
    out[std::size_t(order[std::size_t(a)])] = root_id[std::size_t(r)];
  }
  return out;
}

std::vector<char> low_density_mask(const KdeModel& model, const std::vector<Point>& starts,
                                   double q, int threads) {
  if (q < 0.0 || q >= 1.0) fail(ErrorCode::InvalidArgument, "denoise quantile must lie in [0, 1)");
  std::vector<char> mask(starts.size(), 0);
  if (q == 0.0) return mask;
  const Vector data_density = kde_values(model, matrix_to_points(model.data()), threads);
  const double cut = quantile({data_density.data(), data_density.data() + data_density.size()}, q);
  const Vector start_density = kde_values(model, starts, threads);
  for (std::size_t i = 0; i < starts.size(); ++i) mask[i] = start_density[Eigen::Index(i)] < cut;
  return mask;
}

ModeSet find_modes(const KdeModel& model, const std::vector<Point>& starts,
                   const MeanShiftConfig& config) {
  if (starts.empty()) fail(ErrorCode::InvalidArgument, "find_modes needs at least one start");
  if (config.denoise_quantile < 0.0 || config.denoise_quantile >= 1.0) {
    fail(ErrorCode::InvalidArgument, "denoise quantile must lie in [0, 1)");
  }
  const ProductSpace& space = model.space();
  for (const auto& s : starts) validate_point(space, s, 1e-10);

  const std::size_t n = starts.size();
  std::vector<char> active(n, 1);
  ModeSet out;
  out.reports.resize(n);
  out.basin_labels.assign(n, -1);

  const std::vector<char> low = low_density_mask(model, starts, config.denoise_quantile, config.threads);
  if (config.denoise_quantile > 0.0) {
    const Vector start_density = kde_values(model, starts, config.threads);
    for (std::size_t i = 0; i < n; ++i) {
      if (low[i]) {
        active[i] = 0;
        out.reports[i].final_point = starts[i];
        out.reports[i].final_density = start_density[Eigen::Index(i)];
        ++out.denoised;
      }
    }
  }

  parallel_for(n, config.threads, [&](std::size_t i) {
    if (active[i]) out.reports[i] = run_mean_shift(model, starts[i], config);
  });

  std::vector<std::size_t> survivors;
  for (std::size_t i = 0; i < n; ++i) {
    if (!active[i]) continue;
    if (out.reports[i].converged) {
      survivors.push_back(i);
    } else {
      ++out.dropped;
    }
  }
  out.converged = survivors.size();
  if (survivors.empty()) fail(ErrorCode::EmptyResult, "no mean-shift trajectory converged");

  const double radius = config.merge_radius.value_or(
      0.5 * std::min(model.bandwidths().h1, model.bandwidths().h2));
  std::vector<Point> ends;
  ends.reserve(survivors.size());
  for (auto i : survivors) ends.push_back(out.reports[i].final_point);
  const std::vector<int> cluster = single_linkage(space, ends, radius);
  const int n_clusters = cluster.empty() ? 0 : *std::max_element(cluster.begin(), cluster.end()) + 1;

  // representative: highest-density member, ties resolved by lowest start index
  std::vector<int> rep(std::size_t(n_clusters), -1);
  for (std::size_t k = 0; k < survivors.size(); ++k) {
    auto& r = rep[std::size_t(cluster[k])];
    if (r < 0 || out.reports[survivors[k]].final_density >
                     out.reports[survivors[std::size_t(r)]].final_density) {
      r = int(k);
    }
  }

  std::vector<int> mode_index(std::size_t(n_clusters), -1);
  for (int c = 0; c < n_clusters; ++c) {
    const RunReport& r = out.reports[survivors[std::size_t(rep[std::size_t(c)])]];
    const Matrix hess = riemannian_hessian(model, r.final_point);
    const double top = tangent_eigendecomposition(hess, space, r.final_point, 0).eigenvalues[0];
    // The sign test runs on the Hessian in bandwidth units divided by the density, so a
    // linear coordinate measured in seconds is judged like one measured in degrees.
    // Congruence by the block-constant bandwidth scaling keeps the tangent space and the signs.
    const Vector scale = bandwidth_diagonal(space, model.bandwidths()).cwiseSqrt();
    const Matrix scaled = scale.asDiagonal() * hess * scale.asDiagonal() *
                          std::exp(-log_kde_value(model, r.final_point));
    const double top_scaled = tangent_eigendecomposition(scaled, space, r.final_point, 0).eigenvalues[0];
    if (!(top_scaled < kModeEigenThreshold)) {
      ++out.rejected_saddles;
      continue;
    }
    mode_index[std::size_t(c)] = int(out.modes.size());
    out.modes.push_back(r.final_point);
    out.density_values.push_back(r.final_density);
    out.top_eigenvalues.push_back(top);
  }
  for (std::size_t k = 0; k < survivors.size(); ++k) {
    out.basin_labels[survivors[k]] = mode_index[std::size_t(cluster[k])];
  }
  if (out.modes.empty()) fail(ErrorCode::EmptyResult, "no converged endpoint is a local maximum");
  return out;
}

}  // namespace prodridge
