#include "ela/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ela/errors.hpp"

namespace ela {

namespace {

// Nearest-rank quantile: the smallest value whose empirical CDF reaches
// gamma. Guarantees a nonempty selection for any gamma in (0, 1].
double nearest_rank_quantile(std::vector<double> sorted, double gamma) {
  const std::size_t n = sorted.size();
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 1; k <= n; ++k) {
    if (static_cast<double>(k) / static_cast<double>(n) >= gamma) return sorted[k - 1];
  }
  return sorted.back();
}

void check_series(const DivergenceSeries& series) {
  if (series.values.empty()) {
    throw StructuralError("mapper needs a nonempty divergence series");
  }
  for (double v : series.values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw DomainError("divergence series values must be finite and nonnegative");
    }
  }
}

void check_gamma(double gamma) {
  if (!(gamma > 0.0) || gamma > 1.0) {
    throw ConfigError("gamma quantile must lie in (0, 1], got " + std::to_string(gamma));
  }
}

// Selection and normalization shared by every quantile mapper: returns
// the sorted selected indices and their min-max normalized values
// (all 0.5 when the selection is degenerate).
struct Selection {
  std::vector<std::size_t> indices;
  std::vector<double> normalized;
};

Selection select_and_normalize(const DivergenceSeries& series, double gamma) {
  const std::vector<double>& v = series.values;
  const double q = nearest_rank_quantile(v, gamma);

  Selection sel;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] <= q) sel.indices.push_back(i);
  }
  double lo = v[sel.indices.front()];
  double hi = lo;
  for (std::size_t i : sel.indices) {
    lo = std::min(lo, v[i]);
    hi = std::max(hi, v[i]);
  }
  sel.normalized.reserve(sel.indices.size());
  if (hi == lo) {
    sel.normalized.assign(sel.indices.size(), 0.5);
  } else {
    for (std::size_t i : sel.indices) sel.normalized.push_back((v[i] - lo) / (hi - lo));
  }
  return sel;
}

// Assemble MappedScores from a selection and its transformed values.
MappedScores assemble(const DivergenceSeries& series, const MapperConfig& cfg,
                      const Selection& sel, const std::vector<double>& transformed) {
  MappedScores out;
  out.config_used = cfg;
  out.values.assign(series.values.size(), 1.0);
  out.selected_set = sel.indices;
  for (std::size_t j = 0; j < sel.indices.size(); ++j) {
    out.values[sel.indices[j]] = transformed[j];
  }
  return out;
}

template <typename Transform>
MappedScores quantile_pipeline(const DivergenceSeries& series, const MapperConfig& cfg,
                               Transform&& transform) {
  check_series(series);
  check_gamma(cfg.gamma_quantile);
  const Selection sel = select_and_normalize(series, cfg.gamma_quantile);
  std::vector<double> transformed = transform(sel.normalized);
  return assemble(series, cfg, sel, transformed);
}

template <typename Params>
const Params& require_params(const MapperConfig& cfg, const char* what) {
  const Params* p = std::get_if<Params>(&cfg.dist_params);
  if (p == nullptr) {
    throw ConfigError(std::string("mapper '") + to_string(cfg.kind) + "' needs " + what);
  }
  return *p;
}

// Monotone-CDF inversion by bisection on a bracket.
double invert_monotone_cdf(double p, double lo, double hi, auto&& cdf) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double inverse_cdf(double p, const DistParams& target) {
  struct Inverter {
    double p;
    double operator()(std::monostate) const {
      throw ConfigError("quantile_map target distribution is unset");
    }
    double operator()(const BetaParams& bp) const {
      if (p <= 0.0) return 0.0;
      if (p >= 1.0) return 1.0;
      return invert_monotone_cdf(p, 0.0, 1.0, [&](double x) { return beta_cdf(x, bp); });
    }
    double operator()(const GammaParams& gp) const {
      if (p <= 0.0) return 0.0;
      double hi = gp.beta * (gp.alpha + 10.0 * std::sqrt(gp.alpha) + 10.0);
      while (gamma_cdf(hi, gp) < p) hi *= 2.0;
      return invert_monotone_cdf(p, 0.0, hi, [&](double x) { return gamma_cdf(x, gp); });
    }
    double operator()(const ExpParams& ep) const {
      if (p <= 0.0) return 0.0;
      return -std::log1p(-p) / ep.lambda;
    }
  };
  return std::visit(Inverter{p}, target);
}

}  // namespace

std::string to_string(MapperKind kind) {
  switch (kind) {
    case MapperKind::kEbqm: return "ebqm";
    case MapperKind::kGqm: return "gqm";
    case MapperKind::kEqm: return "eqm";
    case MapperKind::kNormalCdf: return "normal";
    case MapperKind::kSoftmax: return "softmax";
    case MapperKind::kSigmoid: return "sigmoid";
    case MapperKind::kRawThreshold: return "raw";
    case MapperKind::kFixedCount: return "fixed";
  }
  return "unknown";
}

MapperKind mapper_kind_from_string(const std::string& name) {
  if (name == "ebqm") return MapperKind::kEbqm;
  if (name == "gqm") return MapperKind::kGqm;
  if (name == "eqm") return MapperKind::kEqm;
  if (name == "normal") return MapperKind::kNormalCdf;
  if (name == "softmax") return MapperKind::kSoftmax;
  if (name == "sigmoid") return MapperKind::kSigmoid;
  if (name == "raw") return MapperKind::kRawThreshold;
  if (name == "fixed") return MapperKind::kFixedCount;
  throw ConfigError("unknown mapper kind '" + name + "'");
}

std::vector<double> empirical_cdf(std::span<const double> xs) {
  if (xs.empty()) throw StructuralError("empirical_cdf needs a nonempty sample");
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(xs.size());
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) {
    const auto count = std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
    out.push_back(static_cast<double>(count) / n);
  }
  return out;
}

std::vector<double> quantile_map(std::span<const double> xs, const DistParams& target) {
  std::vector<double> ps = empirical_cdf(xs);
  const double cap = static_cast<double>(xs.size()) / (static_cast<double>(xs.size()) + 1.0);
  std::vector<double> out;
  out.reserve(xs.size());
  for (double p : ps) out.push_back(inverse_cdf(std::min(p, cap), target));
  return out;
}

MappedScores ebqm(const DivergenceSeries& series, const MapperConfig& cfg) {
  const BetaParams& bp = require_params<BetaParams>(cfg, "Beta parameters");
  return quantile_pipeline(series, cfg, [&](const std::vector<double>& norm) {
    std::vector<double> out;
    out.reserve(norm.size());
    for (double a : norm) out.push_back(beta_cdf(a, bp));
    return out;
  });
}

MappedScores gqm(const DivergenceSeries& series, const MapperConfig& cfg) {
  const GammaParams& gp = require_params<GammaParams>(cfg, "Gamma parameters");
  return quantile_pipeline(series, cfg, [&](const std::vector<double>& norm) {
    std::vector<double> out;
    out.reserve(norm.size());
    for (double a : norm) out.push_back(gamma_cdf(a, gp));
    return out;
  });
}

MappedScores eqm(const DivergenceSeries& series, const MapperConfig& cfg) {
  const ExpParams& ep = require_params<ExpParams>(cfg, "Exponential parameters");
  return quantile_pipeline(series, cfg, [&](const std::vector<double>& norm) {
    std::vector<double> out;
    out.reserve(norm.size());
    for (double a : norm) out.push_back(exp_cdf(a, ep));
    return out;
  });
}

MappedScores normal_map(const DivergenceSeries& series, const MapperConfig& cfg) {
  return quantile_pipeline(series, cfg, [](const std::vector<double>& norm) {
    double mean = std::accumulate(norm.begin(), norm.end(), 0.0) /
                  static_cast<double>(norm.size());
    double var = 0.0;
    for (double a : norm) var += (a - mean) * (a - mean);
    var /= static_cast<double>(norm.size());
    const double sd = std::sqrt(var);
    std::vector<double> out;
    out.reserve(norm.size());
    for (double a : norm) out.push_back(sd > 0.0 ? normal_cdf((a - mean) / sd) : 0.5);
    return out;
  });
}

MappedScores softmax_map(const DivergenceSeries& series, const MapperConfig& cfg) {
  return quantile_pipeline(series, cfg, [](const std::vector<double>& norm) {
    // exp(a - max) is softmax rescaled so the top value is exactly 1.
    const double top = *std::max_element(norm.begin(), norm.end());
    std::vector<double> out;
    out.reserve(norm.size());
    for (double a : norm) out.push_back(std::exp(a - top));
    return out;
  });
}

MappedScores sigmoid_map(const DivergenceSeries& series, const MapperConfig& cfg) {
  return quantile_pipeline(series, cfg, [](const std::vector<double>& norm) {
    std::vector<double> out;
    out.reserve(norm.size());
    for (double a : norm) out.push_back(1.0 / (1.0 + std::exp(-a)));
    return out;
  });
}

MappedScores raw_threshold_scores(const DivergenceSeries& series) {
  check_series(series);
  const std::vector<double>& v = series.values;
  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  const double lo = *lo_it;
  const double hi = *hi_it;

  MappedScores out;
  out.config_used.kind = MapperKind::kRawThreshold;
  out.config_used.dist_params = std::monostate{};
  out.selected_set.resize(v.size());
  std::iota(out.selected_set.begin(), out.selected_set.end(), 0);
  out.values.reserve(v.size());
  for (double x : v) out.values.push_back(hi == lo ? 0.5 : (x - lo) / (hi - lo));
  return out;
}

MappedScores fixed_count_scores(const DivergenceSeries& series, std::size_t k) {
  check_series(series);
  if (k > series.values.size()) {
    throw ConfigError("fixed prune count " + std::to_string(k) + " exceeds series length " +
                      std::to_string(series.values.size()));
  }
  std::vector<std::size_t> order(series.values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return series.values[a] < series.values[b];
  });

  MappedScores out;
  out.config_used.kind = MapperKind::kFixedCount;
  out.config_used.dist_params = std::monostate{};
  out.config_used.fixed_k = k;
  out.values.assign(series.values.size(), 1.0);
  out.selected_set.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(out.selected_set.begin(), out.selected_set.end());
  for (std::size_t i : out.selected_set) out.values[i] = 0.0;
  return out;
}

MappedScores map_scores(const DivergenceSeries& series, const MapperConfig& cfg) {
  switch (cfg.kind) {
    case MapperKind::kEbqm: return ebqm(series, cfg);
    case MapperKind::kGqm: return gqm(series, cfg);
    case MapperKind::kEqm: return eqm(series, cfg);
    case MapperKind::kNormalCdf: return normal_map(series, cfg);
    case MapperKind::kSoftmax: return softmax_map(series, cfg);
    case MapperKind::kSigmoid: return sigmoid_map(series, cfg);
    case MapperKind::kRawThreshold: return raw_threshold_scores(series);
    case MapperKind::kFixedCount: return fixed_count_scores(series, cfg.fixed_k);
  }
  throw ConfigError("unhandled mapper kind");
}

}  // namespace ela
