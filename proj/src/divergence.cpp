#include "ela/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ela/errors.hpp"

namespace ela {

namespace {

constexpr double kWeightFloor = 1e-12;
constexpr double kSumTolerance = 1e-6;

// Sum_i p_i ln(p_i/q_i) over equal-length vectors, zero-aware.
double kl_sum(std::span<const double> p, std::span<const double> q) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
    sum += p[i] * std::log(p[i] / q[i]);
  }
  return sum;
}

// Padded KL core over raw vectors: p has one slot fewer than p_next.
double padded_kl_core(std::span<const double> p, std::span<const double> p_next,
                      double epsilon) {
  const std::size_t l = p.size();
  double sum = kl_sum(p, p_next.first(l));
  if (std::isinf(sum)) return sum;
  const double tail = p_next[l];
  if (tail == 0.0) return std::numeric_limits<double>::infinity();
  sum += epsilon * std::log(epsilon / tail);
  return sum;
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || epsilon > 1e-6) {
    throw DomainError("epsilon must lie in (0, 1e-6], got " + std::to_string(epsilon));
  }
}

// Keep only the slots listed in `support` (1-based layer indices);
// renormalize if that drops any mass. A no-op restriction returns the
// weights bit-identically.
std::vector<double> restrict_to_support(const AttentionDistribution& d,
                                        const std::vector<int>& support) {
  std::vector<double> kept;
  kept.reserve(support.size());
  double kept_sum = 0.0;
  double total = 0.0;
  for (double w : d.weights) total += w;
  for (int slot : support) {
    const double w = d.weights[static_cast<std::size_t>(slot - 1)];
    kept.push_back(w);
    kept_sum += w;
  }
  if (kept.size() == d.weights.size()) return kept;
  const double dropped = total - kept_sum;
  if (dropped <= 0.0) return kept;
  if (kept_sum <= 0.0) {
    throw StructuralError("distribution for layer " + std::to_string(d.layer_index) +
                          " has no mass on the active support");
  }
  for (double& w : kept) w /= kept_sum;
  return kept;
}

// Floor tiny weights so Eq.-style denominators stay positive; only
// renormalizes (and thus perturbs) the vector when a floor applied.
void floor_weights(std::vector<double>& w) {
  bool floored = false;
  for (double& x : w) {
    if (x < kWeightFloor) {
      x = kWeightFloor;
      floored = true;
    }
  }
  if (!floored) return;
  double sum = 0.0;
  for (double x : w) sum += x;
  for (double& x : w) x /= sum;
}

}  // namespace

void validate(const AttentionDistribution& d) {
  if (d.layer_index < 1) {
    throw StructuralError("layer_index must be >= 1, got " + std::to_string(d.layer_index));
  }
  if (d.head_index < 0) {
    throw StructuralError("head_index must be >= 0, got " + std::to_string(d.head_index));
  }
  if (d.weights.size() != static_cast<std::size_t>(d.layer_index)) {
    throw StructuralError("layer " + std::to_string(d.layer_index) + " carries " +
                          std::to_string(d.weights.size()) +
                          " weights, expected " + std::to_string(d.layer_index));
  }
  double sum = 0.0;
  for (double w : d.weights) {
    if (!(w >= 0.0)) {
      throw DomainError("layer " + std::to_string(d.layer_index) +
                        " has a negative or NaN attention weight");
    }
    sum += w;
  }
  if (std::fabs(sum - 1.0) > kSumTolerance) {
    throw DomainError("layer " + std::to_string(d.layer_index) +
                      " attention weights sum to " + std::to_string(sum));
  }
}

AttentionDistribution average_heads(std::span<const AttentionDistribution> heads) {
  if (heads.empty()) throw StructuralError("average_heads needs at least one distribution");
  AttentionDistribution out;
  out.layer_index = heads.front().layer_index;
  out.head_index = 0;
  out.weights.assign(heads.front().weights.size(), 0.0);
  for (const auto& h : heads) {
    validate(h);
    if (h.layer_index != out.layer_index) {
      throw StructuralError("average_heads saw mixed layer indices " +
                            std::to_string(out.layer_index) + " and " +
                            std::to_string(h.layer_index));
    }
    for (std::size_t i = 0; i < out.weights.size(); ++i) out.weights[i] += h.weights[i];
  }
  const double inv = 1.0 / static_cast<double>(heads.size());
  for (double& w : out.weights) w *= inv;
  return out;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw StructuralError("kl_divergence length mismatch: " + std::to_string(p.size()) +
                          " vs " + std::to_string(q.size()));
  }
  if (p.empty()) throw StructuralError("kl_divergence needs nonempty distributions");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0.0) || !(q[i] >= 0.0)) {
      throw DomainError("kl_divergence requires nonnegative entries");
    }
  }
  return kl_sum(p, q);
}

double padded_adjacent_kl(const AttentionDistribution& p_l,
                          const AttentionDistribution& p_next, double epsilon) {
  validate(p_l);
  validate(p_next);
  check_epsilon(epsilon);
  if (p_next.layer_index != p_l.layer_index + 1) {
    throw StructuralError("padded_adjacent_kl expects consecutive layers, got " +
                          std::to_string(p_l.layer_index) + " and " +
                          std::to_string(p_next.layer_index));
  }
  return padded_kl_core(p_l.weights, p_next.weights, epsilon);
}

DivergenceSeries series_from_stack(std::span<const AttentionDistribution> distros,
                                   double epsilon, int stage_id, int epoch) {
  if (distros.size() < 2) {
    throw StructuralError("series_from_stack needs at least two distributions, got " +
                          std::to_string(distros.size()));
  }
  check_epsilon(epsilon);

  std::vector<int> active;
  active.reserve(distros.size());
  for (const auto& d : distros) {
    validate(d);
    if (!active.empty() && d.layer_index <= active.back()) {
      throw StructuralError("distributions must be strictly ordered by layer index");
    }
    active.push_back(d.layer_index);
  }

  DivergenceSeries series;
  series.stage_id = stage_id;
  series.first_epoch = epoch;
  series.last_epoch = epoch;
  series.active_layers = active;
  series.values.reserve(distros.size() - 1);

  std::vector<int> shared;  // active slots <= earlier layer
  for (std::size_t k = 0; k + 1 < distros.size(); ++k) {
    shared.assign(active.begin(), active.begin() + static_cast<std::ptrdiff_t>(k + 1));
    std::vector<double> p = restrict_to_support(distros[k], shared);
    shared.push_back(active[k + 1]);  // plus the later layer's self slot
    std::vector<double> p_next = restrict_to_support(distros[k + 1], shared);
    floor_weights(p);
    floor_weights(p_next);
    series.values.push_back(padded_kl_core(p, p_next, epsilon));
  }
  return series;
}

DivergenceSeries average_series(std::span<const DivergenceSeries> series_list) {
  if (series_list.empty()) {
    throw StructuralError("average_series needs at least one series");
  }
  const DivergenceSeries& first = series_list.front();
  DivergenceSeries out;
  out.stage_id = first.stage_id;
  out.active_layers = first.active_layers;
  out.first_epoch = first.first_epoch;
  out.last_epoch = first.last_epoch;
  out.values.assign(first.values.size(), 0.0);
  for (const auto& s : series_list) {
    if (s.values.size() != first.values.size() || s.stage_id != first.stage_id ||
        s.active_layers != first.active_layers) {
      throw StructuralError("average_series saw heterogeneous series shapes");
    }
    out.first_epoch = std::min(out.first_epoch, s.first_epoch);
    out.last_epoch = std::max(out.last_epoch, s.last_epoch);
    for (std::size_t i = 0; i < s.values.size(); ++i) out.values[i] += s.values[i];
  }
  const double inv = 1.0 / static_cast<double>(series_list.size());
  for (double& v : out.values) v *= inv;
  return out;
}

}  // namespace ela
