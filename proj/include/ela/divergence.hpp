#ifndef ELA_DIVERGENCE_HPP
#define ELA_DIVERGENCE_HPP

#include <span>
#include <vector>

namespace ela {

// One layer's attention weights over itself and all preceding layers,
// stored densely: weights[i] is the probability on value slot i+1 and
// the vector length equals layer_index. Slots removed by pruning carry
// exact zeros. head_index 0 means head-averaged.
struct AttentionDistribution {
  int layer_index = 1;  // 1-based
  std::vector<double> weights;
  int head_index = 0;
};

// Throws StructuralError/DomainError if the invariants above fail
// (nonnegative weights summing to 1 within 1e-6, length == layer_index).
void validate(const AttentionDistribution& d);

// Arithmetic mean over per-head distributions of one (epoch, layer).
// All inputs must share layer_index; the result has head_index 0.
AttentionDistribution average_heads(std::span<const AttentionDistribution> heads);

// Ordered KL divergences a_1..a_{n-1} between consecutive active layers,
// plus provenance for the stage that produced them.
struct DivergenceSeries {
  std::vector<double> values;
  int first_epoch = 0;
  int last_epoch = 0;
  int stage_id = 0;
  std::vector<int> active_layers;  // sorted, size = values.size() + 1
};

inline constexpr double kDefaultEpsilon = 1e-10;

// Sum_i p_i ln(p_i / q_i). Terms with p_i == 0 contribute nothing;
// q_i == 0 with p_i > 0 yields +infinity (not an exception).
double kl_divergence(std::span<const double> p, std::span<const double> q);

// Padded adjacent-layer KL: P over l slots against P' over l+1 slots,
// with P extended by an infinitesimal epsilon on the new slot:
//   Sum_{i<=l} p_i ln(p_i / p'_i) + eps ln(eps / p'_{l+1}).
// The first l entries of P are not renormalized. epsilon must lie in
// (0, 1e-6].
double padded_adjacent_kl(const AttentionDistribution& p_l,
                          const AttentionDistribution& p_next, double epsilon);

// Padded KL between consecutive entries of a list of distributions over
// the currently active retrieval layers. If the recorded distributions
// still carry mass on pruned slots, each one is restricted to the active
// support (the earlier layer's active slots; plus the self slot for the
// later one) and renormalized. Weights below 1e-12 are floored and the
// vector renormalized before the divergence is taken, so series values
// are always finite. Needs at least two distributions.
DivergenceSeries series_from_stack(std::span<const AttentionDistribution> distros,
                                   double epsilon, int stage_id = 0, int epoch = 0);

// Elementwise arithmetic mean of series sharing length, stage_id and
// active_layers; the epoch window spans min..max of the inputs.
DivergenceSeries average_series(std::span<const DivergenceSeries> series_list);

}  // namespace ela

#endif  // ELA_DIVERGENCE_HPP
