#ifndef ELA_PRUNING_HPP
#define ELA_PRUNING_HPP

#include <cstdint>
#include <vector>

#include "ela/divergence.hpp"
#include "ela/mapping.hpp"

namespace ela {

class LayerStack;

// Binary retrieval gate per layer. bits[0] (layer 1) is always 1; a zero
// bit removes that layer's retrieval and its key/value slots from every
// later concatenation, permanently across stages.
struct PruneMask {
  std::vector<std::uint8_t> bits;
  int stage_id = 0;
  double threshold_used = 0.0;
};

PruneMask all_ones_mask(int layer_count);
void validate(const PruneMask& mask);

// Layer indices with bit 1, ascending.
std::vector<int> active_layers(const PruneMask& mask);

// One pruning decision point: average divergences over the epoch window,
// map them, threshold at tau.
struct StageConfig {
  int stage_id = 0;
  int first_epoch = 1;
  int last_epoch = 1;
  MapperConfig mapper;
  double tau = 0.3;
};

struct StageSchedule {
  std::vector<StageConfig> stages;
  double epsilon = kDefaultEpsilon;  // padding for the divergence series
};

// Throws ConfigError unless stage ids are strictly increasing, epoch
// windows are disjoint and increasing, and every tau lies in (0, 1).
void validate(const StageSchedule& schedule);

// m_1 = 1; m_{l+1} = 1 iff scores.values[l-1] >= tau (ties keep the
// layer). scores must have exactly layer_count - 1 entries.
PruneMask mask_from_scores(const MappedScores& scores, double tau, int layer_count,
                           int stage_id = 0);

// Generalization for later stages: scores[k] gates active[k+1]; layers
// outside `active` stay 0. With active = {1..L} this reduces to
// mask_from_scores exactly.
PruneMask mask_from_scores_over(const MappedScores& scores, double tau,
                                const std::vector<int>& active, int layer_count,
                                int stage_id = 0);

// Bitwise AND; pruning is permanent so the result never resurrects a
// layer. new_mask.stage_id must exceed prev.stage_id.
PruneMask merge_masks(const PruneMask& prev, const PruneMask& new_mask);

// Supplies per-epoch head-averaged attention distributions, one per
// layer that produced any. A live source may advance training as a side
// effect of being asked for an epoch.
class EpochSource {
 public:
  virtual ~EpochSource() = default;
  virtual bool has_epoch(int epoch) const = 0;
  virtual std::vector<AttentionDistribution> epoch_distributions(int epoch) = 0;
};

struct StageResult {
  int stage_id = 0;
  DivergenceSeries series;
  MappedScores scores;
  PruneMask mask;  // the stack's mask after this stage's merge
};

// Drives the multi-stage schedule against one stack: per stage, collect
// the window's distributions for the currently active layers, average
// the per-epoch series, map, threshold, and AND-merge into the stack's
// mask. Returns the full audit trail. Windows with no trace data raise a
// ValidationError naming the missing epochs.
std::vector<StageResult> run_schedule(LayerStack& stack, const StageSchedule& schedule,
                                      EpochSource& source);

struct StackGeometry {
  int layer_count = 1;
  int feature_dim = 1;
  int head_count = 1;
};

void validate(const StackGeometry& g);

struct FlopEstimate {
  std::uint64_t attention_flops = 0;
  std::uint64_t total_flops = 0;
};

// Deterministic multiply-add counts for one forward pass: each active
// layer pays 3*d^2 for its q/k/v projections plus 2*d per surviving
// slot for the score/combine products; pruned layers contribute nothing
// to the attention count. The backbone (d^2 per layer) always runs and
// only enters total_flops.
FlopEstimate flop_estimate(const StackGeometry& g, const PruneMask& mask);

}  // namespace ela

#endif  // ELA_PRUNING_HPP
