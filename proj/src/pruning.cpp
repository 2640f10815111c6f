#include "ela/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ela/attention.hpp"
#include "ela/errors.hpp"

namespace ela {

namespace {

void check_tau(double tau) {
  if (!(tau > 0.0) || !(tau < 1.0)) {
    throw ConfigError("threshold tau must lie in (0, 1), got " + std::to_string(tau));
  }
}

std::string join_ints(const std::vector<int>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(xs[i]);
  }
  return out;
}

}  // namespace

PruneMask all_ones_mask(int layer_count) {
  if (layer_count < 1) {
    throw StructuralError("mask needs at least one layer");
  }
  PruneMask mask;
  mask.bits.assign(static_cast<std::size_t>(layer_count), 1);
  return mask;
}

void validate(const PruneMask& mask) {
  if (mask.bits.empty()) throw StructuralError("mask has no layers");
  if (mask.bits.front() != 1) throw StructuralError("mask bit for layer 1 must be 1");
  for (std::uint8_t b : mask.bits) {
    if (b != 0 && b != 1) throw StructuralError("mask bits must be 0 or 1");
  }
}

std::vector<int> active_layers(const PruneMask& mask) {
  std::vector<int> out;
  for (std::size_t i = 0; i < mask.bits.size(); ++i) {
    if (mask.bits[i] == 1) out.push_back(static_cast<int>(i) + 1);
  }
  return out;
}

void validate(const StageSchedule& schedule) {
  int prev_stage = 0;
  int prev_last = 0;
  for (const StageConfig& s : schedule.stages) {
    if (s.stage_id <= prev_stage) {
      throw ConfigError("stage ids must be strictly increasing, got " +
                        std::to_string(s.stage_id) + " after " + std::to_string(prev_stage));
    }
    if (s.first_epoch < 1 || s.last_epoch < s.first_epoch) {
      throw ConfigError("stage " + std::to_string(s.stage_id) + " has an invalid epoch window " +
                        std::to_string(s.first_epoch) + ".." + std::to_string(s.last_epoch));
    }
    if (s.first_epoch <= prev_last) {
      throw ConfigError("stage " + std::to_string(s.stage_id) +
                        " epoch window overlaps the previous stage");
    }
    check_tau(s.tau);
    prev_stage = s.stage_id;
    prev_last = s.last_epoch;
  }
  if (!(schedule.epsilon > 0.0) || schedule.epsilon > 1e-6) {
    throw ConfigError("schedule epsilon must lie in (0, 1e-6]");
  }
}

PruneMask mask_from_scores(const MappedScores& scores, double tau, int layer_count,
                           int stage_id) {
  std::vector<int> everyone(static_cast<std::size_t>(layer_count));
  for (int l = 1; l <= layer_count; ++l) everyone[static_cast<std::size_t>(l - 1)] = l;
  return mask_from_scores_over(scores, tau, everyone, layer_count, stage_id);
}

PruneMask mask_from_scores_over(const MappedScores& scores, double tau,
                                const std::vector<int>& active, int layer_count,
                                int stage_id) {
  check_tau(tau);
  if (active.empty() || active.front() != 1) {
    throw StructuralError("active layer set must start with layer 1");
  }
  if (scores.values.size() + 1 != active.size()) {
    throw StructuralError("got " + std::to_string(scores.values.size()) +
                          " scores for " + std::to_string(active.size()) +
                          " active layers");
  }
  PruneMask mask;
  mask.bits.assign(static_cast<std::size_t>(layer_count), 0);
  mask.stage_id = stage_id;
  mask.threshold_used = tau;
  mask.bits[0] = 1;
  for (std::size_t k = 0; k < scores.values.size(); ++k) {
    const int layer = active[k + 1];
    if (layer < 2 || layer > layer_count) {
      throw StructuralError("active layer " + std::to_string(layer) + " out of range");
    }
    mask.bits[static_cast<std::size_t>(layer - 1)] = scores.values[k] >= tau ? 1 : 0;
  }
  return mask;
}

PruneMask merge_masks(const PruneMask& prev, const PruneMask& new_mask) {
  validate(prev);
  validate(new_mask);
  if (prev.bits.size() != new_mask.bits.size()) {
    throw StructuralError("cannot merge masks of lengths " + std::to_string(prev.bits.size()) +
                          " and " + std::to_string(new_mask.bits.size()));
  }
  if (new_mask.stage_id <= prev.stage_id) {
    throw StructuralError("merge requires a later stage id, got " +
                          std::to_string(new_mask.stage_id) + " after " +
                          std::to_string(prev.stage_id));
  }
  PruneMask merged;
  merged.stage_id = new_mask.stage_id;
  merged.threshold_used = new_mask.threshold_used;
  merged.bits.resize(prev.bits.size());
  for (std::size_t i = 0; i < prev.bits.size(); ++i) {
    merged.bits[i] = static_cast<std::uint8_t>(prev.bits[i] & new_mask.bits[i]);
  }
  return merged;
}

std::vector<StageResult> run_schedule(LayerStack& stack, const StageSchedule& schedule,
                                      EpochSource& source) {
  validate(schedule);
  std::vector<StageResult> results;
  results.reserve(schedule.stages.size());

  for (const StageConfig& stage : schedule.stages) {
    const std::vector<int> active = active_layers(stack.mask());

    std::vector<int> missing;
    for (int e = stage.first_epoch; e <= stage.last_epoch; ++e) {
      if (!source.has_epoch(e)) missing.push_back(e);
    }
    if (!missing.empty()) {
      throw ValidationError("stage " + std::to_string(stage.stage_id) +
                            " has no trace data for epochs: " + join_ints(missing));
    }

    StageResult result;
    result.stage_id = stage.stage_id;

    if (active.size() < 2) {
      // Nothing left to compare; the stage records an empty series and
      // leaves the mask unchanged apart from its stage id.
      result.series.stage_id = stage.stage_id;
      result.series.first_epoch = stage.first_epoch;
      result.series.last_epoch = stage.last_epoch;
      result.series.active_layers = active;
      result.scores.config_used = stage.mapper;
      PruneMask unchanged = stack.mask();
      unchanged.stage_id = stage.stage_id;
      unchanged.threshold_used = stage.tau;
      stack.set_mask(unchanged);
      result.mask = unchanged;
      results.push_back(std::move(result));
      continue;
    }

    std::vector<DivergenceSeries> per_epoch;
    for (int e = stage.first_epoch; e <= stage.last_epoch; ++e) {
      std::vector<AttentionDistribution> all = source.epoch_distributions(e);
      std::vector<AttentionDistribution> picked;
      picked.reserve(active.size());
      for (int layer : active) {
        auto it = std::find_if(all.begin(), all.end(), [layer](const AttentionDistribution& d) {
          return d.layer_index == layer;
        });
        if (it == all.end()) {
          throw ValidationError("epoch " + std::to_string(e) +
                                " is missing a distribution for active layer " +
                                std::to_string(layer));
        }
        picked.push_back(*it);
      }
      per_epoch.push_back(
          series_from_stack(picked, schedule.epsilon, stage.stage_id, e));
    }

    result.series = average_series(per_epoch);
    result.scores = map_scores(result.series, stage.mapper);
    PruneMask stage_mask = mask_from_scores_over(result.scores, stage.tau, active,
                                                 static_cast<int>(stack.mask().bits.size()),
                                                 stage.stage_id);
    PruneMask merged = merge_masks(stack.mask(), stage_mask);
    stack.set_mask(merged);
    result.mask = merged;
    results.push_back(std::move(result));
  }
  return results;
}

void validate(const StackGeometry& g) {
  if (g.layer_count < 1 || g.feature_dim < 1 || g.head_count < 1) {
    throw StructuralError("stack geometry must be positive");
  }
  if (g.feature_dim % g.head_count != 0) {
    throw StructuralError("head count " + std::to_string(g.head_count) +
                          " must divide feature dim " + std::to_string(g.feature_dim));
  }
}

FlopEstimate flop_estimate(const StackGeometry& g, const PruneMask& mask) {
  validate(g);
  validate(mask);
  if (mask.bits.size() != static_cast<std::size_t>(g.layer_count)) {
    throw StructuralError("mask length " + std::to_string(mask.bits.size()) +
                          " does not match layer count " + std::to_string(g.layer_count));
  }
  const std::uint64_t d = static_cast<std::uint64_t>(g.feature_dim);
  FlopEstimate est;
  std::uint64_t surviving_slots = 0;
  for (std::size_t i = 0; i < mask.bits.size(); ++i) {
    if (mask.bits[i] == 0) continue;
    ++surviving_slots;
    est.attention_flops += 3 * d * d;             // q, k, v projections
    est.attention_flops += 2 * d * surviving_slots;  // scores + weighted sum
  }
  est.total_flops = est.attention_flops +
                    static_cast<std::uint64_t>(g.layer_count) * d * d;  // backbone
  return est;
}

}  // namespace ela
