#ifndef ELA_MAPPING_HPP
#define ELA_MAPPING_HPP

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ela/divergence.hpp"
#include "ela/special_functions.hpp"

namespace ela {

enum class MapperKind {
  kEbqm,
  kGqm,
  kEqm,
  kNormalCdf,
  kSoftmax,
  kSigmoid,
  kRawThreshold,
  kFixedCount,
};

std::string to_string(MapperKind kind);
MapperKind mapper_kind_from_string(const std::string& name);

using DistParams = std::variant<std::monostate, BetaParams, GammaParams, ExpParams>;

struct MapperConfig {
  MapperKind kind = MapperKind::kEbqm;
  double gamma_quantile = 0.5;  // in (0, 1]
  DistParams dist_params = BetaParams{5.0, 1.0};
  std::size_t fixed_k = 0;  // FixedCount only
};

// Smoothed divergence scores, one per layer pair, each in [0, 1].
// selected_set holds the 0-based indices whose values were produced by
// the mapper's transform; every other index carries exactly 1.0 so it
// survives any threshold below 1.
struct MappedScores {
  std::vector<double> values;
  std::vector<std::size_t> selected_set;  // sorted ascending
  MapperConfig config_used;
};

// Empirical cumulative probabilities p(x_i) = (1/n) * #{j : x_j <= x_i}.
// Ties share the same value; every result lies in (0, 1].
std::vector<double> empirical_cdf(std::span<const double> xs);

// Classical quantile mapping: x'_i = F^{-1}(p(x_i)) for the target
// distribution, with p clamped to at most n/(n+1) so the largest sample
// does not invert to +infinity.
std::vector<double> quantile_map(std::span<const double> xs, const DistParams& target);

// Enhanced Beta Quantile Mapping: select the divergences at or below the
// nearest-rank gamma-quantile, min-max normalize within the selection
// (degenerate selections collapse to 0.5), push through the Beta CDF,
// and leave everything unselected at 1.0.
MappedScores ebqm(const DivergenceSeries& series, const MapperConfig& cfg);

// Same pipeline with the Beta CDF swapped for the Gamma / Exponential
// CDF, the standard normal CDF on standardized selected values, a
// max-rescaled softmax over the selection, or the elementwise logistic.
MappedScores gqm(const DivergenceSeries& series, const MapperConfig& cfg);
MappedScores eqm(const DivergenceSeries& series, const MapperConfig& cfg);
MappedScores normal_map(const DivergenceSeries& series, const MapperConfig& cfg);
MappedScores softmax_map(const DivergenceSeries& series, const MapperConfig& cfg);
MappedScores sigmoid_map(const DivergenceSeries& series, const MapperConfig& cfg);

// Baselines from the ablations: global min-max normalization with no
// transform (thresholding then acts on raw normalized divergences), and
// a fixed prune count (the k smallest divergences score 0, the rest 1,
// ties broken toward the lower layer index).
MappedScores raw_threshold_scores(const DivergenceSeries& series);
MappedScores fixed_count_scores(const DivergenceSeries& series, std::size_t k);

// Dispatch on cfg.kind.
MappedScores map_scores(const DivergenceSeries& series, const MapperConfig& cfg);

}  // namespace ela

#endif  // ELA_MAPPING_HPP
