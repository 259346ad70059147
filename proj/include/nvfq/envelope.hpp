// Slow envelope of a fast-oscillating population signal.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nvfq {

struct EnvelopeOptions {
  /// Oscillation half-amplitude below which the carrier phase is considered
  /// unresolved and is not used for sign tracking.
  double phase_floor = 1e-3;
};

/// One entry per complete carrier period.
struct Envelope {
  std::vector<double> times;  ///< bin centres, units of 1/g
  std::vector<double> upper;  ///< refined local maximum
  std::vector<double> lower;  ///< refined local minimum
  std::vector<double> phase;  ///< carrier phase of the maximum, [0, 2pi)
  /// centre +- half-amplitude, with the sign flipped each time the carrier
  /// phase jumps by more than pi/2 between resolved periods (an amplitude
  /// node where the oscillation inverts).
  std::vector<double> signed_envelope;

  std::size_t size() const { return times.size(); }
};

/// Splits a uniformly sampled signal into periods of 2pi/carrier and extracts
/// the extrema of each.  Needs at least four samples per period.
Envelope extract_envelope(std::span<const double> times, std::span<const double> values,
                          double carrier, const EnvelopeOptions& options = {});

/// True if the first slow minimum (see slow_minima) of the signed envelope
/// lies below 1/2 - margin after the envelope has been above 1/2 + margin.
/// Later minima are ignored: once decay has pulled the whole signal towards
/// 1/2, small dips below it carry no information about the detuning.
bool crosses_half(const Envelope& env, std::size_t window, double margin = 1e-3);

/// max_k |baseline_k - envelope_k| over common bins.
double visibility_against(const Envelope& env, const Envelope& baseline);

/// Indices of local minima of the signed envelope, each the smallest value
/// within +-window bins.
std::vector<std::size_t> slow_minima(const Envelope& env, std::size_t window);

/// Largest baseline_k - envelope_k over the slow minima.
double max_minimum_separation(const Envelope& env, const Envelope& baseline, std::size_t window);

}  // namespace nvfq
