#include "nvfq/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace nvfq {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

double wrap(double angle) {
  angle = std::fmod(angle, kTwoPi);
  if (angle > std::numbers::pi) angle -= kTwoPi;
  if (angle <= -std::numbers::pi) angle += kTwoPi;
  return angle;
}

struct Extremum {
  double value;
  double time;
};

// Vertex of the parabola through samples i-1, i, i+1.
Extremum refine(std::span<const double> t, std::span<const double> y, std::size_t i) {
  if (i == 0 || i + 1 >= y.size()) return {y[i], t[i]};
  const double ym = y[i - 1], y0 = y[i], yp = y[i + 1];
  const double curvature = ym - 2 * y0 + yp;
  if (curvature == 0) return {y0, t[i]};
  const double offset = std::clamp(0.5 * (ym - yp) / curvature, -1.0, 1.0);
  const double step = t[i + 1] - t[i];
  return {y0 - 0.25 * (ym - yp) * offset, t[i] + offset * step};
}

}  // namespace

Envelope extract_envelope(std::span<const double> times, std::span<const double> values,
                          double carrier, const EnvelopeOptions& options) {
  if (times.size() != values.size())
    throw std::invalid_argument("extract_envelope: times and values differ in length");
  if (!(carrier > 0)) throw std::invalid_argument("extract_envelope: carrier must be positive");
  Envelope env;
  if (times.size() < 2) return env;
  const double period = kTwoPi / carrier;
  const double spacing = times[1] - times[0];
  if (period < 4 * spacing)
    throw std::invalid_argument("extract_envelope: fewer than four samples per carrier period");

  const double t0 = times.front();
  std::size_t begin = 0;
  int sign = 1;
  double last_phase = std::numeric_limits<double>::quiet_NaN();
  for (long bin = 0;; ++bin) {
    const double bin_end = t0 + period * static_cast<double>(bin + 1);
    if (bin_end > times.back() + 0.5 * spacing) break;
    std::size_t end = begin;
    while (end < times.size() && times[end] < bin_end - 0.5 * spacing) ++end;
    if (end <= begin) break;

    std::size_t imax = begin, imin = begin;
    for (std::size_t i = begin; i < end; ++i) {
      if (values[i] > values[imax]) imax = i;
      if (values[i] < values[imin]) imin = i;
    }
    const Extremum hi = refine(times, values, imax);
    const Extremum lo = refine(times, values, imin);
    const double centre = 0.5 * (hi.value + lo.value);
    const double half = 0.5 * (hi.value - lo.value);
    double phase = std::fmod(carrier * hi.time, kTwoPi);
    if (phase < 0) phase += kTwoPi;

    if (half >= options.phase_floor) {
      if (!std::isnan(last_phase) && std::abs(wrap(phase - last_phase)) > std::numbers::pi / 2)
        sign = -sign;
      last_phase = phase;
    }

    env.times.push_back(t0 + period * (static_cast<double>(bin) + 0.5));
    env.upper.push_back(hi.value);
    env.lower.push_back(lo.value);
    env.phase.push_back(phase);
    env.signed_envelope.push_back(centre + sign * half);
    begin = end;
  }
  return env;
}

bool crosses_half(const Envelope& env, std::size_t window, double margin) {
  const auto& e = env.signed_envelope;
  for (std::size_t k : slow_minima(env, window)) {
    if (!std::any_of(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(k),
                     [margin](double v) { return v > 0.5 + margin; }))
      continue;
    return e[k] < 0.5 - margin;
  }
  return false;
}

double visibility_against(const Envelope& env, const Envelope& baseline) {
  const std::size_t n = std::min(env.size(), baseline.size());
  double best = 0;
  for (std::size_t k = 0; k < n; ++k)
    best = std::max(best, std::abs(baseline.signed_envelope[k] - env.signed_envelope[k]));
  return best;
}

std::vector<std::size_t> slow_minima(const Envelope& env, std::size_t window) {
  std::vector<std::size_t> out;
  const auto& e = env.signed_envelope;
  const std::size_t n = e.size();
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const std::size_t lo = k > window ? k - window : 0;
    const std::size_t hi = std::min(n - 1, k + window);
    // Interior minima only: the window must fit on both sides.
    if (k < window || k + window >= n) continue;
    bool is_min = true;
    for (std::size_t j = lo; j <= hi && is_min; ++j)
      if (j != k && e[j] < e[k]) is_min = false;
    if (is_min) out.push_back(k);
  }
  return out;
}

double max_minimum_separation(const Envelope& env, const Envelope& baseline, std::size_t window) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k : slow_minima(env, window)) {
    if (k >= baseline.size()) continue;
    best = std::max(best, baseline.signed_envelope[k] - env.signed_envelope[k]);
  }
  return best;
}

}  // namespace nvfq
