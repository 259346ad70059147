// Flat `key = value` run configuration.
#pragma once

#include "nvfq/dynamics.hpp"
#include "nvfq/hamiltonians.hpp"
#include "nvfq/protocols.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nvfq {

class UnknownKeyError : public std::invalid_argument {
 public:
  explicit UnknownKeyError(std::string key)
      : std::invalid_argument("unknown configuration key: " + key), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

class ConfigValueError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Angles are in radians, frequencies in units of g, times marked `_us` in
/// microseconds and everything else in units of the coupling period 2pi/g.
struct RunConfig {
  double omega_s = 28800;
  double Delta = 25800;
  std::optional<double> Omega;  ///< empty: -delta (resonance)
  double g = 1;
  double g_over_2pi_hz = 1e5;

  std::optional<double> T1_us;  ///< empty: no decoherence
  std::optional<double> Tnu_us;
  bool symmetric_rates = false;

  Model model = Model::effective;
  Method method = Method::rk4;
  double dt = 0;                ///< units of 1/g; 0 picks the step automatically
  std::optional<double> t_max;  ///< window in coupling periods; empty: protocol default
  int samples_per_rabi_period = 16;
  int points = 2001;

  double theta = 0;
  double varphi = 0;
  double alpha = 0;
  double phi = 0;
  double beta = std::numbers::pi / 4;
  double chi = 0;
  double idle_time = 0;  ///< coupling periods

  std::vector<double> detunings = {0, 0.5, 1, 2};
  int iterations = 5;
  int samples = 500;
  std::optional<int> shots;
  bool project_bloch = true;
  std::uint64_t seed = 1;
  bool write_raw = true;

  bool operator==(const RunConfig&) const = default;

  /// Applies one `key = value` assignment.  Throws UnknownKeyError for a key
  /// outside keys() and ConfigValueError for a malformed value.
  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;

  static const std::vector<std::string>& keys();

  static RunConfig parse(std::string_view text);
  static RunConfig load(const std::string& path);
  /// Every key, one per line, in keys() order.
  std::string serialize() const;

  SystemParams system() const;
  UnitBridge bridge() const { return {g_over_2pi_hz}; }
  DecoherenceModel decoherence() const;
  IntegratorConfig integrator() const;
  ProtocolOptions protocol_options() const;
};

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

}  // namespace nvfq
