#include "nvfq/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

namespace nvfq {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "pi") return std::numbers::pi;
  if (text == "inf") return std::numeric_limits<double>::infinity();
  double value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty())
    throw ConfigValueError(std::string(key) + ": not a number: '" + std::string(text) + "'");
  return value;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view text) {
  text = trim(text);
  Int value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty())
    throw ConfigValueError(std::string(key) + ": not an integer: '" + std::string(text) + "'");
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigValueError(std::string(key) + ": expected true or false");
}

std::optional<double> parse_optional(std::string_view key, std::string_view text,
                                     std::string_view empty_word) {
  if (trim(text) == empty_word) return std::nullopt;
  return parse_double(key, text);
}

std::string optional_text(const std::optional<double>& v, std::string_view empty_word) {
  return v ? format_double(*v) : std::string(empty_word);
}

struct Entry {
  std::string name;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

Entry real(std::string name, double RunConfig::*field) {
  return {name,
          [name, field](RunConfig& c, std::string_view v) { c.*field = parse_double(name, v); },
          [field](const RunConfig& c) { return format_double(c.*field); }};
}

Entry optional_real(std::string name, std::optional<double> RunConfig::*field,
                    std::string empty_word) {
  return {name,
          [name, field, empty_word](RunConfig& c, std::string_view v) {
            c.*field = parse_optional(name, v, empty_word);
          },
          [field, empty_word](const RunConfig& c) { return optional_text(c.*field, empty_word); }};
}

Entry integer(std::string name, int RunConfig::*field) {
  return {name,
          [name, field](RunConfig& c, std::string_view v) { c.*field = parse_int<int>(name, v); },
          [field](const RunConfig& c) { return std::to_string(c.*field); }};
}

Entry boolean(std::string name, bool RunConfig::*field) {
  return {name,
          [name, field](RunConfig& c, std::string_view v) { c.*field = parse_bool(name, v); },
          [field](const RunConfig& c) { return std::string(c.*field ? "true" : "false"); }};
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = [] {
    std::vector<Entry> t;
    t.push_back(real("omega_s", &RunConfig::omega_s));
    t.push_back(real("Delta", &RunConfig::Delta));
    t.push_back(optional_real("Omega", &RunConfig::Omega, "auto"));
    t.push_back(real("g", &RunConfig::g));
    t.push_back(real("g_over_2pi_hz", &RunConfig::g_over_2pi_hz));
    t.push_back(optional_real("T1_us", &RunConfig::T1_us, "none"));
    t.push_back(optional_real("Tnu_us", &RunConfig::Tnu_us, "none"));
    t.push_back(boolean("symmetric_rates", &RunConfig::symmetric_rates));
    t.push_back({"model",
                 [](RunConfig& c, std::string_view v) {
                   v = trim(v);
                   if (v == "exact") c.model = Model::exact;
                   else if (v == "effective") c.model = Model::effective;
                   else throw ConfigValueError("model: expected exact or effective");
                 },
                 [](const RunConfig& c) { return to_string(c.model); }});
    t.push_back({"method",
                 [](RunConfig& c, std::string_view v) {
                   v = trim(v);
                   if (v == "rk4") c.method = Method::rk4;
                   else if (v == "adaptive") c.method = Method::adaptive;
                   else throw ConfigValueError("method: expected rk4 or adaptive");
                 },
                 [](const RunConfig& c) {
                   return std::string(c.method == Method::rk4 ? "rk4" : "adaptive");
                 }});
    t.push_back(real("dt", &RunConfig::dt));
    t.push_back(optional_real("t_max", &RunConfig::t_max, "auto"));
    t.push_back(integer("samples_per_rabi_period", &RunConfig::samples_per_rabi_period));
    t.push_back(integer("points", &RunConfig::points));
    t.push_back(real("theta", &RunConfig::theta));
    t.push_back(real("varphi", &RunConfig::varphi));
    t.push_back(real("alpha", &RunConfig::alpha));
    t.push_back(real("phi", &RunConfig::phi));
    t.push_back(real("beta", &RunConfig::beta));
    t.push_back(real("chi", &RunConfig::chi));
    t.push_back(real("idle_time", &RunConfig::idle_time));
    t.push_back({"detunings",
                 [](RunConfig& c, std::string_view v) {
                   std::vector<double> out;
                   v = trim(v);
                   while (!v.empty()) {
                     const auto comma = v.find(',');
                     out.push_back(parse_double("detunings", v.substr(0, comma)));
                     if (comma == std::string_view::npos) break;
                     v = v.substr(comma + 1);
                   }
                   if (out.empty()) throw ConfigValueError("detunings: empty list");
                   c.detunings = std::move(out);
                 },
                 [](const RunConfig& c) {
                   std::string s;
                   for (std::size_t i = 0; i < c.detunings.size(); ++i)
                     s += (i ? "," : "") + format_double(c.detunings[i]);
                   return s;
                 }});
    t.push_back(integer("iterations", &RunConfig::iterations));
    t.push_back(integer("samples", &RunConfig::samples));
    t.push_back({"shots",
                 [](RunConfig& c, std::string_view v) {
                   if (trim(v) == "exact") c.shots.reset();
                   else c.shots = parse_int<int>("shots", v);
                 },
                 [](const RunConfig& c) {
                   return c.shots ? std::to_string(*c.shots) : std::string("exact");
                 }});
    t.push_back(boolean("project_bloch", &RunConfig::project_bloch));
    t.push_back({"seed",
                 [](RunConfig& c, std::string_view v) { c.seed = parse_int<std::uint64_t>("seed", v); },
                 [](const RunConfig& c) { return std::to_string(c.seed); }});
    t.push_back(boolean("write_raw", &RunConfig::write_raw));
    return t;
  }();
  return table;
}

const Entry& find(std::string_view key) {
  for (const auto& e : entries())
    if (e.name == key) return e;
  throw UnknownKeyError(std::string(key));
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

void RunConfig::set(std::string_view key, std::string_view value) {
  find(trim(key)).set(*this, value);
}

std::string RunConfig::get(std::string_view key) const { return find(trim(key)).get(*this); }

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& e : entries()) out.push_back(e.name);
    return out;
  }();
  return names;
}

RunConfig RunConfig::parse(std::string_view text) {
  RunConfig c;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigValueError("line " + std::to_string(line_no) + ": expected key = value");
    c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse(os.str());
}

std::string RunConfig::serialize() const {
  std::string out;
  for (const auto& e : entries()) out += e.name + " = " + e.get(*this) + "\n";
  return out;
}

SystemParams RunConfig::system() const {
  SystemParams sp;
  sp.omega_s = omega_s;
  sp.Delta = Delta;
  sp.g = g;
  sp.Omega = Omega ? *Omega : -sp.delta();
  return sp;
}

DecoherenceModel RunConfig::decoherence() const {
  if (!T1_us && !Tnu_us) return DecoherenceModel::none();
  const double inf = std::numeric_limits<double>::infinity();
  DecoherenceModel d = rates_from_microseconds(T1_us.value_or(inf), Tnu_us.value_or(inf), bridge());
  return symmetric_rates ? d.with_symmetric_rates() : d;
}

IntegratorConfig RunConfig::integrator() const {
  IntegratorConfig cfg;
  cfg.dt = dt;
  cfg.method = method;
  if (t_max) cfg.t_max = *t_max * 2 * std::numbers::pi;
  return cfg;
}

ProtocolOptions RunConfig::protocol_options() const {
  ProtocolOptions o;
  o.system = system();
  o.model = model;
  o.integrator = integrator();
  return o;
}

}  // namespace nvfq
