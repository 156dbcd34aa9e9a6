#include "hylent/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <fmt/format.h>

#include "hylent/errors.hpp"

namespace hylent {

Precision precision_for_digits(int digits) {
  if (digits < 15) throw InvalidArgument(fmt::format("precision_digits must be >= 15, got {}", digits));
  if (digits <= 15) return Precision::Double;
  if (digits <= 33) return Precision::Quad;
  throw InvalidArgument(fmt::format("precision_digits {} exceeds the 33 digits of binary128", digits));
}

std::string_view to_string(Precision p) { return p == Precision::Double ? "double" : "quad"; }

namespace {

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  const std::string s = boost::algorithm::trim_copy(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw InvalidArgument(fmt::format("{}: cannot parse '{}'", key, text));
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string s = boost::algorithm::to_lower_copy(boost::algorithm::trim_copy(text));
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw InvalidArgument(fmt::format("{}: expected a boolean, got '{}'", key, text));
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::vector<std::string> parts;
  boost::algorithm::split(parts, text, boost::is_any_of(","));
  for (auto part : parts) {
    boost::algorithm::trim(part);
    if (part.empty()) continue;
    const auto dash = part.find('-', 1);
    if (dash != std::string::npos) {
      const int lo = parse_number<int>("omega", part.substr(0, dash));
      const int hi = parse_number<int>("omega", part.substr(dash + 1));
      if (hi < lo) throw InvalidArgument(fmt::format("empty range '{}'", part));
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(parse_number<int>("omega", part));
    }
  }
  if (out.empty()) throw InvalidArgument(fmt::format("empty list '{}'", text));
  return out;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    boost::algorithm::split(parts, text, boost::is_any_of(":"));
    if (parts.size() != 3) throw InvalidArgument(fmt::format("range '{}' must be start:stop:step", text));
    const double start = parse_number<double>("grid", parts[0]);
    const double stop = parse_number<double>("grid", parts[1]);
    const double step = parse_number<double>("grid", parts[2]);
    if (!(step > 0) || stop < start) throw InvalidArgument(fmt::format("bad range '{}'", text));
    const long count = std::lround(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= count; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
  }
  std::vector<std::string> parts;
  boost::algorithm::split(parts, text, boost::is_any_of(","));
  for (const auto& part : parts)
    if (!boost::algorithm::trim_copy(part).empty()) out.push_back(parse_number<double>("grid", part));
  if (out.empty()) throw InvalidArgument(fmt::format("empty list '{}'", text));
  return out;
}

std::string to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }
std::string to_string(SweepAxis a) { return a == SweepAxis::Charge ? "charge" : "inverse_mass"; }

SystemSpec RunConfig::system_spec() const {
  SystemSpec spec = SystemSpec::preset(system);
  if (charge) spec.Z = *charge;
  if (inverse_mass) spec.m3 = ParticleMass::from_inverse(*inverse_mass);
  if (charge || inverse_mass) spec.label = fmt::format("{}(Z={},1/m={})", spec.label, spec.Z, spec.m3.inverse());
  spec.validate();
  return spec;
}

void RunConfig::validate() const {
  system_spec();
  if (omegas.empty()) throw InvalidArgument("omega list is empty");
  for (int w : omegas)
    if (w < 0 || w > 12) throw InvalidArgument(fmt::format("omega {} outside [0, 12]", w));
  precision_for_digits(precision_digits);
  if (alpha_low.has_value() != alpha_high.has_value())
    throw InvalidArgument("alpha_low and alpha_high must be given together");
  if (alpha_low && !(*alpha_low > 0 && *alpha_high > *alpha_low))
    throw InvalidArgument(fmt::format("bad alpha bracket [{}, {}]", *alpha_low, *alpha_high));
  if (!(tol_i4 > 0 && tol_i4 < 1e-3)) throw InvalidArgument(fmt::format("tol_i4 {} outside (0, 1e-3)", tol_i4));
  if (threads < 1) throw InvalidArgument("threads must be >= 1");
  if (samples < 10'000) throw InvalidArgument("samples must be >= 10000");
  if (random_keys < 0) throw InvalidArgument("random_keys must be >= 0");
  if (uncertainty_floor < 0) throw InvalidArgument("uncertainty_floor must be >= 0");
}

RunConfig default_config() {
  RunConfig config;
  if (const char* env = std::getenv("HYLL_PRECISION_DIGITS"); env && *env)
    config.precision_digits = parse_number<int>("HYLL_PRECISION_DIGITS", env);
  return config;
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    boost::algorithm::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidArgument(fmt::format("config line {}: expected key = value", number));
    std::string key = boost::algorithm::trim_copy(line.substr(0, eq));
    std::string value = boost::algorithm::trim_copy(line.substr(eq + 1));
    if (key.empty()) throw InvalidArgument(fmt::format("config line {}: empty key", number));
    out[key] = value;
  }
  return out;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "system") {
    SystemSpec::preset(value);
    c.system = value;
  } else if (key == "Z" || key == "charge") {
    c.charge = parse_number<double>(key, value);
  } else if (key == "m3" || key == "mass") {
    const std::string v = boost::algorithm::to_lower_copy(value);
    c.inverse_mass = (v == "inf" || v == "infinity") ? 0.0 : 1.0 / parse_number<double>(key, value);
  } else if (key == "inverse_mass") {
    c.inverse_mass = parse_number<double>(key, value);
  } else if (key == "omega" || key == "omegas") {
    c.omegas = parse_int_list(value);
  } else if (key == "precision_digits") {
    c.precision_digits = parse_number<int>(key, value);
  } else if (key == "alpha_low") {
    c.alpha_low = parse_number<double>(key, value);
  } else if (key == "alpha_high") {
    c.alpha_high = parse_number<double>(key, value);
  } else if (key == "tol_i4") {
    c.tol_i4 = parse_number<double>(key, value);
  } else if (key == "seed") {
    c.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "output") {
    c.output_path = value;
  } else if (key == "format") {
    if (value == "csv") c.format = OutputFormat::Csv;
    else if (value == "json") c.format = OutputFormat::Json;
    else throw InvalidArgument(fmt::format("format must be csv or json, got '{}'", value));
  } else if (key == "threads") {
    c.threads = parse_number<int>(key, value);
  } else if (key == "series") {
    c.series_path = value;
  } else if (key == "uncertainty_floor") {
    c.uncertainty_floor = parse_number<double>(key, value);
  } else if (key == "axis") {
    if (value == "charge" || value == "Z") c.axis = SweepAxis::Charge;
    else if (value == "inverse_mass") c.axis = SweepAxis::InverseMass;
    else throw InvalidArgument(fmt::format("axis must be charge or inverse_mass, got '{}'", value));
  } else if (key == "grid") {
    c.grid = parse_real_list(value);
  } else if (key == "samples") {
    c.samples = parse_number<std::uint64_t>(key, value);
  } else if (key == "random_keys") {
    c.random_keys = parse_number<int>(key, value);
  } else if (key == "corrupt") {
    c.corrupt = parse_bool(key, value);
  } else {
    throw InvalidArgument(fmt::format("unknown config key '{}'", key));
  }
}

void load_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument(fmt::format("cannot open config file '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  for (const auto& [key, value] : parse_key_values(buffer.str())) apply_setting(config, key, value);
}

}  // namespace hylent
