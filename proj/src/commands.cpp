#include "hylent/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "hylent/entropy.hpp"
#include "hylent/errors.hpp"
#include "hylent/extrapolate.hpp"
#include "hylent/oracle.hpp"
#include "hylent/solver.hpp"

namespace hylent {
namespace {

void note(const Logger& log, const std::string& msg) {
  if (log) log(msg);
}

// Calls body.template operator()<Real>() for the configured precision.
template <class Body>
decltype(auto) with_precision(const RunConfig& config, Body&& body) {
  if (precision_for_digits(config.precision_digits) == Precision::Double) return body.template operator()<double>();
  return body.template operator()<quad>();
}

AlphaBracket bracket_for(const RunConfig& config, const HamiltonianParams& params) {
  if (config.alpha_low) return {*config.alpha_low, *config.alpha_high};
  return default_bracket(params);
}

struct EntropyRow {
  int omega;
  std::size_t n_terms;
  double alpha;
  double energy;
  double condition;
  EntropyReport report;
};

template <class Real>
EntropyRow entropy_row(int omega, const HamiltonianParams& params, AlphaBracket bracket, const RunConfig& config,
                       RingIntegralCache<Real>& cache) {
  const auto solve = optimize_alpha<Real>(omega, params, bracket, {1e-7, 16, config.threads});
  EntropyOptions options;
  options.threads = config.threads;
  const auto report = tr_rho2(solve, cache, options);
  return {omega, solve.terms.size(), solve.alpha, to_double(solve.energy), solve.condition_estimate, report};
}

std::vector<Cell> entropy_cells(const EntropyRow& r) {
  return {std::int64_t{r.omega},
          static_cast<std::int64_t>(r.n_terms),
          r.alpha,
          r.energy,
          r.report.tr_rho2,
          r.report.linear_entropy,
          r.report.norm,
          r.condition,
          static_cast<std::int64_t>(r.report.i4_calls),
          static_cast<std::int64_t>(r.report.cache_hits),
          static_cast<std::int64_t>(r.report.distinct_keys),
          std::int64_t{r.report.max_ell_used},
          r.report.tail_bound};
}

const std::vector<std::string> kEntropyColumns{"omega",  "n_terms",   "alpha",        "energy",
                                                "tr_rho2", "linear_entropy", "norm", "condition_estimate",
                                                "i4_calls", "cache_hits", "distinct_keys", "max_ell",
                                                "tail_bound"};

std::vector<EntropyRow> run_entropy(const RunConfig& config, const Logger& log) {
  const auto spec = config.system_spec();
  const auto params = reduced_parameters(spec);
  const auto bracket = bracket_for(config, params);
  return with_precision(config, [&]<class Real>() {
    RingIntegralCache<Real> cache(RingSeriesOptions{config.tol_i4, 200});
    std::vector<EntropyRow> rows;
    for (int omega : config.omegas) {
      note(log, fmt::format("entropy {} omega={}", spec.label, omega));
      rows.push_back(entropy_row<Real>(omega, params, bracket, config, cache));
    }
    return rows;
  });
}

std::string join_omegas(const Series& s) {
  std::vector<std::string> parts;
  for (const auto& p : s.points) parts.push_back(std::to_string(p.omega));
  return boost::algorithm::join(parts, ";");
}

double default_floor(const RunConfig& config) {
  if (config.uncertainty_floor > 0) return config.uncertainty_floor;
  return config.system_spec().Z >= 2.0 ? 1e-6 : 1e-5;
}

void extrapolate_quantity(Table& table, const std::string& name, const std::vector<SeriesPoint>& points,
                          double floor) {
  std::vector<double> limits;
  for (Parity parity : {Parity::Even, Parity::Odd}) {
    const Series s = Series::select(points, parity);
    if (s.points.size() < 3) continue;
    // Use the last three points of the parity class.
    Series tail;
    tail.points.assign(s.points.end() - 3, s.points.end());
    const auto x = geometric_extrapolate(tail);
    limits.push_back(x.limit);
    table.rows.push_back({name, std::string(parity == Parity::Even ? "even" : "odd"), join_omegas(tail), x.limit,
                          x.ratio, Cell{}, Cell{}});
  }
  if (limits.size() == 2) {
    const auto f = final_estimate(limits[0], limits[1], floor);
    table.rows.push_back({name, std::string("final"), std::string(), f.value, Cell{}, f.uncertainty, f.spread});
  }
  if (limits.empty())
    throw InvalidArgument(fmt::format("{}: need three omegas of one parity spaced by 2", name));
}

}  // namespace

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{}", v);
}

std::vector<double> default_grid(SweepAxis axis) {
  std::vector<double> out;
  if (axis == SweepAxis::Charge)
    for (int i = 0; i <= 10; ++i) out.push_back(1.0 + 0.1 * i);
  else
    for (int i = 0; i <= 10; ++i) out.push_back(0.1 * i);
  return out;
}

Table cmd_solve(const RunConfig& config, const Logger& log) {
  config.validate();
  const auto spec = config.system_spec();
  const auto params = reduced_parameters(spec);
  const auto bracket = bracket_for(config, params);
  Table table{"solve", {"omega", "n_terms", "alpha", "energy", "condition_estimate", "evaluations"}, {}, true};
  with_precision(config, [&]<class Real>() {
    for (int omega : config.omegas) {
      note(log, fmt::format("solve {} omega={}", spec.label, omega));
      const auto r = optimize_alpha<Real>(omega, params, bracket, {1e-7, 16, config.threads});
      table.rows.push_back({std::int64_t{omega}, static_cast<std::int64_t>(r.terms.size()), r.alpha,
                            to_double(r.energy), r.condition_estimate, std::int64_t{r.evaluations}});
    }
  });
  return table;
}

Table cmd_entropy(const RunConfig& config, const Logger& log) {
  config.validate();
  Table table{"entropy", kEntropyColumns, {}, true};
  for (const auto& r : run_entropy(config, log)) table.rows.push_back(entropy_cells(r));
  return table;
}

Table cmd_extrapolate(const RunConfig& config, const Logger& log) {
  config.validate();
  Table table{"extrapolate", {"quantity", "series", "omegas", "value", "ratio", "uncertainty", "spread"}, {}, true};
  const double floor = default_floor(config);
  if (!config.series_path.empty()) {
    const auto file = read_series_file(config.series_path);
    for (std::size_t q = 0; q < file.names.size(); ++q) {
      std::vector<SeriesPoint> points;
      for (std::size_t i = 0; i < file.omegas.size(); ++i) points.push_back({file.omegas[i], file.columns[q][i]});
      std::sort(points.begin(), points.end(), [](auto& a, auto& b) { return a.omega < b.omega; });
      extrapolate_quantity(table, file.names[q], points, floor);
    }
    return table;
  }
  std::vector<SeriesPoint> energy;
  std::vector<SeriesPoint> ls;
  auto sorted = config;
  std::sort(sorted.omegas.begin(), sorted.omegas.end());
  sorted.omegas.erase(std::unique(sorted.omegas.begin(), sorted.omegas.end()), sorted.omegas.end());
  for (const auto& r : run_entropy(sorted, log)) {
    energy.push_back({r.omega, r.energy});
    ls.push_back({r.omega, r.report.linear_entropy});
  }
  extrapolate_quantity(table, "energy", energy, floor);
  extrapolate_quantity(table, "linear_entropy", ls, floor);
  return table;
}

Table cmd_sweep(const RunConfig& config, const Logger& log) {
  config.validate();
  std::vector<double> grid = config.grid.empty() ? default_grid(config.axis) : config.grid;
  std::sort(grid.begin(), grid.end());
  const int omega = config.omegas.size() == 1 ? config.omegas.front() : 5;
  Table table{"sweep",
              {"parameter", "axis", "Z", "inverse_mass", "omega", "alpha", "energy", "linear_entropy", "tr_rho2"},
              {},
              true};
  with_precision(config, [&]<class Real>() {
    RingIntegralCache<Real> cache(RingSeriesOptions{config.tol_i4, 200});
    for (double x : grid) {
      SystemSpec spec;
      if (config.axis == SweepAxis::Charge) {
        spec.Z = x;
        spec.m3 = ParticleMass::from_inverse(config.inverse_mass.value_or(0.0));
      } else {
        spec.Z = config.charge.value_or(1.0);
        spec.m3 = ParticleMass::from_inverse(x);
      }
      const auto params = reduced_parameters(spec);
      note(log, fmt::format("sweep {}={} omega={}", to_string(config.axis), x, omega));
      const auto r = entropy_row<Real>(omega, params, default_bracket(params), config, cache);
      table.rows.push_back({x, to_string(config.axis), spec.Z, spec.m3.inverse(), std::int64_t{omega}, r.alpha,
                            r.energy, r.report.linear_entropy, r.report.tr_rho2});
    }
  });
  return table;
}

Table cmd_verify(const RunConfig& config, const Logger& log) {
  config.validate();
  Table table{"verify",
              {"check", "key", "analytic", "mc_mean", "mc_sigma", "z_score", "rel_error", "pass"},
              {},
              true};
  CounterRng keys(config.seed, 0xfeedull);
  for (int i = 0; i < config.random_keys; ++i) {
    const auto key = random_ring_key(keys);
    double analytic = to_double(i4_ring<quad>(key, {config.tol_i4, 200}).value);
    if (config.corrupt && i == 0) analytic = -analytic;
    note(log, fmt::format("verify mc {}/{} {}", i + 1, config.random_keys, key.to_string()));
    const auto mc = mc_i4_ring(key, config.samples, config.seed + static_cast<std::uint64_t>(i), config.threads);
    const double z = (analytic - mc.mean) / mc.std_error;
    const bool pass = std::abs(z) < 3.0;
    table.ok = table.ok && pass;
    table.rows.push_back({std::string("mc_i4_ring"), key.to_string(), analytic, mc.mean, mc.std_error, z,
                          std::abs(analytic - mc.mean) / std::abs(mc.mean), std::string(pass ? "true" : "false")});
  }
  // Even cross powers: compare with the polynomial expansion.
  for (int i = 0; i < config.random_keys; ++i) {
    auto key = random_ring_key(keys);
    for (auto& n : key.powers.n) n -= n % 2;
    double analytic = to_double(i4_ring<quad>(key, {config.tol_i4, 200}).value);
    if (config.corrupt && i == 0) analytic = -analytic;
    const double exact = to_double(exact_even_ring(key));
    const double rel = std::abs(analytic - exact) / std::abs(exact);
    const bool pass = rel < 1e-10;
    table.ok = table.ok && pass;
    table.rows.push_back({std::string("exact_even_ring"), key.to_string(), analytic, exact, 0.0, Cell{}, rel,
                          std::string(pass ? "true" : "false")});
  }
  return table;
}

namespace {

std::string cell_text(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_real(v); }
    std::string operator()(const std::string& v) const {
      if (v.find_first_of(",\"\n") == std::string::npos) return v;
      std::string quoted = "\"";
      for (char ch : v) {
        if (ch == '"') quoted += '"';
        quoted += ch;
      }
      return quoted + "\"";
    }
  };
  return std::visit(Visitor{}, c);
}

nlohmann::json cell_json(const Cell& c) {
  struct Visitor {
    nlohmann::json operator()(std::monostate) const { return nullptr; }
    nlohmann::json operator()(std::int64_t v) const { return v; }
    nlohmann::json operator()(double v) const {
      if (!std::isfinite(v)) return format_real(v);
      return v;
    }
    nlohmann::json operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, c);
}

}  // namespace

void write_csv(std::ostream& out, const Table& table) {
  out << "schema_version";
  for (const auto& c : table.columns) out << ',' << c;
  out << '\n';
  for (const auto& row : table.rows) {
    out << kSchemaVersion;
    for (const auto& cell : row) out << ',' << cell_text(cell);
    out << '\n';
  }
}

void write_json(std::ostream& out, const Table& table, const RunConfig& config) {
  nlohmann::json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = table.command;
  doc["ok"] = table.ok;
  doc["config"] = {{"system", config.system},
                   {"omegas", config.omegas},
                   {"precision_digits", config.precision_digits},
                   {"tol_i4", config.tol_i4},
                   {"seed", config.seed}};
  if (config.charge) doc["config"]["Z"] = *config.charge;
  if (config.inverse_mass) doc["config"]["inverse_mass"] = *config.inverse_mass;
  doc["columns"] = table.columns;
  doc["rows"] = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) obj[table.columns[i]] = cell_json(row[i]);
    doc["rows"].push_back(obj);
  }
  out << doc.dump(2) << '\n';
}

SeriesFile read_series_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument(fmt::format("cannot open series file '{}'", path));
  SeriesFile file;
  std::string line;
  bool first = true;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    boost::algorithm::trim(line);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    boost::algorithm::split(fields, line, boost::is_any_of(","));
    for (auto& f : fields) boost::algorithm::trim(f);
    if (fields.size() < 2) throw InvalidArgument(fmt::format("{}:{}: expected omega,value", path, number));
    auto is_number = [](const std::string& s) {
      char* end = nullptr;
      std::strtod(s.c_str(), &end);
      return !s.empty() && end == s.c_str() + s.size();
    };
    if (first) {
      first = false;
      file.columns.resize(fields.size() - 1);
      if (!is_number(fields[0])) {
        file.names.assign(fields.begin() + 1, fields.end());
        continue;
      }
      for (std::size_t i = 1; i < fields.size(); ++i)
        file.names.push_back(fields.size() == 2 ? "value" : fmt::format("value{}", i));
    }
    if (fields.size() != file.columns.size() + 1)
      throw InvalidArgument(fmt::format("{}:{}: expected {} fields", path, number, file.columns.size() + 1));
    for (const auto& f : fields)
      if (!is_number(f)) throw InvalidArgument(fmt::format("{}:{}: '{}' is not a number", path, number, f));
    const double w = std::strtod(fields[0].c_str(), nullptr);
    if (w != std::floor(w)) throw InvalidArgument(fmt::format("{}:{}: omega must be an integer", path, number));
    file.omegas.push_back(static_cast<int>(w));
    for (std::size_t i = 1; i < fields.size(); ++i) file.columns[i - 1].push_back(std::strtod(fields[i].c_str(), nullptr));
  }
  if (file.omegas.empty()) throw InvalidArgument(fmt::format("series file '{}' has no data", path));
  return file;
}

}  // namespace hylent
