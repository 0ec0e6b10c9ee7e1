#include "cmf/run_config.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "cmf/asymptotics.hpp"
#include "cmf/ed_oracle.hpp"
#include "cmf/jw_oracle.hpp"
#include "cmf/meanfield.hpp"
#include "cmf/observables.hpp"

namespace cmf {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

Method method_from(const std::string& s) {
  if (s == "cmf") return Method::Cmf;
  if (s == "ed") return Method::Ed;
  if (s == "jw") return Method::Jw;
  if (s == "asymptotic") return Method::Asymptotic;
  throw ConfigError("unknown method '" + s + "' (expected cmf, ed, jw, asymptotic)");
}

FamilyKind family_from(const std::string& s) {
  if (s == "powerlaw") return FamilyKind::PowerLaw;
  if (s == "finiterange") return FamilyKind::FiniteRangeConstant;
  if (s == "lipkin") return FamilyKind::Lipkin;
  if (s == "nn") return FamilyKind::NearestNeighbor;
  throw ConfigError("unknown coupling family '" + s + "'");
}

double to_double(const std::string& key, const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("value of '" + key + "' is not a number: '" + s + "'");
  }
}

int to_int(const std::string& key, const std::string& s) {
  const double v = to_double(key, s);
  if (v != std::floor(v)) throw ConfigError("value of '" + key + "' is not an integer: '" + s + "'");
  return static_cast<int>(v);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct Row {
  Method method;
  double b_over_bc, temperature;
  int j;
  double c = kNan, c_plus = kNan, c_minus = kNan;
  std::string kind = "error";
  double ax = kNan, ay = kNan, az = kNan, sz = kNan;
  std::string flags;
};

std::string kind_label(double cp, double cm) {
  if (cp <= 0.0 && cm <= 0.0) return "separable";
  return cp >= cm ? "parallel" : "antiparallel";
}

struct SweepPoint {
  double b_over_bc;
  double temperature;
};

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::Cmf: return "cmf";
    case Method::Ed: return "ed";
    case Method::Jw: return "jw";
    case Method::Asymptotic: return "asymptotic";
  }
  return "?";
}

void RunConfig::validate() const {
  if (methods.empty()) throw ConfigError("at least one method is required");
  if (n < 2) throw ConfigError("n must be >= 2");
  if (steps < 1) throw ConfigError("steps must be >= 1");
  if (vx <= 0.0) throw ConfigError("vx must be positive");
  if (std::abs(chi) >= 1.0) throw ConfigError("chi must satisfy |chi| < 1 (treated regime)");
  if (vz < 0.0 || vz >= 1.0) throw ConfigError("vz must lie in [0, 1) (treated regime)");
  if (family == FamilyKind::PowerLaw && alpha < 0.0) throw ConfigError("alpha must be >= 0");
  if (family == FamilyKind::FiniteRangeConstant && (range < 1 || 2 * range > n))
    throw ConfigError("range must satisfy 1 <= L <= n/2");
  if (min > max) throw ConfigError("sweep min must not exceed max");
  if (axis == SweepAxis::Temperature && min < 0.0) throw ConfigError("temperatures must be >= 0");
  if (axis == SweepAxis::Field && fixed_temperature < 0.0)
    throw ConfigError("fixed temperature must be >= 0");

  const bool has_ed = std::count(methods.begin(), methods.end(), Method::Ed) > 0;
  const bool has_jw = std::count(methods.begin(), methods.end(), Method::Jw) > 0;
  const bool thermal = axis == SweepAxis::Temperature ? max > 0.0 : fixed_temperature > 0.0;
  if (has_ed) {
    if (n > ed_max_n)
      throw ConfigError("ed requires n <= " + std::to_string(ed_max_n));
    if (thermal && n > ed_max_n_thermal)
      throw ConfigError("ed with T > 0 requires n <= " + std::to_string(ed_max_n_thermal));
  }
  if (has_jw) {
    if (family != FamilyKind::NearestNeighbor)
      throw ConfigError("jw requires the nn coupling family");
    if (vz != 0.0) throw ConfigError("jw requires vz = 0");
    if (thermal) throw ConfigError("jw supports T = 0 only");
  }
  for (int j : js)
    if (j < 1 || j >= n) throw ConfigError("separation j = " + std::to_string(j) + " out of range");
}

ConfigEntries read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  ConfigEntries entries;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section at line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value at line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("empty key or value at line " + std::to_string(lineno));
    entries.emplace_back(section.empty() ? key : section + "." + key, value);
  }
  return entries;
}

RunConfig parse_config(const ConfigEntries& entries) {
  RunConfig c;
  for (const auto& [key, value] : entries) {
    if (key == "chain.n") c.n = to_int(key, value);
    else if (key == "chain.temperature") c.fixed_temperature = to_double(key, value);
    else if (key == "coupling.family") c.family = family_from(value);
    else if (key == "coupling.alpha") c.alpha = to_double(key, value);
    else if (key == "coupling.range") c.range = to_int(key, value);
    else if (key == "coupling.chi") c.chi = to_double(key, value);
    else if (key == "coupling.vz") c.vz = to_double(key, value);
    else if (key == "coupling.vx") c.vx = to_double(key, value);
    else if (key == "sweep.methods") {
      c.methods.clear();
      for (const auto& m : split(value, ',')) c.methods.push_back(method_from(m));
    } else if (key == "sweep.axis") {
      if (value == "field") c.axis = SweepAxis::Field;
      else if (value == "temperature") c.axis = SweepAxis::Temperature;
      else throw ConfigError("sweep.axis must be 'field' or 'temperature'");
    } else if (key == "sweep.min") c.min = to_double(key, value);
    else if (key == "sweep.max") c.max = to_double(key, value);
    else if (key == "sweep.steps") c.steps = to_int(key, value);
    else if (key == "sweep.b") c.fixed_b_over_bc = to_double(key, value);
    else if (key == "sweep.js") {
      c.js.clear();
      if (value != "all")
        for (const auto& j : split(value, ',')) c.js.push_back(to_int(key, j));
    } else if (key == "output.path") c.output_path = value;
    else if (key == "limits.ed_max_n") c.ed_max_n = to_int(key, value);
    else if (key == "limits.ed_max_n_thermal") c.ed_max_n_thermal = to_int(key, value);
    else throw ConfigError("unknown configuration key '" + key + "'");
  }

  // canonical method order for deterministic output
  std::sort(c.methods.begin(), c.methods.end());
  c.methods.erase(std::unique(c.methods.begin(), c.methods.end()), c.methods.end());
  std::sort(c.js.begin(), c.js.end());
  c.js.erase(std::unique(c.js.begin(), c.js.end()), c.js.end());
  c.validate();
  return c;
}

namespace {

double family_parameter(const RunConfig& c) {
  switch (c.family) {
    case FamilyKind::PowerLaw: return c.alpha;
    case FamilyKind::FiniteRangeConstant: return c.range;
    case FamilyKind::Lipkin: return 0.0;
    case FamilyKind::NearestNeighbor: return 1.0;
    case FamilyKind::Custom: return kNan;
  }
  return kNan;
}

CouplingFamily make_family(const RunConfig& c) {
  const double vx = c.vx, vy = c.chi * c.vx, vz = c.vz * c.vx;
  switch (c.family) {
    case FamilyKind::PowerLaw: return CouplingFamily::power_law(c.alpha, vx, vy, vz);
    case FamilyKind::FiniteRangeConstant: return CouplingFamily::finite_range(c.range, vx, vy, vz);
    case FamilyKind::Lipkin: return CouplingFamily::lipkin(vx, vy, vz);
    case FamilyKind::NearestNeighbor: return CouplingFamily::nearest_neighbor(vx, vy, vz);
    case FamilyKind::Custom: break;
  }
  throw ConfigError("custom families are not constructible from a run configuration");
}

std::vector<SweepPoint> sweep_points(const RunConfig& c, double bc, double bs_over_bc) {
  std::vector<double> values(static_cast<size_t>(c.steps));
  const double step = c.steps > 1 ? (c.max - c.min) / (c.steps - 1) : 0.0;
  for (int i = 0; i < c.steps; ++i) values[static_cast<size_t>(i)] = c.min + step * i;

  std::vector<SweepPoint> points;
  if (c.axis == SweepAxis::Field) {
    const double nudge = step > 0.0 ? 0.5 * step : 1e-3;
    for (double& v : values)
      if (std::abs(v - 1.0) < 1e-12) v += nudge;  // keep CMF off the critical field
    if (!std::isnan(bs_over_bc) && bs_over_bc >= c.min && bs_over_bc <= c.max)
      values.push_back(bs_over_bc);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                 values.end());
    for (double v : values) points.push_back({v, c.fixed_temperature});
  } else {
    for (double v : values) points.push_back({c.fixed_b_over_bc, v});
  }
  (void)bc;
  return points;
}

void rows_cmf(std::vector<Row>& rows, const RunConfig& c, const CouplingProfile& profile,
              double bc, const SweepPoint& p, const std::vector<int>& js) {
  const ChainSpec chain{c.n, p.b_over_bc * bc, p.temperature};
  const CmfSolution s = solve_cmf(chain, profile);
  std::string flags;
  if (s.conc.critical) flags = "critical";
  if (s.corr.spin_bound_violated) flags += flags.empty() ? "spin_bound" : ";spin_bound";
  for (int j : js) {
    Row r{Method::Cmf, p.b_over_bc, p.temperature, j};
    r.c = s.conc.c[static_cast<size_t>(j)];
    r.c_plus = s.conc.c_plus[static_cast<size_t>(j)];
    r.c_minus = s.conc.c_minus[static_cast<size_t>(j)];
    r.kind = kind_label(r.c_plus, r.c_minus);
    r.ax = s.corr.alpha[0][static_cast<size_t>(j)];
    r.ay = s.corr.alpha[1][static_cast<size_t>(j)];
    r.az = s.corr.alpha[2][static_cast<size_t>(j)];
    r.sz = s.corr.sz;
    r.flags = flags;
    rows.push_back(std::move(r));
  }
}

void rows_ed(std::vector<Row>& rows, const RunConfig& c, const CouplingProfile& profile, double bc,
             const SweepPoint& p, const std::vector<int>& js) {
  const double b = p.b_over_bc * bc;
  const ed::EdResult res = p.temperature == 0.0 ? ed::ground_state(c.n, profile, b)
                                                : ed::thermal_state(c.n, profile, b, p.temperature);
  const std::string flags = res.near_degenerate ? "degenerate" : "";
  for (int j : js) {
    Row r{Method::Ed, p.b_over_bc, p.temperature, j};
    const double ax = res.alpha[0][static_cast<size_t>(j)];
    const double ay = res.alpha[1][static_cast<size_t>(j)];
    const double az = res.alpha[2][static_cast<size_t>(j)];
    r.c = res.concurrence[static_cast<size_t>(j)];
    r.c_plus = 2.0 * (std::abs(ax - ay) + az - 0.25);
    const double arg = (0.25 + az) * (0.25 + az) - res.sz * res.sz;
    r.c_minus = 2.0 * (std::abs(ax + ay) - std::sqrt(std::max(0.0, arg)));
    r.kind = kind_label(r.c_plus, r.c_minus);
    r.ax = ax;
    r.ay = ay;
    r.az = az;
    r.sz = res.sz;
    r.flags = flags;
    rows.push_back(std::move(r));
  }
}

void rows_jw(std::vector<Row>& rows, const RunConfig& c, const CouplingProfile& profile, double bc,
             const SweepPoint& p, const std::vector<int>& js) {
  const jw::FermionSpectrum spec = jw::jw_ground(profile, p.b_over_bc * bc);
  for (int j : js) {
    Row r{Method::Jw, p.b_over_bc, p.temperature, j};
    const jw::JwCorrelations corr = jw::jw_correlations(spec, j);
    r.ax = corr.alpha_x;
    r.ay = corr.alpha_y;
    r.az = corr.alpha_z;
    r.sz = corr.sz;
    r.c_plus = 2.0 * (std::abs(corr.alpha_x - corr.alpha_y) + corr.alpha_z - 0.25);
    const double arg = (0.25 + corr.alpha_z) * (0.25 + corr.alpha_z) - corr.sz * corr.sz;
    r.c_minus = 2.0 * (std::abs(corr.alpha_x + corr.alpha_y) - std::sqrt(std::max(0.0, arg)));
    r.c = std::max({r.c_plus, r.c_minus, 0.0});
    r.kind = kind_label(r.c_plus, r.c_minus);
    rows.push_back(std::move(r));
  }
}

void rows_asymptotic(std::vector<Row>& rows, const RunConfig& c, const CouplingProfile& profile,
                     double bc, const SweepPoint& p, const std::vector<int>& js) {
  (void)c;
  const double b = p.b_over_bc * bc;
  const StrongFieldInputs in = make_strong_field_inputs(profile, b);
  for (int j : js) {
    Row r{Method::Asymptotic, p.b_over_bc, p.temperature, j};
    const double c0 = strong_field_concurrence(j, in, profile.n);
    r.c_plus = thermal_corrected_concurrence(c0, in.lambda, p.temperature);
    r.c = std::max(r.c_plus, 0.0);
    r.kind = r.c > 0.0 ? "parallel" : "separable";
    rows.push_back(std::move(r));
  }
}

}  // namespace

RunResult run(const RunConfig& config) {
  config.validate();
  const CouplingProfile profile = build_couplings(make_family(config), config.n);
  const double bc = critical_field(profile);

  double bs_over_bc = kNan;
  if (config.axis == SweepAxis::Field) {
    try {
      bs_over_bc = factorizing_field(profile.v0(kX), profile.v0(kY), profile.v0(kZ)) / bc;
    } catch (const NotFactorizable&) {
    }
  }

  std::vector<int> js = config.js;
  if (js.empty())
    for (int j = 1; j <= config.n / 2; ++j) js.push_back(j);

  const std::vector<SweepPoint> points = sweep_points(config, bc, bs_over_bc);
  std::vector<std::vector<Row>> results(points.size());
  std::atomic<int> failures{0};
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    while (true) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= points.size()) return;
      const SweepPoint& p = points[idx];
      for (Method m : config.methods) {
        try {
          switch (m) {
            case Method::Cmf: rows_cmf(results[idx], config, profile, bc, p, js); break;
            case Method::Ed: rows_ed(results[idx], config, profile, bc, p, js); break;
            case Method::Jw: rows_jw(results[idx], config, profile, bc, p, js); break;
            case Method::Asymptotic: rows_asymptotic(results[idx], config, profile, bc, p, js); break;
          }
        } catch (const Error& err) {
          failures.fetch_add(1);
          for (int j : js) {
            Row r{m, p.b_over_bc, p.temperature, j};
            r.flags = std::string("failed:") + err.what();
            for (char& ch : r.flags)
              if (ch == ',' || ch == '\n') ch = ' ';
            results[idx].push_back(std::move(r));
          }
        }
      }
    }
  };

  const unsigned pool = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                        static_cast<unsigned>(points.size())));
  std::vector<std::thread> threads;
  for (unsigned t = 0; t < pool; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  std::ostringstream csv;
  csv << "method,n,family,alpha_or_L,chi,vz,b_over_bc,T,j,C,C_plus,C_minus,kind,"
         "alpha_x,alpha_y,alpha_z,sz,flags\n";
  int rows = 0;
  const std::string family = family_name(config.family);
  const std::string fam_par = fmt(family_parameter(config));
  for (const auto& point_rows : results) {
    for (const Row& r : point_rows) {
      csv << method_name(r.method) << ',' << config.n << ',' << family << ',' << fam_par << ','
          << fmt(config.chi) << ',' << fmt(config.vz) << ',' << fmt(r.b_over_bc) << ','
          << fmt(r.temperature) << ',' << r.j << ',' << fmt(r.c) << ',' << fmt(r.c_plus) << ','
          << fmt(r.c_minus) << ',' << r.kind << ',' << fmt(r.ax) << ',' << fmt(r.ay) << ','
          << fmt(r.az) << ',' << fmt(r.sz) << ',' << r.flags << '\n';
      ++rows;
    }
  }

  RunResult out;
  out.csv = csv.str();
  out.points = static_cast<int>(points.size());
  out.rows = rows;
  out.failures = failures.load();
  std::ostringstream sum;
  sum << "points=" << out.points << " rows=" << out.rows << " failures=" << out.failures
      << " b_c=" << fmt(bc);
  if (!std::isnan(bs_over_bc)) sum << " b_s/b_c=" << fmt(bs_over_bc);
  out.summary = sum.str();
  return out;
}

}  // namespace cmf
