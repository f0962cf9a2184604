#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "gl3/errors.hpp"
#include "gl3/identities.hpp"
#include "gl3/meanvalue.hpp"
#include "gl3/mollifier.hpp"
#include "gl3/parallel.hpp"

namespace gl3::cli {

using nlohmann::json;

namespace {

const std::map<std::string, Command> kCommands = {
    {"constants", Command::constants},       {"chain-verify", Command::chain_verify},
    {"delta-enum", Command::delta_enum},     {"mollifier", Command::mollifier},
    {"afe-check", Command::afe_check},       {"first-moment", Command::first_moment},
    {"second-moment", Command::second_moment}, {"zeros", Command::zeros},
    {"littlewood", Command::littlewood},     {"arith-selftest", Command::arith_selftest},
};

// Flag names; the config file uses the same names with '-' replaced by '_'.
const std::vector<std::string> kFields = {
    "source", "source-file", "seed", "v1", "v2", "T", "k", "alpha", "X", "sigma0", "omega-cap",
    "omega-mode", "prime-limit", "support-bound", "bound", "quad-tol", "sigma", "t", "T1", "T2",
    "afe-A", "afe-eps", "afe-abscissa", "afe-quad-step", "term-budget", "l-terms", "output", "format",
    "threads",
};

std::string snake(std::string s) {
  for (char& c : s)
    if (c == '-') c = '_';
  return s;
}

double parse_double(const std::string& field, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw usage_error("field '" + field + "': expected a number, got '" + text + "'");
  }
}

u64 parse_u64(const std::string& field, const std::string& text) {
  try {
    std::size_t used = 0;
    if (!text.empty() && text[0] == '-') throw std::invalid_argument(text);
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw usage_error("field '" + field + "': expected a nonnegative integer, got '" + text + "'");
  }
}

std::complex<double> parse_complex(const std::string& field, const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return {parse_double(field, text), 0.0};
  return {parse_double(field, text.substr(0, comma)), parse_double(field, text.substr(comma + 1))};
}

std::string json_scalar_text(const std::string& key, const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer() || v.is_number_unsigned()) return std::to_string(v.get<long long>());
  if (v.is_number_float()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  throw usage_error("config key '" + key + "': expected a number or string");
}

void apply(RunConfig& cfg, const std::string& field, const std::string& value) {
  if (field == "source") {
    SourceSpec spec = cfg.source.value_or(SourceSpec{});
    if (value == "eisenstein") spec.kind = SourceKind::eisenstein;
    else if (value == "sym2_lift") spec.kind = SourceKind::sym2_lift;
    else if (value == "file") spec.kind = SourceKind::file;
    else if (value == "random_unitary") spec.kind = SourceKind::random_unitary;
    else throw usage_error("field 'source': unknown kind '" + value + "'");
    cfg.source = spec;
  } else if (field == "source-file") {
    SourceSpec spec = cfg.source.value_or(SourceSpec{});
    spec.path = value;
    if (!cfg.source) spec.kind = SourceKind::file;
    cfg.source = spec;
  } else if (field == "seed") {
    SourceSpec spec = cfg.source.value_or(SourceSpec{SourceKind::random_unitary, {}, 1});
    spec.seed = parse_u64(field, value);
    cfg.source = spec;
  } else if (field == "v1") cfg.v1 = parse_complex(field, value);
  else if (field == "v2") cfg.v2 = parse_complex(field, value);
  else if (field == "T") cfg.T = parse_double(field, value);
  else if (field == "k") cfg.k = parse_double(field, value);
  else if (field == "alpha") cfg.alpha = parse_double(field, value);
  else if (field == "X") cfg.X = parse_double(field, value);
  else if (field == "sigma0") cfg.sigma0 = parse_double(field, value);
  else if (field == "omega-cap") cfg.omega_cap = parse_double(field, value);
  else if (field == "omega-mode") {
    if (value == "with_multiplicity") cfg.omega_mode = OmegaMode::with_multiplicity;
    else if (value == "distinct") cfg.omega_mode = OmegaMode::distinct;
    else throw usage_error("field 'omega-mode': expected with_multiplicity or distinct");
  } else if (field == "prime-limit") cfg.prime_limit = parse_u64(field, value);
  else if (field == "support-bound") cfg.support_bound = parse_u64(field, value);
  else if (field == "bound") cfg.bound = parse_u64(field, value);
  else if (field == "quad-tol") cfg.quad_tol = parse_double(field, value);
  else if (field == "sigma") cfg.sigma = parse_double(field, value);
  else if (field == "t") cfg.t = parse_double(field, value);
  else if (field == "T1") cfg.T1 = parse_double(field, value);
  else if (field == "T2") cfg.T2 = parse_double(field, value);
  else if (field == "afe-A") cfg.afe.A = static_cast<int>(parse_u64(field, value));
  else if (field == "afe-eps") cfg.afe.eps = parse_double(field, value);
  else if (field == "afe-abscissa") cfg.afe.contour_abscissa = parse_double(field, value);
  else if (field == "afe-quad-step") cfg.afe.quad_step = parse_double(field, value);
  else if (field == "term-budget") cfg.afe.term_budget = parse_u64(field, value);
  else if (field == "l-terms") cfg.l_terms = parse_u64(field, value);
  else if (field == "output") cfg.output = value;
  else if (field == "format") {
    if (value == "json") cfg.format = Format::json;
    else if (value == "csv") cfg.format = Format::csv;
    else throw usage_error("field 'format': expected json or csv");
  } else if (field == "threads") cfg.threads = static_cast<unsigned>(parse_u64(field, value));
  else throw usage_error("unknown field '" + field + "'");
}

bool needs_source(Command c) {
  switch (c) {
    case Command::mollifier:
    case Command::afe_check:
    case Command::first_moment:
    case Command::second_moment:
    case Command::zeros:
    case Command::littlewood: return true;
    default: return false;
  }
}

// Lighter AFE truncation for commands that evaluate L at many points.
// eps = 0.7 keeps the AFE within about 2e-5 of the true value for t >= 10 at
// a tenth of the eps = 1 cost; smaller eps loses the zero counts.
double default_eps(Command c) {
  switch (c) {
    case Command::first_moment:
    case Command::second_moment:
    case Command::littlewood:
    case Command::zeros: return 0.7;
    default: return 1.0;
  }
}

void validate_config(const RunConfig& cfg) {
  if (needs_source(cfg.command) && !cfg.source)
    throw usage_error(std::string("field 'source' is required for ") + to_string(cfg.command));
  if (cfg.source) {
    const auto& s = *cfg.source;
    if ((s.kind == SourceKind::file || s.kind == SourceKind::sym2_lift) && s.path.empty())
      throw usage_error("field 'source-file' is required for source kind " + std::string(gl3::to_string(s.kind)));
    if ((s.kind == SourceKind::eisenstein || s.kind == SourceKind::random_unitary) && !s.path.empty())
      throw usage_error("field 'source-file' contradicts source kind " + std::string(gl3::to_string(s.kind)));
  }
  if (!(cfg.quad_tol > 0.0)) throw usage_error("field 'quad-tol' must be positive");
  if (cfg.T2 < cfg.T1) throw usage_error("fields 'T1'/'T2': T1 must not exceed T2");
  if (!(cfg.T > 0.0)) throw usage_error("field 'T' must be positive");
  validate(cfg.afe);
}

}  // namespace

const char* to_string(Command c) {
  for (const auto& [name, cmd] : kCommands)
    if (cmd == c) return name.c_str();
  return "unknown";
}

RunConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"GL(3) mollifier experiments"};
  std::string command, config_path;
  app.add_option("command", command, "subcommand")->required();
  app.add_option("--config", config_path, "JSON config file");
  std::map<std::string, std::string> given;
  std::map<std::string, CLI::Option*> options;
  std::map<std::string, std::string> storage;
  for (const auto& f : kFields) options[f] = app.add_option("--" + f, storage[f]);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw usage_error(std::string("command line: ") + e.what());
  }

  auto it = kCommands.find(command);
  if (it == kCommands.end()) throw usage_error("unknown command '" + command + "'");

  RunConfig cfg;
  cfg.command = it->second;
  cfg.afe.eps = default_eps(cfg.command);
  if (cfg.command == Command::littlewood) cfg.quad_tol = 1e-3;

  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw usage_error("field 'config': cannot open " + config_path);
    json file;
    try {
      file = json::parse(in);
    } catch (const json::exception& e) {
      throw usage_error("field 'config': " + std::string(e.what()));
    }
    if (!file.is_object()) throw usage_error("field 'config': top level must be an object");
    for (const auto& [key, value] : file.items()) {
      if (key == "command") {
        if (value != command) throw usage_error("config key 'command' contradicts the command line");
        continue;
      }
      std::string field;
      for (const auto& f : kFields)
        if (snake(f) == key) field = f;
      if (field.empty()) throw usage_error("unknown config key '" + key + "'");
      given[field] = json_scalar_text(key, value);
    }
  }
  for (const auto& f : kFields)
    if (options[f]->count() > 0) given[f] = storage[f];

  // Kind before file/seed so that the defaults they imply do not win.
  if (auto s = given.find("source"); s != given.end()) apply(cfg, "source", s->second);
  for (const auto& [field, value] : given)
    if (field != "source") apply(cfg, field, value);
  if (cfg.source && given.count("seed") && cfg.source->kind != SourceKind::random_unitary)
    throw usage_error("field 'seed' contradicts source kind " + std::string(gl3::to_string(cfg.source->kind)));
  validate_config(cfg);
  return cfg;
}

std::string serialize(const json& value) {
  std::string out;
  auto emit = [&](auto&& self, const json& v, int depth) -> void {
    const std::string pad(2 * (depth + 1), ' ');
    const std::string close(2 * depth, ' ');
    switch (v.type()) {
      case json::value_t::object: {
        if (v.empty()) {
          out += "{}";
          return;
        }
        out += "{\n";
        bool first = true;
        for (const auto& [k, item] : v.items()) {
          if (!first) out += ",\n";
          first = false;
          out += pad + json(k).dump() + ": ";
          self(self, item, depth + 1);
        }
        out += "\n" + close + "}";
        return;
      }
      case json::value_t::array: {
        if (v.empty()) {
          out += "[]";
          return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) out += ",\n";
          out += pad;
          self(self, v[i], depth + 1);
        }
        out += "\n" + close + "]";
        return;
      }
      case json::value_t::number_float: {
        const double d = v.get<double>();
        if (!std::isfinite(d)) {
          out += "null";
          return;
        }
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", d == 0.0 ? 0.0 : d);  // no "-0"
        std::string s = buf;
        if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
        out += s;
        return;
      }
      default: out += v.dump();
    }
  };
  emit(emit, value, 0);
  return out;
}

std::string determinism_hash(const json& report) {
  json copy = report;
  copy.erase("generated_at");
  copy.erase("determinism_hash");
  const std::string text = serialize(copy);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

json complex_json(std::complex<double> z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

SatakeSource make_source(const SourceSpec& s) {
  switch (s.kind) {
    case SourceKind::eisenstein: return SatakeSource::eisenstein();
    case SourceKind::random_unitary: return SatakeSource::random_unitary(s.seed);
    case SourceKind::sym2_lift: return SatakeSource::sym2_lift_file(s.path);
    case SourceKind::file: return SatakeSource::from_file(s.path);
  }
  throw usage_error("unknown source kind");
}

MollifierParams params_from(const RunConfig& cfg, std::optional<double> sigma_fallback = {}) {
  ParamOverrides o;
  o.sigma0 = cfg.sigma0 ? cfg.sigma0 : sigma_fallback;
  o.X = cfg.X;
  o.omega_cap = cfg.omega_cap;
  o.mode = cfg.omega_mode;
  if (cfg.T < 1619.0 && (!o.sigma0 || !o.X))
    throw usage_error("fields 'X' and 'sigma0' are required when T < 1619");
  return desk_params(cfg.T, cfg.k, cfg.alpha, o);
}

json params_json(const MollifierParams& p) {
  return json{{"T", p.T},
              {"k", p.k},
              {"alpha", p.alpha},
              {"sigma0", p.sigma0},
              {"X", p.X},
              {"omega_cap", p.omega_cap},
              {"omega_mode", p.mode == OmegaMode::distinct ? "distinct" : "with_multiplicity"},
              {"sigma0_overridden", p.sigma0_overridden},
              {"X_overridden", p.X_overridden},
              {"omega_cap_overridden", p.cap_overridden}};
}

json config_json(const RunConfig& cfg) {
  json c;
  c["command"] = to_string(cfg.command);
  if (cfg.source) {
    c["source"] = gl3::to_string(cfg.source->kind);
    if (!cfg.source->path.empty()) c["source_file"] = cfg.source->path;
    if (cfg.source->kind == SourceKind::random_unitary) c["seed"] = cfg.source->seed;
  }
  c["v1"] = complex_json(cfg.v1);
  c["v2"] = complex_json(cfg.v2);
  c["T"] = cfg.T;
  c["k"] = cfg.k;
  c["alpha"] = cfg.alpha;
  if (cfg.X) c["X"] = *cfg.X;
  if (cfg.sigma0) c["sigma0"] = *cfg.sigma0;
  if (cfg.omega_cap) c["omega_cap"] = *cfg.omega_cap;
  c["omega_mode"] = cfg.omega_mode == OmegaMode::distinct ? "distinct" : "with_multiplicity";
  c["prime_limit"] = cfg.prime_limit;
  if (cfg.support_bound) c["support_bound"] = *cfg.support_bound;
  c["bound"] = cfg.bound;
  c["quad_tol"] = cfg.quad_tol;
  if (cfg.sigma) c["sigma"] = *cfg.sigma;
  c["t"] = cfg.t;
  c["T1"] = cfg.T1;
  c["T2"] = cfg.T2;
  c["afe"] = json{{"A", cfg.afe.A},
                  {"eps", cfg.afe.eps},
                  {"contour_abscissa", cfg.afe.contour_abscissa},
                  {"quad_step", cfg.afe.quad_step},
                  {"term_budget", cfg.afe.term_budget}};
  if (cfg.l_terms) c["l_terms"] = *cfg.l_terms;
  c["format"] = cfg.format == Format::csv ? "csv" : "json";
  return c;
}

struct Outcome {
  json result;
  std::string csv;  // body used when --format csv
  int status = 0;
};

std::string kv_csv(const json& result) {
  std::string out = "key,value\n";
  std::function<void(const std::string&, const json&)> walk = [&](const std::string& prefix, const json& v) {
    if (v.is_object()) {
      for (const auto& [k, item] : v.items()) walk(prefix.empty() ? k : prefix + "." + k, item);
    } else if (v.is_array()) {
      for (std::size_t i = 0; i < v.size(); ++i) walk(prefix + "[" + std::to_string(i) + "]", v[i]);
    } else {
      std::string s = serialize(v);
      if (v.is_string()) s = v.get<std::string>();
      out += prefix + "," + s + "\n";
    }
  };
  walk("", result);
  return out;
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
  return buf;
}

Outcome cmd_constants(const RunConfig& cfg) {
  const double sigma0 = cfg.sigma0.value_or(0.5);
  const auto mc = main_constant(sigma0, cfg.prime_limit);
  constexpr double kPublished = 6.52;
  std::string relation;
  if (mc.constant.upper() < kPublished) relation = "interval lies below 6.52";
  else if (mc.constant.lower() > kPublished) relation = "interval lies above 6.52";
  else relation = "interval contains 6.52";
  Outcome o;
  o.result = json{{"sigma0", sigma0},
                  {"prime_limit", cfg.prime_limit},
                  {"prime_count", mc.prime_count},
                  {"value", mc.constant.value},
                  {"error_radius", mc.constant.error_radius},
                  {"lower", mc.constant.lower()},
                  {"upper", mc.constant.upper()},
                  {"truncated_product_minus_one", mc.truncated},
                  {"tail_log_bound", mc.tail_log_bound},
                  {"method", mc.constant.method},
                  {"published_estimate", kPublished},
                  {"relation_to_published_estimate", relation}};
  return o;
}

Outcome cmd_chain(const RunConfig& cfg) {
  const double sigma0 = cfg.sigma0.value_or(0.75);
  const double X = cfg.X.value_or(4.0);
  u64 bound = 1;
  for (u64 p : primes_below(X)) bound *= p;
  if (cfg.support_bound) bound = *cfg.support_bound;
  constexpr double kTol = 1e-8;
  const auto steps = euler_chain_verify(sigma0, X, bound, kTol);
  json arr = json::array();
  bool ok = true;
  for (const auto& s : steps) {
    arr.push_back(json{{"step", s.step},
                       {"lhs", s.lhs},
                       {"rhs", s.rhs},
                       {"diff", s.abs_diff},
                       {"tolerance", kTol},
                       {"truncation_residual", s.truncation_residual}});
    ok = ok && s.abs_diff <= kTol;
  }
  Outcome o;
  o.result = json{{"sigma0", sigma0}, {"X", X}, {"support_bound", bound}, {"steps", arr}, {"all_within_tolerance", ok}};
  return o;
}

json delta_json(const DeltaSolution& s) {
  return json::array({s.n1, s.n2, s.n3, s.m1, s.m2, s.m3, s.d0, s.d1, s.d2, s.e0, s.e1, s.e2, s.N});
}

Outcome cmd_delta(const RunConfig& cfg) {
  const double X = cfg.X.value_or(6.0);
  const auto r = delta_enumerate(cfg.bound, X);
  json ex = json::array();
  for (const auto& s : r.violation_examples) ex.push_back(delta_json(s));
  Outcome o;
  o.result = json{{"bound", r.bound},
                  {"X", r.X},
                  {"solutions", r.solutions},
                  {"structured", r.structured},
                  {"forward_violations", r.forward_violations},
                  {"reverse_violations", r.reverse_violations},
                  {"control_solutions_m3_ne_n3", r.control_solutions},
                  {"tuple_layout", "n1,n2,n3,m1,m2,m3,d0,d1,d2,e0,e1,e2,N"},
                  {"violation_examples", ex}};
  return o;
}

Outcome cmd_mollifier(const RunConfig& cfg) {
  const auto src = make_source(*cfg.source);
  const auto params = params_from(cfg);
  const auto poly = build_mollifier(src, params, cfg.afe.term_budget);
  const auto census = mollifier_census(poly);
  Outcome o;
  o.result = json{{"params", params_json(params)},
                  {"count", census.count},
                  {"max_index", census.max_index},
                  {"l1_mass", census.l1},
                  {"l2_mass", census.l2}};
  if (poly.size() <= 10000) {
    json terms = json::array();
    for (const auto& [n, c] : poly.terms()) terms.push_back(json::array({n, c.real(), c.imag()}));
    o.result["terms"] = terms;
  }
  o.csv = "# " + poly.description() + "\n";
  for (const auto& [n, c] : poly.terms()) o.csv += std::to_string(n) + "\t" + fmt17(c.real()) + "\t" + fmt17(c.imag()) + "\n";
  return o;
}

Outcome cmd_afe(const RunConfig& cfg) {
  const auto src = make_source(*cfg.source);
  const auto arch = make_archimedean(cfg.v1, cfg.v2);
  const cplx s(cfg.sigma.value_or(0.6), cfg.t);
  const cplx value = truncated_l(src, arch, s, cfg.afe);
  const cplx dual_value = truncated_l(src, arch, 1.0 - s, cfg.afe, true);
  const cplx root = std::exp(log_gamma_factor(arch, 1.0 - s, true) - log_gamma_factor(arch, s));
  const double fe = std::abs(value - root * dual_value) / std::abs(value);
  Outcome o;
  o.result = json{{"s", complex_json(s)},
                  {"value", complex_json(value)},
                  {"truncation", truncation_length(arch, s, cfg.afe)},
                  {"dual_truncation", truncation_length(arch, 1.0 - s, cfg.afe, true)},
                  {"conductor_q", conductor(arch, s).q},
                  {"v_weight_n1", complex_json(v_weight(arch, s, 1, cfg.afe))},
                  {"functional_equation_residual", fe}};
  return o;
}

json report_json(const ExperimentReport& r) {
  json j{{"params", params_json(r.params)},
         {"sigma", r.sigma},
         {"integral", complex_json(r.integral)},
         {"prediction", r.prediction},
         {"node_count", r.node_count},
         {"panels", r.panels},
         {"max_residual", r.max_residual},
         {"truncation", r.truncation},
         {"mollifier_terms", r.mollifier_terms},
         {"wall_notes", r.wall_notes}};
  if (r.oracle_value) j["oracle_value"] = *r.oracle_value;
  if (r.largest_off_diagonal)
    j["largest_off_diagonal"] = json{{"n", r.largest_off_diagonal->n},
                                     {"m", r.largest_off_diagonal->m},
                                     {"magnitude", r.largest_off_diagonal->magnitude}};
  return j;
}

MomentOptions moment_options(const RunConfig& cfg, const SatakeSource& src) {
  MomentOptions m;
  m.quad.rel_tol = cfg.quad_tol;
  m.term_budget = cfg.afe.term_budget;
  if (cfg.l_terms) {
    DirichletPolynomial p;
    for (u64 n = 1; n <= *cfg.l_terms; ++n) p.add(n, coefficient(src, 1, n));
    m.l_polynomial = p;
  }
  return m;
}

Outcome cmd_moment(const RunConfig& cfg, bool second) {
  const auto src = make_source(*cfg.source);
  const auto arch = make_archimedean(cfg.v1, cfg.v2);
  const auto params = params_from(cfg);
  const auto opts = moment_options(cfg, src);
  const auto r = second ? mollified_second_moment(src, arch, params, cfg.afe, opts)
                        : mollified_first_moment(src, arch, params, cfg.afe, opts);
  Outcome o;
  o.result = report_json(r);
  o.csv = "t,integrand\n";
  for (const auto& [t, v] : r.trace) o.csv += fmt17(t) + "," + fmt17(v) + "\n";
  if (!second) o.csv = kv_csv(o.result);
  return o;
}

Outcome cmd_zeros(const RunConfig& cfg) {
  const auto src = make_source(*cfg.source);
  const auto arch = make_archimedean(cfg.v1, cfg.v2);
  const auto r = zero_count(src, arch, cfg.sigma.value_or(0.6), cfg.T1, cfg.T2, cfg.afe);
  Outcome o;
  o.result = json{{"sigma", r.sigma},
                  {"T1", r.T1},
                  {"T2", r.T2},
                  {"count", r.count},
                  {"winding_residual", r.winding_residual},
                  {"evaluations", r.evaluations},
                  {"perturbations", r.perturbations}};
  return o;
}

Outcome cmd_littlewood(const RunConfig& cfg) {
  const auto src = make_source(*cfg.source);
  const auto arch = make_archimedean(cfg.v1, cfg.v2);
  const double sigma = cfg.sigma.value_or(0.6);
  const auto params = params_from(cfg, sigma);
  const auto r = littlewood_check(src, arch, params, sigma, cfg.afe, moment_options(cfg, src));
  json counts = json::array();
  for (const auto& [s, c] : r.counts) counts.push_back(json::array({s, c}));
  Outcome o;
  o.result = json{{"sigma", r.sigma},
                  {"T", r.T},
                  {"lhs", r.lhs},
                  {"rhs", r.rhs},
                  {"C", r.C},
                  {"slack", r.slack},
                  {"satisfied", r.satisfied},
                  {"second_moment", r.moment},
                  {"band_counts", counts},
                  {"density_exponent_r", density_exponent_r(r.T, r.sigma, params.alpha)},
                  {"density_exponent_s", density_exponent_s(r.T, r.sigma, params.alpha, params.k)}};
  return o;
}

Outcome cmd_selftest() {
  json checks = json::array();
  bool all = true;
  auto record = [&](const std::string& name, bool ok, const std::string& detail) {
    checks.push_back(json{{"check", name}, {"passed", ok}, {"detail", detail}});
    all = all && ok;
  };
  const auto primes = sieve_primes(1'000'000);
  record("prime count below 10^6", primes.size() == 78498, std::to_string(primes.size()));
  bool fact_ok = true;
  for (u64 n = 1; n <= 100000 && fact_ok; ++n) {
    u64 prod = 1;
    for (const auto& [p, e] : factorize(n).factors)
      for (int i = 0; i < e; ++i) prod *= p;
    fact_ok = prod == n;
  }
  record("factorization products for n <= 10^5", fact_ok, "");
  bool mob_ok = true;
  for (u64 a = 1; a <= 300 && mob_ok; ++a)
    for (u64 b = 1; b <= 300 && mob_ok; ++b)
      if (gcd(a, b) == 1) mob_ok = mobius(a * b) == mobius(a) * mobius(b);
  record("mobius multiplicative on coprime pairs up to 300", mob_ok, "");
  bool d3_ok = true;
  for (u64 n = 1; n <= 2000 && d3_ok; ++n) {
    u64 total = 0;
    for (u64 d = 1; d <= n; ++d)
      if (n % d == 0) {
        u64 dd = 0;
        for (u64 e = 1; e <= d; ++e) dd += d % e == 0;
        total += dd;
      }
    d3_ok = total == d3(n);
  }
  record("d3 equals the divisor-count convolution for n <= 2000", d3_ok, "");
  Outcome o;
  o.result = json{{"checks", checks}, {"all_passed", all}};
  o.status = all ? 0 : 1;
  return o;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw domain_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw domain_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& log) {
  set_worker_count(cfg.threads);
  Outcome o;
  switch (cfg.command) {
    case Command::constants: o = cmd_constants(cfg); break;
    case Command::chain_verify: o = cmd_chain(cfg); break;
    case Command::delta_enum: o = cmd_delta(cfg); break;
    case Command::mollifier: o = cmd_mollifier(cfg); break;
    case Command::afe_check: o = cmd_afe(cfg); break;
    case Command::first_moment: o = cmd_moment(cfg, false); break;
    case Command::second_moment: o = cmd_moment(cfg, true); break;
    case Command::zeros: o = cmd_zeros(cfg); break;
    case Command::littlewood: o = cmd_littlewood(cfg); break;
    case Command::arith_selftest: o = cmd_selftest(); break;
  }

  const std::string ext = cfg.format == Format::csv ? "csv" : "json";
  std::filesystem::path path = cfg.output;
  if (path.empty()) {
    const char* dir = std::getenv("GL3MOLL_OUTPUT_DIR");
    path = std::filesystem::path(dir && *dir ? dir : ".") / (std::string(to_string(cfg.command)) + "." + ext);
  }

  std::string content;
  if (cfg.format == Format::json) {
    json report{{"command", to_string(cfg.command)}, {"config", config_json(cfg)}, {"result", o.result}};
    report["determinism_hash"] = determinism_hash(report);
    report["generated_at"] = utc_timestamp();
    content = serialize(report) + "\n";
  } else {
    content = o.csv.empty() ? kv_csv(o.result) : o.csv;
  }
  write_atomically(path, content);
  log << "wrote " << path.string() << "\n";
  return o.status;
}

int main_entry(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const bool help = std::any_of(args.begin(), args.end(), [](const std::string& a) { return a == "--help" || a == "-h"; });
  if (args.empty() || help) {
    std::cout << "usage: gl3moll <command> [--flag value ...] [--config file.json]\ncommands:";
    for (const auto& [name, cmd] : kCommands) std::cout << " " << name;
    std::cout << "\nflags:";
    for (const auto& f : kFields) std::cout << " --" << f;
    std::cout << "\nconfig file keys use the flag names with '-' replaced by '_'\n";
    return args.empty() ? 64 : 0;
  }
  try {
    const RunConfig cfg = parse_config(args);
    return run(cfg, std::cerr);
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 64;
  } catch (const accuracy_error& e) {
    std::cerr << "accuracy error: " << e.what() << " (residual " << e.residual() << ")\n";
    return 2;
  } catch (const domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const geometry_error& e) {
    std::cerr << "geometry error: " << e.what() << "\n";
    return 3;
  } catch (const resource_error& e) {
    std::cerr << "resource error: " << e.what() << " (partial count " << e.partial_count() << ")\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace gl3::cli
