#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "emmemory/cli.hpp"
#include "emmemory/errors.hpp"

namespace emm::cli {

using nlohmann::json;

const char* to_string(Command c) {
  switch (c) {
    case Command::kGenerate: return "generate";
    case Command::kMemory: return "memory";
    case Command::kDetector: return "detector";
    case Command::kOrderCheck: return "order-check";
    case Command::kMassloss: return "massloss";
    case Command::kBnsEnergy: return "bns-energy";
    case Command::kValidate: return "validate";
  }
  return "?";
}

namespace {

const char* describe(Command c) {
  switch (c) {
    case Command::kGenerate: return "Write synthetic Xi, A_W and A_F trains from Gaussian pulses";
    case Command::kMemory: return "Solve for the shear jump and test-mass displacement map";
    case Command::kDetector: return "Integrate the Jacobi equation for a two-arm detector";
    case Command::kOrderCheck: return "Compare electromagnetic and Weyl tidal terms across radii";
    case Command::kMassloss: return "Mass-loss history and total radiated energy";
    case Command::kBnsEnergy: return "Radiated versus magnetic energy of a neutron star merger";
    case Command::kValidate: return "Run the invariant self-check suite";
  }
  return "";
}

enum class ValueType { kNumber, kInteger, kString, kStringList, kNumberList };

struct Key {
  const char* name;  // JSON key; the flag is the same with '_' -> '-'
  ValueType type;
  const char* help;
};

const std::vector<Key>& keys_for(Command c) {
  static const std::map<Command, std::vector<Key>> table = {
      {Command::kGenerate,
       {{"l_max", ValueType::kInteger, "grid band limit"},
        {"u0", ValueType::kNumber, "first retarded time (cm)"},
        {"du", ValueType::kNumber, "retarded-time step (cm)"},
        {"n_u", ValueType::kInteger, "number of retarded-time samples"},
        {"pulses", ValueType::kStringList, "Xi pulse 'amp,center,width,l,m,E|B' (repeatable)"},
        {"af_pulses", ValueType::kStringList, "A_F pulse 'amp,center,width,l,m,E|B' (repeatable)"}}},
      {Command::kMemory,
       {{"xi", ValueType::kString, "Xi train file"},
        {"af", ValueType::kString, "A_F train file (optional)"},
        {"d0", ValueType::kNumber, "arm length (cm)"},
        {"r", ValueType::kNumber, "source distance (cm)"}}},
      {Command::kDetector,
       {{"xi", ValueType::kString, "Xi train file"},
        {"af", ValueType::kString, "A_F train file (optional)"},
        {"theta", ValueType::kNumber, "source colatitude (rad)"},
        {"phi", ValueType::kNumber, "source longitude (rad)"},
        {"d0", ValueType::kNumber, "arm length (cm)"},
        {"r", ValueType::kNumber, "source distance (cm)"}}},
      {Command::kOrderCheck,
       {{"aw11", ValueType::kNumber, "A_W component 11 (1/cm)"},
        {"aw12", ValueType::kNumber, "A_W component 12 (1/cm)"},
        {"af1", ValueType::kNumber, "A_F component 1"},
        {"af2", ValueType::kNumber, "A_F component 2"},
        {"rho", ValueType::kNumber, "rho(F) at the reference radius"},
        {"sigma", ValueType::kNumber, "sigma(F) at the reference radius"},
        {"alpha", ValueType::kNumber, "alpha(F) at the reference radius"},
        {"reference_radius", ValueType::kNumber, "reference radius (cm)"},
        {"radii", ValueType::kNumberList, "evaluation radii (cm)"}}},
      {Command::kMassloss,
       {{"xi", ValueType::kString, "Xi train file"}, {"af", ValueType::kString, "A_F train file (optional)"}}},
      {Command::kBnsEnergy,
       {{"mass", ValueType::kNumber, "total mass (solar masses)"},
        {"fraction", ValueType::kNumber, "radiated mass fraction"},
        {"radius_km", ValueType::kNumber, "neutron star radius (km)"},
        {"b0", ValueType::kNumber, "initial surface field (G)"},
        {"dbdt", ValueType::kNumber, "field growth rate (G/ms)"},
        {"merge_ms", ValueType::kNumber, "merger time (ms)"},
        {"decay_exponent", ValueType::kNumber, "exterior field decay exponent"},
        {"kappa", ValueType::kString, "energy prefactor: quarter | paper | FLOAT"},
        {"sweep_b0", ValueType::kString, "CSV sweep over B0: 'min,max,count' (log spaced)"}}},
      {Command::kValidate, {{"l_max", ValueType::kInteger, "grid band limit"}}},
  };
  return table.at(c);
}

const std::vector<Key>& common_keys() {
  static const std::vector<Key> keys = {
      {"seed", ValueType::kInteger, "seed for randomised suites"},
      {"output_dir", ValueType::kString, "output directory (default $EMM_OUTPUT_DIR or .)"},
  };
  return keys;
}

json defaults_for(Command c) {
  switch (c) {
    case Command::kGenerate:
      return {{"l_max", 8}, {"u0", -12.0}, {"du", 0.05}, {"n_u", 481}, {"pulses", json::array()},
              {"af_pulses", json::array()}};
    case Command::kMemory: return {{"d0", 1e5}, {"r", 1e22}};
    case Command::kDetector: return {{"theta", 1.0}, {"phi", 0.5}, {"d0", 1e5}, {"r", 1e22}};
    case Command::kOrderCheck:
      return {{"aw11", 1.0}, {"aw12", 0.5}, {"af1", 1.0}, {"af2", 0.0}, {"rho", 1.0},
              {"sigma", 1.0}, {"alpha", 1.0}, {"reference_radius", 1.0},
              {"radii", json::array({1e20, 1e21, 1e22})}};
    case Command::kMassloss: return json::object();
    case Command::kBnsEnergy:
      return {{"mass", 2.0}, {"fraction", 0.01}, {"radius_km", 10.0}, {"b0", 0.0}, {"dbdt", 0.0},
              {"merge_ms", 1000.0}, {"decay_exponent", 2.5}, {"kappa", "quarter"}};
    case Command::kValidate: return {{"l_max", 8}};
  }
  return json::object();
}

std::string flag_name(const char* key) {
  std::string s = std::string("--") + key;
  std::replace(s.begin(), s.end(), '_', '-');
  return s;
}

double to_number(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw ConfigError(key + ": expected a number, got '" + text + "'");
  return v;
}

std::int64_t to_integer(const std::string& key, const std::string& text) {
  std::int64_t v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw ConfigError(key + ": expected an integer, got '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

json load_config_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open config file " + path);
  std::stringstream buf;
  buf << is.rdbuf();
  try {
    json j = json::parse(buf.str());
    if (!j.is_object()) throw ConfigError("config file " + path + " must hold a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in " + path + " at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

// Checks that every key is known and has the declared JSON type.
void check_types(const json& values, const std::vector<Key>& keys, const std::string& origin) {
  for (auto it = values.begin(); it != values.end(); ++it) {
    const auto found = std::find_if(keys.begin(), keys.end(), [&](const Key& k) { return it.key() == k.name; });
    if (found == keys.end()) throw ConfigError(origin + ": unknown key '" + it.key() + "'");
    const json& v = it.value();
    bool ok = true;
    switch (found->type) {
      case ValueType::kNumber: ok = v.is_number(); break;
      case ValueType::kInteger: ok = v.is_number_integer(); break;
      case ValueType::kString: ok = v.is_string() || (v.is_object() && it.key() == std::string("sweep_b0")); break;
      case ValueType::kStringList:
        ok = v.is_array() &&
             std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_string() || e.is_object(); });
        break;
      case ValueType::kNumberList:
        ok = v.is_array() && std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number(); });
        break;
    }
    if (!ok) throw ConfigError(origin + ": key '" + it.key() + "' has the wrong type");
  }
}

Parity parse_parity(const std::string& p) {
  if (p == "E" || p == "e" || p == "electric") return Parity::kElectric;
  if (p == "B" || p == "b" || p == "magnetic") return Parity::kMagnetic;
  throw ConfigError("pulse parity must be E or B, got '" + p + "'");
}

PulseSpec pulse_from_json(const json& j) {
  if (j.is_string()) return parse_pulse(j.get<std::string>());
  static const std::vector<std::string> allowed = {"amplitude", "center", "width", "l", "m", "parity"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw ConfigError("pulse: unknown key '" + it.key() + "'");
  try {
    PulseSpec s;
    s.amplitude = j.value("amplitude", 1.0);
    s.center = j.value("center", 0.0);
    s.width = j.value("width", 1.0);
    s.l = j.value("l", 2);
    s.m = j.value("m", 0);
    s.parity = parse_parity(j.value("parity", std::string("E")));
    return s;
  } catch (const json::type_error& e) {
    throw ConfigError(std::string("pulse: ") + e.what());
  }
}

void apply_resolved(RunConfig& cfg, const json& r) {
  auto num = [&](const char* k) { return r.at(k).get<double>(); };
  auto path = [&](const char* k) -> std::optional<std::filesystem::path> {
    if (!r.contains(k)) return std::nullopt;
    return std::filesystem::path(r.at(k).get<std::string>());
  };
  if (r.contains("seed")) {
    const auto seed = r.at("seed").get<std::int64_t>();
    if (seed < 0) throw ConfigError("seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(seed);
  }
  if (r.contains("output_dir")) cfg.output_dir = r.at("output_dir").get<std::string>();
  if (r.contains("l_max")) {
    const auto l = r.at("l_max").get<std::int64_t>();
    if (l < kMinLMax || l > kMaxLMax) throw ConfigError("l_max must lie in [2, 256]");
    cfg.l_max = static_cast<int>(l);
  }

  switch (cfg.command) {
    case Command::kGenerate: {
      cfg.u.u0 = num("u0");
      cfg.u.du = num("du");
      const auto n = r.at("n_u").get<std::int64_t>();
      if (n < 3 || n > 10'000'000) throw ConfigError("n_u must lie in [3, 1e7]");
      cfg.u.n = static_cast<int>(n);
      if (!(cfg.u.du > 0.0)) throw ConfigError("du must be positive");
      for (const auto& p : r.at("pulses")) cfg.xi_pulses.push_back(pulse_from_json(p));
      for (const auto& p : r.at("af_pulses")) cfg.af_pulses.push_back(pulse_from_json(p));
      if (cfg.xi_pulses.empty()) throw ConfigError("generate needs at least one --pulse");
      break;
    }
    case Command::kMemory:
    case Command::kDetector:
    case Command::kMassloss: {
      cfg.xi_path = path("xi");
      cfg.af_path = path("af");
      if (!cfg.xi_path) throw ConfigError(std::string(to_string(cfg.command)) + " requires --xi");
      if (cfg.command != Command::kMassloss) {
        cfg.detector.d0 = num("d0");
        cfg.detector.r = num("r");
        if (!(cfg.detector.d0 > 0.0) || !(cfg.detector.r > 0.0)) throw ConfigError("d0 and r must be positive");
      }
      if (cfg.command == Command::kDetector) {
        cfg.detector.theta = num("theta");
        cfg.detector.phi = num("phi");
        const double s = std::sin(cfg.detector.theta);
        if (!(s > 1e-12)) throw ConfigError("theta must avoid the poles");
      }
      break;
    }
    case Command::kOrderCheck: {
      auto& a = cfg.amplitudes;
      a.aw = {num("aw11"), num("aw12")};
      a.af = {num("af1"), num("af2")};
      a.rho = num("rho");
      a.sigma = num("sigma");
      a.alpha = num("alpha");
      a.reference_radius = num("reference_radius");
      cfg.radii = r.at("radii").get<std::vector<double>>();
      if (cfg.radii.size() < 2) throw ConfigError("order-check needs at least two radii");
      for (double x : cfg.radii)
        if (!(x > 0.0)) throw ConfigError("radii must be positive");
      break;
    }
    case Command::kBnsEnergy: {
      auto& s = cfg.scenario;
      s.total_mass = num("mass");
      s.radiated_fraction = num("fraction");
      s.ns_radius_km = num("radius_km");
      s.b0 = num("b0");
      s.dbdt = num("dbdt");
      s.merge_time_ms = num("merge_ms");
      s.decay_exponent = num("decay_exponent");
      try {
        s.kappa = bns::parse_kappa(r.at("kappa").get<std::string>());
        s.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      if (r.contains("sweep_b0")) {
        const json& sw = r.at("sweep_b0");
        B0Sweep sweep;
        if (sw.is_string()) {
          const auto parts = split(sw.get<std::string>(), ',');
          if (parts.size() != 3) throw ConfigError("sweep_b0 must be 'min,max,count'");
          sweep.min = to_number("sweep_b0", parts[0]);
          sweep.max = to_number("sweep_b0", parts[1]);
          sweep.count = static_cast<int>(to_integer("sweep_b0", parts[2]));
        } else {
          sweep.min = sw.at("min").get<double>();
          sweep.max = sw.at("max").get<double>();
          sweep.count = sw.at("count").get<int>();
        }
        if (!(sweep.min > 0.0) || !(sweep.max >= sweep.min) || sweep.count < 1 || sweep.count > 100000)
          throw ConfigError("sweep_b0 needs 0 < min <= max and 1 <= count <= 100000");
        cfg.b0_sweep = sweep;
      }
      break;
    }
    case Command::kValidate: break;
  }
}

}  // namespace

PulseSpec parse_pulse(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 6) throw ConfigError("pulse must be 'amplitude,center,width,l,m,E|B', got '" + text + "'");
  PulseSpec s;
  s.amplitude = to_number("pulse amplitude", parts[0]);
  s.center = to_number("pulse center", parts[1]);
  s.width = to_number("pulse width", parts[2]);
  s.l = static_cast<int>(to_integer("pulse l", parts[3]));
  s.m = static_cast<int>(to_integer("pulse m", parts[4]));
  s.parity = parse_parity(parts[5]);
  return s;
}

RunConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"Electromagnetic gravitational-wave memory toolkit", "emm"};
  app.require_subcommand(1);
  app.set_version_flag("--version", EMM_VERSION);

  const std::vector<Command> commands = {Command::kGenerate,  Command::kMemory,    Command::kDetector,
                                         Command::kOrderCheck, Command::kMassloss, Command::kBnsEnergy,
                                         Command::kValidate};
  std::map<Command, CLI::App*> subs;
  std::map<std::string, std::string> scalars;
  std::map<std::string, std::vector<std::string>> lists;
  std::string config_path;
  for (Command c : commands) {
    CLI::App* sub = app.add_subcommand(to_string(c), describe(c));
    subs[c] = sub;
    sub->add_option("--config", config_path, "JSON config file (flags take precedence)");
    std::vector<Key> keys = keys_for(c);
    keys.insert(keys.end(), common_keys().begin(), common_keys().end());
    for (const Key& k : keys) {
      const std::string id = std::string(to_string(c)) + "/" + k.name;
      if (k.type == ValueType::kStringList || k.type == ValueType::kNumberList) {
        std::string flag = flag_name(k.name);
        if (flag == "--pulses") flag = "--pulse";
        if (flag == "--af-pulses") flag = "--af-pulse";
        auto* opt = sub->add_option(flag, lists[id], k.help);
        if (k.type == ValueType::kNumberList) opt->delimiter(',');
      } else {
        sub->add_option(flag_name(k.name), scalars[id], k.help);
      }
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    for (Command c : commands)
      if (subs[c]->parsed()) throw HelpRequested(subs[c]->help());
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::CallForVersion&) {
    throw HelpRequested(std::string("emm ") + EMM_VERSION);
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  RunConfig cfg;
  for (Command c : commands)
    if (subs[c]->parsed()) cfg.command = c;
  CLI::App* sub = subs[cfg.command];

  std::vector<Key> keys = keys_for(cfg.command);
  keys.insert(keys.end(), common_keys().begin(), common_keys().end());

  // Flags given on the command line, typed.
  json flags = json::object();
  for (const Key& k : keys) {
    const std::string id = std::string(to_string(cfg.command)) + "/" + k.name;
    std::string flag = flag_name(k.name);
    if (flag == "--pulses") flag = "--pulse";
    if (flag == "--af-pulses") flag = "--af-pulse";
    if (sub->get_option(flag)->count() == 0) continue;
    switch (k.type) {
      case ValueType::kNumber: flags[k.name] = to_number(k.name, scalars[id]); break;
      case ValueType::kInteger: flags[k.name] = to_integer(k.name, scalars[id]); break;
      case ValueType::kString: flags[k.name] = scalars[id]; break;
      case ValueType::kStringList: flags[k.name] = lists[id]; break;
      case ValueType::kNumberList: {
        json arr = json::array();
        for (const auto& s : lists[id]) arr.push_back(to_number(k.name, s));
        flags[k.name] = arr;
        break;
      }
    }
  }

  json file = json::object();
  if (!config_path.empty()) {
    file = load_config_file(config_path);
    check_types(file, keys, config_path);
  }
  check_types(flags, keys, "command line");

  json resolved = defaults_for(cfg.command);
  if (!resolved.contains("output_dir")) {
    const char* env = std::getenv("EMM_OUTPUT_DIR");
    resolved["output_dir"] = env && *env ? env : ".";
  }
  if (!resolved.contains("seed")) resolved["seed"] = 0;
  resolved.update(file);
  resolved.update(flags);

  cfg.file_values = file;
  cfg.flag_values = flags;
  cfg.resolved = resolved;
  try {
    apply_resolved(cfg, resolved);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  return cfg;
}

}  // namespace emm::cli
