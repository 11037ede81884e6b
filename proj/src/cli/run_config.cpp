#include "run_config.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "epim/io.hpp"
#include "epim/rng.hpp"

namespace epim::cli {

namespace {

struct DefaultEntry {
  const char* key;
  const char* value;
  const char* help;
};

// Every configurable knob, its default, and a one-line description.
// --print-defaults emits this table as a valid config file.
constexpr std::array<DefaultEntry, 49> kDefaults{{
    {"out_dir", "out", "directory for CSV/JSON outputs (flag --out-dir)"},
    {"seed", "1", "master seed for all Monte Carlo work (flag --seed)"},
    {"alpha", "0.05", "confidence/test level (flag --alpha)"},
    {"grid_lo", "-4", "parameter grid lower endpoint"},
    {"grid_hi", "4", "parameter grid upper endpoint"},
    {"grid_nodes", "801", "parameter grid nodes (flag --grid-nodes)"},
    {"calibrator_kappa", "1", "beta-mixture calibrator shape; a default, not a fitted value"},
    {"sd_variance", "10", "mixture variance v of the Gaussian-mean e-process"},
    {"fig2_n", "5", "fig2: sample size behind each displayed mean"},
    {"fig2_zbars", "0.25,0.5,1", "fig2: sample means to plot curves for"},
    {"prior_ks", "0.1,0.2,0.4,0.8", "scale ladder for gaussian_surprise priors"},
    {"fig3_theta_star", "0.7", "fig3: hypothesis at which evidence growth is tracked"},
    {"fig3_n_max", "50", "fig3: path length"},
    {"fig3_reps", "500", "fig3: replications"},
    {"fig4_n", "25", "fig4: observations per dataset"},
    {"fig4_medians", "-0.5,0,0.5", "fig4: true medians of the heavy-tailed datasets"},
    {"fig4_epsilon", "0.1", "fig4: density floor near the median; eta = 2*epsilon"},
    {"fig4_theta_hat0", "0", "fig4: initial median predictor"},
    {"fig7_n", "5", "fig7: sample size"},
    {"fig7_zbar", "0.5", "fig7: sample mean"},
    {"fig8_ns", "5,25,100", "fig8: sample sizes for the shrinking risk curves"},
    {"fig8_zbar", "0.5", "fig8: shared sample mean"},
    {"action_lo", "-2", "action grid lower endpoint (decision figures/checks)"},
    {"action_hi", "2", "action grid upper endpoint"},
    {"action_nodes", "81", "action grid nodes"},
    {"appd_k", "1", "appD: scale K of the mean-bound and event-bound priors"},
    {"delta_nodes", "801", "marginal grid nodes on [-1,1] for the two-arm difference"},
    {"ware_survivals_cmt", "6", "Ware data: conventional-arm survivals"},
    {"ware_deaths_cmt", "4", "Ware data: conventional-arm deaths"},
    {"ware_survivals_ecmo", "9", "Ware data: ECMO-arm survivals"},
    {"ware_deaths_ecmo", "0", "Ware data: ECMO-arm deaths"},
    {"ware_beta", "0.18", "Ware: plug-in smoothing count"},
    {"ware_grid_nodes", "401", "Ware: nodes per axis of the [0,1]^2 grid"},
    {"monitor_threshold", "20", "monitor: STOP once min-over-H e >= this"},
    {"monitor_h_lo", "-0.1", "monitor: monitored hypothesis interval, lower end"},
    {"monitor_h_hi", "0.1", "monitor: monitored hypothesis interval, upper end"},
    {"monitor_regularizer", "gaussian_surprise", "monitor: vacuous | gaussian_surprise"},
    {"monitor_prior_k", "0.1", "monitor: K for the gaussian_surprise regularizer"},
    {"sim_reps", "10000", "simulate: replications for ville/expectation"},
    {"sim_n_max", "100", "simulate: simulated path length"},
    {"sim_rules", "fixed(5),fixed(20),threshold(20,100)",
     "simulate: stopping rules, comma separated"},
    {"sim_alphas", "0.01,0.05,0.1", "simulate: levels audited"},
    {"sim_prior", "normal", "simulate: prior over the truth, point_mass | normal"},
    {"sim_prior_center", "0", "simulate: prior center"},
    {"sim_k", "0.1", "simulate: K (gaussian_surprise scale and normal-prior variance)"},
    {"sim_regularizer", "gaussian_surprise", "simulate: vacuous | gaussian_surprise"},
    {"sim_check_membership", "1", "simulate: refuse priors failing the credal guard"},
    {"decision_reps", "1000", "simulate decision: replications"},
    {"decision_rule", "fixed(10)", "simulate decision: stopping rule"},
}};

constexpr std::array<DefaultEntry, 5> kDefaultsContraction{{
    {"decision_grid_nodes", "2001", "simulate decision: contour grid nodes"},
    {"contraction_n", "25", "simulate contraction: fixed sample size"},
    {"contraction_data_nodes", "161", "simulate contraction: dataset (mean) grid nodes"},
    {"contraction_hypotheses", "50", "simulate contraction: random interval count"},
    {"contraction_k", "0.2", "simulate contraction: prior scale K"},
}};

const char* find_default(const std::string& key) {
  for (const auto& d : kDefaults) {
    if (key == d.key) return d.value;
  }
  for (const auto& d : kDefaultsContraction) {
    if (key == d.key) return d.value;
  }
  return nullptr;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_num(const std::string& key, const std::string& v) {
  const char* c = v.c_str();
  char* end = nullptr;
  double x = std::strtod(c, &end);
  if (end == c || *end != '\0') {
    throw UsageError("config key " + key + " has non-numeric value '" + v + "'");
  }
  return x;
}

}  // namespace

RunConfig RunConfig::load(const std::string& path) {
  RunConfig cfg;
  for (const auto& d : kDefaults) cfg.kv_[d.key] = d.value;
  for (const auto& d : kDefaultsContraction) cfg.kv_[d.key] = d.value;
  if (path.empty()) return cfg;

  std::ifstream in(path);
  if (!in) throw DataError("cannot read config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value, got '" + t +
                       "'");
    }
    cfg.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return cfg;
}

void RunConfig::print_defaults(std::ostream& os) {
  os << "# every key, its default, and what it does; lines are key=value\n";
  for (const auto& d : kDefaults) {
    os << "# " << d.help << "\n" << d.key << "=" << d.value << "\n";
  }
  for (const auto& d : kDefaultsContraction) {
    os << "# " << d.help << "\n" << d.key << "=" << d.value << "\n";
  }
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (!find_default(key)) throw UsageError("unknown config key '" + key + "'");
  kv_[key] = value;
}

const std::string& RunConfig::str(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) throw UsageError("unknown config key '" + key + "'");
  return it->second;
}

double RunConfig::num(const std::string& key) const { return parse_num(key, str(key)); }

int RunConfig::inum(const std::string& key) const {
  double x = num(key);
  int i = static_cast<int>(x);
  if (static_cast<double>(i) != x) {
    throw UsageError("config key " + key + " must be an integer, got '" + str(key) + "'");
  }
  return i;
}

std::uint64_t RunConfig::seed_of(const std::string& key) const {
  const std::string& v = str(key);
  const char* c = v.c_str();
  char* end = nullptr;
  unsigned long long x = std::strtoull(c, &end, 10);
  if (end == c || *end != '\0') {
    throw UsageError("config key " + key + " must be a nonnegative integer, got '" + v + "'");
  }
  return static_cast<std::uint64_t>(x);
}

bool RunConfig::flag(const std::string& key) const {
  const std::string& v = str(key);
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw UsageError("config key " + key + " must be a boolean, got '" + v + "'");
}

std::vector<double> RunConfig::nums(const std::string& key) const {
  std::vector<double> out;
  for (const auto& piece : strs(key)) out.push_back(parse_num(key, piece));
  if (out.empty()) throw UsageError("config key " + key + " must list at least one value");
  return out;
}

std::vector<std::string> RunConfig::strs(const std::string& key) const {
  std::vector<std::string> out;
  std::stringstream ss(str(key));
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    piece = trim(piece);
    if (!piece.empty()) out.push_back(piece);
  }
  return out;
}

std::string RunConfig::canonical() const {
  std::ostringstream os;
  // out_dir is plumbing, not a parameter: the same run written to two
  // different directories must hash (and so reproduce) identically.
  for (const auto& [k, v] : kv_) {
    if (k == "out_dir") continue;
    os << k << "=" << v << "\n";
  }
  return os.str();
}

std::string RunConfig::hash_hex() const {
  std::string c = canonical();
  std::uint64_t h = fnv1a_hash(c.data(), c.size());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Grid1D config_grid(const RunConfig& cfg) {
  Grid1D g{cfg.num("grid_lo"), cfg.num("grid_hi"), cfg.inum("grid_nodes")};
  g.validate();
  return g;
}

std::string out_path(const RunConfig& cfg, const std::string& filename) {
  std::filesystem::path dir(cfg.str("out_dir"));
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory " + dir.string());
  return (dir / filename).string();
}

void write_manifest(const RunConfig& cfg, const std::string& command,
                    const nlohmann::ordered_json& parameters,
                    const std::vector<std::string>& files, const std::string& filename) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["files"] = files;
  j["parameters"] = parameters;
  j["seed"] = cfg.seed_of("seed");
  j["config_hash"] = cfg.hash_hex();
  j["notes"] = nlohmann::ordered_json::array(
      {"calibrator_kappa is a configuration default, not a fitted value",
       "rerunning with the same config and seed reproduces every output byte for byte"});
  write_text_file(out_path(cfg, filename), j.dump(2) + "\n");
}

}  // namespace epim::cli
