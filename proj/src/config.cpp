#include "mfbg/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mfbg {

double EtaSpec::at(std::int64_t n) const {
  if (!diminishing()) return eta0;
  return eta0 / std::pow(static_cast<double>(n + 1), kappa);
}

double GameConfig::beta_max() const {
  return *std::max_element(betas.begin(), betas.end());
}

bool GameConfig::active(int agent, int arm) const {
  if (!has_subsets()) return true;
  const auto& sub = arm_subsets[agent];
  return std::find(sub.begin(), sub.end(), arm) != sub.end();
}

GameConfig validate_config(const GameConfig& config) {
  if (config.num_agents < 1) throw std::invalid_argument("num_agents must be >= 1");
  if (config.num_arms < 2) throw std::invalid_argument("num_arms must be >= 2");
  if (config.horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (config.betas.empty() ||
      (config.betas.size() != 1 &&
       config.betas.size() != static_cast<std::size_t>(config.num_agents))) {
    throw std::invalid_argument("beta must hold one value or one per agent");
  }
  for (double b : config.betas) {
    if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("beta must be > 0");
  }
  if (!(config.eta.eta0 >= 0.0 && config.eta.eta0 <= 1.0)) {
    throw std::invalid_argument("eta out of range [0,1]");
  }
  if (config.eta.kappa < 0.0 || !std::isfinite(config.eta.kappa)) {
    throw std::invalid_argument("eta kappa must be >= 0");
  }
  if (!(config.stepsize_alpha > 0.5 && config.stepsize_alpha <= 1.0)) {
    throw std::invalid_argument("stepsize_alpha out of range (0.5, 1]");
  }

  const RewardSpec& rs = config.reward_spec;
  if (rs.kind == RewardKind::kCustom) {
    if (!rs.custom_fn) throw std::invalid_argument("custom reward function not set");
    if (rs.custom_lipschitz < 0.0) {
      throw std::invalid_argument("custom reward must declare a lipschitz constant");
    }
  } else {
    if (!(rs.theta >= 0.0) || !std::isfinite(rs.theta)) {
      throw std::invalid_argument("reward theta must be >= 0");
    }
    if (rs.kind == RewardKind::kLinear && rs.theta > 1.0) {
      throw std::invalid_argument("reward theta out of range [0,1] for linear rewards");
    }
    if (!rs.arm_thetas.empty()) {
      if (rs.arm_thetas.size() != static_cast<std::size_t>(config.num_arms)) {
        throw std::invalid_argument("arm_thetas length must equal num_arms");
      }
      for (double t : rs.arm_thetas) {
        if (!(t >= 0.8 * rs.theta - 1e-12 && t <= rs.theta + 1e-12)) {
          throw std::invalid_argument("arm_thetas entry outside [0.8*theta, theta]");
        }
      }
    }
  }

  if (config.has_subsets()) {
    if (config.arm_subsets.size() != static_cast<std::size_t>(config.num_agents)) {
      throw std::invalid_argument("arm_subsets length must equal num_agents");
    }
    for (const auto& sub : config.arm_subsets) {
      if (sub.empty()) throw std::invalid_argument("empty arm subset");
      std::set<int> seen;
      for (int arm : sub) {
        if (arm < 0 || arm >= config.num_arms) {
          throw std::invalid_argument("arm subset entry out of range");
        }
        if (!seen.insert(arm).second) {
          throw std::invalid_argument("duplicate arm in subset");
        }
      }
    }
  }
  if (config.snapshot_stride < 1) {
    throw std::invalid_argument("snapshot_stride must be >= 1");
  }
  return config;
}

GameConfig resolve_config(const GameConfig& config) {
  GameConfig out = validate_config(config);
  if (out.reward_spec.kind != RewardKind::kCustom && out.reward_spec.arm_thetas.empty()) {
    Rng rng(substream_seed(out.seed, kArmThetaStream));
    out.reward_spec.arm_thetas =
        sample_arm_thetas(out.reward_spec.theta, out.num_arms, rng);
  }
  return out;
}

Rng agent_rng(const GameConfig& config, int agent) {
  return Rng(substream_seed(config.seed, static_cast<std::uint64_t>(agent)));
}

StateProfile init_state_profile(const GameConfig& config, std::vector<Rng>& agent_rngs) {
  StateProfile s(config.num_agents, config.num_arms);
  for (int i = 0; i < config.num_agents; ++i) {
    for (int j = 0; j < config.num_arms; ++j) s.at(i, j) = agent_rngs[i].uniform01();
    if (config.has_subsets()) {
      for (int j = 0; j < config.num_arms; ++j) {
        if (!config.active(i, j)) s.at(i, j) = 0.0;
      }
    }
  }
  return s;
}

StateProfile init_state_profile(const GameConfig& config) {
  std::vector<Rng> rngs;
  rngs.reserve(config.num_agents);
  for (int i = 0; i < config.num_agents; ++i) rngs.push_back(agent_rng(config, i));
  return init_state_profile(config, rngs);
}

double inf_distance(const StateProfile& a, const StateProfile& b,
                    const GameConfig& config) {
  if (!a.same_shape(b)) throw std::invalid_argument("state profile shapes differ");
  double d = 0.0;
  for (int i = 0; i < a.num_agents; ++i) {
    for (int j = 0; j < a.num_arms; ++j) {
      if (!config.active(i, j)) continue;
      d = std::max(d, std::abs(a.at(i, j) - b.at(i, j)));
    }
  }
  return d;
}

namespace {

using nlohmann::json;

json eta_to_json(const EtaSpec& eta) {
  if (!eta.diminishing()) return json(eta.eta0);
  return json{{"eta0", eta.eta0}, {"kappa", eta.kappa}};
}

EtaSpec eta_from_json(const json& j) {
  EtaSpec eta;
  if (j.is_number()) {
    eta.eta0 = j.get<double>();
    eta.kappa = 0.0;
  } else if (j.is_object()) {
    eta.eta0 = j.at("eta0").get<double>();
    eta.kappa = j.value("kappa", 0.0);
  } else {
    throw std::invalid_argument("eta must be a number or {eta0, kappa}");
  }
  return eta;
}

}  // namespace

GameConfig parse_config_json(const std::string& text) {
  json j = json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");

  static const std::set<std::string> known = {
      "num_agents", "num_arms", "horizon",   "beta",
      "eta",        "stepsize_alpha", "reward_spec", "arm_subsets",
      "seed",       "snapshot_stride"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) {
      throw std::invalid_argument("unknown config key: " + it.key());
    }
  }

  GameConfig cfg;
  cfg.num_agents = j.at("num_agents").get<int>();
  cfg.num_arms = j.at("num_arms").get<int>();
  cfg.horizon = j.at("horizon").get<std::int64_t>();
  const json& beta = j.at("beta");
  if (beta.is_number()) {
    cfg.betas = {beta.get<double>()};
  } else {
    cfg.betas = beta.get<std::vector<double>>();
  }
  cfg.eta = eta_from_json(j.at("eta"));
  cfg.stepsize_alpha = j.at("stepsize_alpha").get<double>();

  const json& rs = j.at("reward_spec");
  cfg.reward_spec.kind = reward_kind_from_name(rs.at("kind").get<std::string>());
  if (cfg.reward_spec.kind == RewardKind::kCustom) {
    throw std::invalid_argument("custom rewards cannot be loaded from a file");
  }
  cfg.reward_spec.theta = rs.at("theta").get<double>();
  if (rs.contains("arm_thetas")) {
    cfg.reward_spec.arm_thetas = rs.at("arm_thetas").get<std::vector<double>>();
  }

  if (j.contains("arm_subsets")) {
    // File entries are 1-based arm ids.
    for (const auto& sub : j.at("arm_subsets")) {
      std::vector<int> arms;
      for (int arm : sub.get<std::vector<int>>()) arms.push_back(arm - 1);
      cfg.arm_subsets.push_back(std::move(arms));
    }
  }
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.snapshot_stride = j.value("snapshot_stride", 1);
  return validate_config(cfg);
}

GameConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_json(buf.str());
}

std::string config_to_json(const GameConfig& config) {
  if (config.reward_spec.kind == RewardKind::kCustom) {
    throw std::runtime_error("custom rewards cannot be serialized");
  }
  json j;
  j["num_agents"] = config.num_agents;
  j["num_arms"] = config.num_arms;
  j["horizon"] = config.horizon;
  if (config.betas.size() == 1) {
    j["beta"] = config.betas[0];
  } else {
    j["beta"] = config.betas;
  }
  j["eta"] = eta_to_json(config.eta);
  j["stepsize_alpha"] = config.stepsize_alpha;
  json rs;
  rs["kind"] = reward_kind_name(config.reward_spec.kind);
  rs["theta"] = config.reward_spec.theta;
  if (!config.reward_spec.arm_thetas.empty()) {
    rs["arm_thetas"] = config.reward_spec.arm_thetas;
  }
  j["reward_spec"] = rs;
  if (config.has_subsets()) {
    json subs = json::array();
    for (const auto& sub : config.arm_subsets) {
      std::vector<int> one_based;
      for (int arm : sub) one_based.push_back(arm + 1);
      subs.push_back(one_based);
    }
    j["arm_subsets"] = subs;
  }
  j["seed"] = config.seed;
  j["snapshot_stride"] = config.snapshot_stride;
  return j.dump(2);
}

void save_config_file(const GameConfig& config, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write config file: " + path);
  out << config_to_json(config) << '\n';
}

}  // namespace mfbg
