#include "icsim/scenario.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace icsim {

using nlohmann::json;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 over seed + stream
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

LaneIn parse_lane_in(const std::string& s, const std::string& field) {
  for (int i = 0; i < 4; ++i)
    if (s == to_string(static_cast<LaneIn>(i))) return static_cast<LaneIn>(i);
  throw ConfigError(field, "expected one of H1R..H4R, got '" + s + "'");
}

LaneOut parse_lane_out(const std::string& s, const std::string& field) {
  for (int i = 0; i < 4; ++i)
    if (s == to_string(static_cast<LaneOut>(i))) return static_cast<LaneOut>(i);
  throw ConfigError(field, "expected one of H1L..H4L, got '" + s + "'");
}

LossKind parse_kind(const std::string& s, const std::string& field) {
  if (s == "none") return LossKind::None;
  if (s == "burst") return LossKind::Burst;
  if (s == "geometric") return LossKind::Geometric;
  if (s == "correlated") return LossKind::Correlated;
  throw ConfigError(field, "unknown loss kind '" + s + "'");
}

double num(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field, "expected a number");
  return j.get<double>();
}

}  // namespace

void ScenarioConfig::validate() const {
  if (geometry.lane_width <= 0) throw ConfigError("geometry.lane_width", "must be > 0");
  if (geometry.subsection_width <= 0)
    throw ConfigError("geometry.subsection_width", "must be > 0");
  if (geometry.car_length <= 0) throw ConfigError("geometry.car_length", "must be > 0");
  if (protocol.epsilon <= 0 || protocol.epsilon >= 1)
    throw ConfigError("protocol.epsilon", "must be in (0,1)");
  if (protocol.slot_duration <= 0) throw ConfigError("protocol.slot_duration", "must be > 0");
  if (protocol.comm_range <= 0) throw ConfigError("protocol.comm_range", "must be > 0");
  if (protocol.a_min_brake >= 0) throw ConfigError("protocol.a_min_brake", "must be < 0");
  if (cars[0].uid == cars[1].uid) throw ConfigError("cars.uid", "uids must be distinct");
  if (n_slots <= 0) throw ConfigError("n_slots", "must be > 0");
  for (int i = 0; i < 2; ++i) {
    std::string base = "cars[" + std::to_string(i) + "]";
    const CarConfig& c = cars[i];
    if (!route_valid(c.route)) throw ConfigError(base + ".nlane", "U-turn not allowed");
    if (c.v0 <= 0) throw ConfigError(base + ".v0", "must be > 0");
    if (c.sigma_x <= 0) throw ConfigError(base + ".sigma_x", "must be > 0");
    double ca = capture_area_start(geometry, c.v0, protocol.a_min_brake);
    if (c.x0 >= ca)
      throw ConfigError(base + ".x0", "car starts inside the capture area (x0 >= " +
                                          std::to_string(ca) + ")");
    std::string lbase = "loss[" + std::to_string(i) + "]";
    const LossConfig& l = loss[i];
    switch (l.kind) {
      case LossKind::Burst:
        if (l.burst_length < 0) throw ConfigError(lbase + ".length", "must be >= 0");
        break;
      case LossKind::Geometric:
      case LossKind::Correlated:
        if (!l.env && !(l.p_pdr > 0 && l.p_pdr <= 1))
          throw ConfigError(lbase + ".p_pdr", "must be in (0,1]");
        if (l.env && *l.env != "open" && *l.env != "harsh")
          throw ConfigError(lbase + ".env", "expected 'open' or 'harsh'");
        if (l.kind == LossKind::Correlated && !(l.xi >= 0 && l.xi < 1))
          throw ConfigError(lbase + ".xi", "must be in [0,1); xi = 1 gives an infinite burst");
        break;
      case LossKind::None:
        break;
    }
  }
}

LossProcess ScenarioConfig::make_loss_process(int receiver) const {
  const LossConfig& l = loss[receiver];
  std::uint64_t s = mix_seed(seed, static_cast<std::uint64_t>(receiver));
  switch (l.kind) {
    case LossKind::None:
      return LossProcess::none();
    case LossKind::Burst:
      return l.burst_start ? LossProcess::burst(*l.burst_start, l.burst_length)
                           : LossProcess::burst_auto(l.burst_length, l.burst_offset);
    case LossKind::Geometric:
      if (l.env)
        return LossProcess::geometric_pdr(
            *l.env == "open" ? PdrModel::open_field() : PdrModel::harsh(), s);
      return LossProcess::geometric(l.p_pdr, s);
    case LossKind::Correlated:
      if (l.env)
        return LossProcess::correlated_pdr(
            *l.env == "open" ? PdrModel::open_field() : PdrModel::harsh(), l.xi, s);
      return LossProcess::correlated(l.p_pdr, l.xi, s);
  }
  return LossProcess::none();
}

namespace {
ScenarioConfig parse_scenario_fields(const json& j);
}

ScenarioConfig parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  try {
    return parse_scenario_fields(j);
  } catch (const ConfigError&) {
    throw;
  } catch (const json::exception& e) {
    throw ConfigError("<root>", std::string("malformed field: ") + e.what());
  }
}

namespace {

ScenarioConfig parse_scenario_fields(const json& j) {
  ScenarioConfig cfg;
  if (j.contains("geometry")) {
    const auto& g = j["geometry"];
    if (g.contains("x_s")) cfg.geometry.x_s = num(g["x_s"], "geometry.x_s");
    if (g.contains("lane_width"))
      cfg.geometry.lane_width = num(g["lane_width"], "geometry.lane_width");
    if (g.contains("subsection_width"))
      cfg.geometry.subsection_width = num(g["subsection_width"], "geometry.subsection_width");
    if (g.contains("car_length"))
      cfg.geometry.car_length = num(g["car_length"], "geometry.car_length");
  }
  if (j.contains("protocol")) {
    const auto& p = j["protocol"];
    if (p.contains("epsilon")) cfg.protocol.epsilon = num(p["epsilon"], "protocol.epsilon");
    if (p.contains("slot_duration"))
      cfg.protocol.slot_duration = num(p["slot_duration"], "protocol.slot_duration");
    if (p.contains("comm_range"))
      cfg.protocol.comm_range = num(p["comm_range"], "protocol.comm_range");
    if (p.contains("l_sigma")) cfg.protocol.l_sigma = num(p["l_sigma"], "protocol.l_sigma");
    if (p.contains("a_min_brake"))
      cfg.protocol.a_min_brake = num(p["a_min_brake"], "protocol.a_min_brake");
    if (p.contains("safety_gap"))
      cfg.protocol.safety_gap = num(p["safety_gap"], "protocol.safety_gap");
    if (p.contains("tau_th") && !p["tau_th"].is_null())
      cfg.protocol.tau_th = num(p["tau_th"], "protocol.tau_th");
    if (p.contains("d_col") && !p["d_col"].is_null())
      cfg.protocol.d_col = num(p["d_col"], "protocol.d_col");
  }
  if (!j.contains("cars") || !j["cars"].is_array() || j["cars"].size() != 2)
    throw ConfigError("cars", "exactly two cars required");
  for (int i = 0; i < 2; ++i) {
    const auto& c = j["cars"][i];
    std::string base = "cars[" + std::to_string(i) + "]";
    CarConfig& cc = cfg.cars[i];
    if (!c.contains("uid")) throw ConfigError(base + ".uid", "required");
    cc.uid = c["uid"].get<std::uint32_t>();
    if (!c.contains("clane")) throw ConfigError(base + ".clane", "required");
    cc.route.clane = parse_lane_in(c["clane"].get<std::string>(), base + ".clane");
    if (!c.contains("nlane")) throw ConfigError(base + ".nlane", "required");
    cc.route.nlane = parse_lane_out(c["nlane"].get<std::string>(), base + ".nlane");
    if (c.contains("x0")) cc.x0 = num(c["x0"], base + ".x0");
    if (c.contains("v0")) cc.v0 = num(c["v0"], base + ".v0");
    if (c.contains("a0")) cc.a0 = num(c["a0"], base + ".a0");
    cc.desired_accel = cc.a0;
    if (c.contains("sigma_x")) cc.sigma_x = num(c["sigma_x"], base + ".sigma_x");
    if (c.contains("desired_accel"))
      cc.desired_accel = num(c["desired_accel"], base + ".desired_accel");
    if (c.contains("exit_accel")) cc.exit_accel = num(c["exit_accel"], base + ".exit_accel");
    if (c.contains("resume_accel"))
      cc.resume_accel = num(c["resume_accel"], base + ".resume_accel");
  }
  if (j.contains("loss")) {
    if (!j["loss"].is_array() || j["loss"].size() > 2)
      throw ConfigError("loss", "expected an array of at most two receiver entries");
    for (const auto& le : j["loss"]) {
      if (!le.contains("receiver")) throw ConfigError("loss.receiver", "required");
      std::uint32_t uid = le["receiver"].get<std::uint32_t>();
      int idx = uid == cfg.cars[0].uid ? 0 : uid == cfg.cars[1].uid ? 1 : -1;
      if (idx < 0) throw ConfigError("loss.receiver", "no car with uid " + std::to_string(uid));
      std::string base = "loss[" + std::to_string(idx) + "]";
      LossConfig& lc = cfg.loss[idx];
      if (!le.contains("kind")) throw ConfigError(base + ".kind", "required");
      lc.kind = parse_kind(le["kind"].get<std::string>(), base + ".kind");
      if (le.contains("length")) lc.burst_length = le["length"].get<int>();
      if (le.contains("start") && !le["start"].is_string())
        lc.burst_start = le["start"].get<int>();
      if (le.contains("offset")) lc.burst_offset = le["offset"].get<int>();
      if (le.contains("p_pdr")) lc.p_pdr = num(le["p_pdr"], base + ".p_pdr");
      if (le.contains("xi")) lc.xi = num(le["xi"], base + ".xi");
      if (le.contains("env")) lc.env = le["env"].get<std::string>();
    }
  }
  if (j.contains("n_slots")) cfg.n_slots = j["n_slots"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  cfg.validate();
  return cfg;
}

}  // namespace

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

namespace {
json scenario_to_json(const ScenarioConfig& cfg);
}

std::string serialize_scenario(const ScenarioConfig& cfg) {
  return scenario_to_json(cfg).dump(2) + "\n";
}

std::string serialize_scenario_compact(const ScenarioConfig& cfg) {
  return scenario_to_json(cfg).dump();
}

namespace {

json scenario_to_json(const ScenarioConfig& cfg) {
  json j;
  j["geometry"] = {{"x_s", cfg.geometry.x_s},
                   {"lane_width", cfg.geometry.lane_width},
                   {"subsection_width", cfg.geometry.subsection_width},
                   {"car_length", cfg.geometry.car_length}};
  j["protocol"] = {{"epsilon", cfg.protocol.epsilon},
                   {"slot_duration", cfg.protocol.slot_duration},
                   {"comm_range", cfg.protocol.comm_range},
                   {"l_sigma", cfg.protocol.l_sigma},
                   {"a_min_brake", cfg.protocol.a_min_brake},
                   {"safety_gap", cfg.protocol.safety_gap}};
  if (cfg.protocol.tau_th) j["protocol"]["tau_th"] = *cfg.protocol.tau_th;
  else j["protocol"]["tau_th"] = nullptr;
  if (cfg.protocol.d_col) j["protocol"]["d_col"] = *cfg.protocol.d_col;
  else j["protocol"]["d_col"] = nullptr;
  j["cars"] = json::array();
  for (const CarConfig& c : cfg.cars) {
    j["cars"].push_back({{"uid", c.uid},
                         {"clane", to_string(c.route.clane)},
                         {"nlane", to_string(c.route.nlane)},
                         {"x0", c.x0},
                         {"v0", c.v0},
                         {"a0", c.a0},
                         {"sigma_x", c.sigma_x},
                         {"desired_accel", c.desired_accel},
                         {"exit_accel", c.exit_accel},
                         {"resume_accel", c.resume_accel}});
  }
  j["loss"] = json::array();
  for (int i = 0; i < 2; ++i) {
    const LossConfig& l = cfg.loss[i];
    json le{{"receiver", cfg.cars[i].uid}, {"kind", to_string(l.kind)}};
    if (l.kind == LossKind::Burst) {
      le["length"] = l.burst_length;
      if (l.burst_start) le["start"] = *l.burst_start;
      else le["start"] = "auto";
      le["offset"] = l.burst_offset;
    } else if (l.kind != LossKind::None) {
      if (l.env) le["env"] = *l.env;
      else le["p_pdr"] = l.p_pdr;
      if (l.kind == LossKind::Correlated) le["xi"] = l.xi;
    }
    j["loss"].push_back(le);
  }
  j["n_slots"] = cfg.n_slots;
  j["seed"] = cfg.seed;
  return j;
}

}  // namespace

}  // namespace icsim
