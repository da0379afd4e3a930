#include "swarmwatch/sim/config.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "swarmwatch/error.hpp"
#include "swarmwatch/random.hpp"

namespace swarmwatch::sim {

namespace {

// File name prefixed to diagnostics while a file is being parsed.
thread_local std::string g_origin;

struct ScopedOrigin {
  explicit ScopedOrigin(const std::string& origin) { g_origin = origin; }
  ~ScopedOrigin() { g_origin.clear(); }
};

std::string at_line(const YAML::Node& node) {
  const auto mark = node.Mark();
  return g_origin + (mark.line >= 0 ? "line " + std::to_string(mark.line + 1) : "config");
}

[[noreturn]] void config_error(const YAML::Node& node, const std::string& what) {
  throw Error(ErrorCode::kConfig, at_line(node) + ": " + what);
}

template <class T>
T scalar(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) config_error(node, "'" + key + "' must be a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    config_error(node, "'" + key + "' has an invalid value '" + node.Scalar() + "'");
  }
}

// Walks one mapping, dispatching known keys and rejecting the rest.
using Handlers = std::map<std::string, std::function<void(const YAML::Node&)>>;

void walk(const YAML::Node& node, const std::string& section, const Handlers& handlers) {
  if (!node.IsMap()) config_error(node, "'" + section + "' must be a mapping");
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    const auto it = handlers.find(key);
    if (it == handlers.end()) config_error(kv.first, "unknown key '" + key + "' in '" + section + "'");
    it->second(kv.second);
  }
}

template <class T>
std::function<void(const YAML::Node&)> into(T& field, const std::string& key) {
  return [&field, key](const YAML::Node& n) { field = scalar<T>(n, key); };
}

std::function<void(const YAML::Node&)> into_size(std::size_t& field, const std::string& key) {
  return [&field, key](const YAML::Node& n) {
    const auto v = scalar<long long>(n, key);
    if (v < 0) config_error(n, "'" + key + "' must be non-negative");
    field = static_cast<std::size_t>(v);
  };
}

std::function<void(const YAML::Node&)> into_point(Point2& field, const std::string& key) {
  return [&field, key](const YAML::Node& n) {
    if (!n.IsSequence() || n.size() != 2) config_error(n, "'" + key + "' must be [x, y]");
    field = {scalar<double>(n[0], key), scalar<double>(n[1], key)};
  };
}

void check(bool ok, const YAML::Node& root, const std::string& what) {
  if (!ok) config_error(root, what);
}

}  // namespace

namespace {

MissionConfig parse_config(const std::string& text, const std::string& origin) {
  const ScopedOrigin scope(origin);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw Error(ErrorCode::kConfig, g_origin + "line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  MissionConfig c;
  if (root.IsNull()) return c;

  auto& s = c.scene;
  auto& f = c.fleet;
  auto& d = c.detector;
  auto& sc = c.scout;
  auto& r = c.registration;
  auto& a = c.assignment;
  const Handlers top = {
      {"seed", [&](const YAML::Node& n) { c.seed = scalar<std::uint64_t>(n, "seed"); }},
      {"scene", [&](const YAML::Node& n) {
         walk(n, "scene", {{"whales", into_size(s.whales, "whales")},
                           {"extent", into(s.extent, "extent")},
                           {"min_box", into(s.min_box, "min_box")},
                           {"max_box", into(s.max_box, "max_box")},
                           {"min_gap", into(s.min_gap, "min_gap")},
                           {"margin", into(s.margin, "margin")}});
       }},
      {"fleet", [&](const YAML::Node& n) {
         walk(n, "fleet", {{"agents", into_size(f.agents, "agents")},
                           {"margin", into(f.margin, "margin")},
                           {"max_heading", into(f.max_heading, "max_heading")},
                           {"scale_min", into(f.scale_min, "scale_min")},
                           {"scale_max", into(f.scale_max, "scale_max")},
                           {"image_size", into(f.image_size, "image_size")}});
       }},
      {"detector", [&](const YAML::Node& n) {
         walk(n, "detector", {{"jitter", into(d.jitter, "jitter")},
                              {"shear", into(d.shear, "shear")},
                              {"false_positive_rate", into(d.false_positive_rate, "false_positive_rate")}});
       }},
      {"scout", [&](const YAML::Node& n) {
         walk(n, "scout", {{"start", into_point(sc.start, "start")},
                           {"spacing", into(sc.spacing, "spacing")},
                           {"max_turns", into_size(sc.max_turns, "max_turns")},
                           {"points_per_turn", into_size(sc.points_per_turn, "points_per_turn")},
                           {"footprint", into(sc.footprint, "footprint")},
                           {"buffer", into_size(sc.buffer, "buffer")},
                           {"threshold", into(sc.threshold, "threshold")},
                           {"s_det", into(sc.s_det, "s_det")}});
       }},
      {"registration", [&](const YAML::Node& n) {
         walk(n, "registration", {{"tol", into(r.tol, "tol")},
                                  {"max_iter", into_size(r.max_iter, "max_iter")},
                                  {"with_scale", into(r.with_scale, "with_scale")},
                                  {"rotation_starts", into_size(r.rotation_starts, "rotation_starts")},
                                  {"rotation_span", into(r.rotation_span, "rotation_span")}});
       }},
      {"assignment", [&](const YAML::Node& n) {
         walk(n, "assignment", {{"params", into(a.params_path, "params")},
                                {"cost_scale", into(a.cost_scale, "cost_scale")},
                                {"ghost_cost", into(a.ghost_cost, "ghost_cost")},
                                {"max_candidates", into_size(a.max_candidates, "max_candidates")}});
       }},
  };
  walk(root, "config", top);

  check(s.whales >= 1, root, "scene.whales must be >= 1");
  check(s.extent > 0 && s.min_box > 0 && s.max_box >= s.min_box, root, "scene sizes must be positive and ordered");
  check(f.agents >= 2, root, "fleet.agents must be >= 2");
  check(f.scale_min > 0 && f.scale_max >= f.scale_min, root, "fleet scale range is invalid");
  check(f.image_size > 0 && f.image_size <= 65535, root, "fleet.image_size must lie in (0, 65535]");
  check(d.jitter >= 0, root, "detector.jitter must be >= 0");
  check(d.false_positive_rate >= 0 && d.false_positive_rate <= 1, root,
        "detector.false_positive_rate must lie in [0, 1]");
  check(sc.spacing > 0 && sc.max_turns >= 1 && sc.points_per_turn >= 1, root, "scout spiral is invalid");
  check(sc.buffer >= 1, root, "scout.buffer must be >= 1");
  check(sc.threshold > 0 && sc.threshold <= 1, root, "scout.threshold must lie in (0, 1]");
  check(sc.s_det >= 0 && sc.s_det <= 1, root, "scout.s_det must lie in [0, 1]");
  check(r.tol >= 0 && r.max_iter >= 1 && r.rotation_starts >= 1 && r.rotation_span >= 0, root,
        "registration settings are invalid");
  check(a.cost_scale > 0 && a.ghost_cost > 0 && a.max_candidates >= 1, root, "assignment settings are invalid");
  return c;
}

}  // namespace

MissionConfig parse_mission_config(const std::string& text) { return parse_config(text, ""); }

MissionConfig load_mission_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  MissionConfig c = parse_config(text.str(), path + ": ");
  std::filesystem::path params(c.assignment.params_path);
  if (!params.empty() && params.is_relative()) {
    c.assignment.params_path = (std::filesystem::path(path).parent_path() / params).lexically_normal().string();
  }
  return c;
}

std::string canonical_config_json(const MissionConfig& c) {
  using nlohmann::json;
  json j;
  j["seed"] = c.seed;
  j["scene"] = {{"whales", c.scene.whales}, {"extent", c.scene.extent},
                {"min_box", c.scene.min_box}, {"max_box", c.scene.max_box},
                {"min_gap", c.scene.min_gap}, {"margin", c.scene.margin}};
  j["fleet"] = {{"agents", c.fleet.agents}, {"margin", c.fleet.margin},
                {"max_heading", c.fleet.max_heading}, {"scale_min", c.fleet.scale_min},
                {"scale_max", c.fleet.scale_max}, {"image_size", c.fleet.image_size}};
  j["detector"] = {{"jitter", c.detector.jitter}, {"shear", c.detector.shear},
                   {"false_positive_rate", c.detector.false_positive_rate}};
  j["scout"] = {{"start", {c.scout.start.x, c.scout.start.y}}, {"spacing", c.scout.spacing},
                {"max_turns", c.scout.max_turns}, {"points_per_turn", c.scout.points_per_turn},
                {"footprint", c.scout.footprint}, {"buffer", c.scout.buffer},
                {"threshold", c.scout.threshold}, {"s_det", c.scout.s_det}};
  j["registration"] = {{"tol", c.registration.tol}, {"max_iter", c.registration.max_iter},
                       {"with_scale", c.registration.with_scale},
                       {"rotation_starts", c.registration.rotation_starts},
                       {"rotation_span", c.registration.rotation_span}};
  j["assignment"] = {{"params", c.assignment.params_path}, {"cost_scale", c.assignment.cost_scale},
                     {"ghost_cost", c.assignment.ghost_cost},
                     {"max_candidates", c.assignment.max_candidates}};
  return j.dump();
}

std::uint64_t config_hash(const MissionConfig& config) {
  return fnv1a64(canonical_config_json(config));
}

}  // namespace swarmwatch::sim
