#include "arblobo/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "arblobo/errors.hpp"

namespace arblobo {
namespace {

using nlohmann::json;

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

// First line mentioning "key"; 0 when not found.
std::size_t line_of_key(std::string_view text, std::string_view key) {
  const std::string quoted = "\"" + std::string(key) + "\"";
  const auto pos = text.find(quoted);
  return pos == std::string_view::npos ? 0 : line_of_offset(text, pos);
}

[[noreturn]] void fail(std::string_view source, std::string_view text, std::string_view key,
                       const std::string& message) {
  std::ostringstream out;
  out << source;
  if (const std::size_t line = line_of_key(text, key)) out << ":" << line;
  out << ": " << message;
  throw ConfigError(out.str());
}

std::size_t get_count(const json& value, std::string_view key, std::string_view source, std::string_view text) {
  if (!value.is_number_unsigned()) fail(source, text, key, "'" + std::string(key) + "' must be a nonnegative integer");
  return value.get<std::size_t>();
}

double get_number(const json& value, std::string_view key, std::string_view source, std::string_view text) {
  if (!value.is_number()) fail(source, text, key, "'" + std::string(key) + "' must be a number");
  return value.get<double>();
}

std::string get_string(const json& value, std::string_view key, std::string_view source, std::string_view text) {
  if (!value.is_string()) fail(source, text, key, "'" + std::string(key) + "' must be a string");
  return value.get<std::string>();
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::ostringstream out;
    out << source << ":" << line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1) << ": invalid JSON: " << e.what();
    throw ConfigError(out.str());
  }
  if (!doc.is_object()) throw ConfigError(std::string(source) + ":1: config must be a JSON object");
  if (!doc.contains("experiment")) throw ConfigError(std::string(source) + ": missing required key 'experiment'");

  ExperimentConfig config;
  try {
    config = ExperimentConfig::defaults(parse_experiment_id(get_string(doc["experiment"], "experiment", source, text)));
  } catch (const ConfigError& e) {
    fail(source, text, "experiment", e.what());
  }

  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "experiment") {
        continue;
      } else if (key == "replications") {
        config.replications = get_count(value, key, source, text);
      } else if (key == "samples") {
        config.samples = get_count(value, key, source, text);
      } else if (key == "seed") {
        if (!value.is_number_unsigned()) fail(source, text, key, "'seed' must be a nonnegative integer");
        config.seed = value.get<std::uint64_t>();
      } else if (key == "h_rules") {
        if (!value.is_array()) fail(source, text, key, "'h_rules' must be an array of strings");
        config.h_rules.clear();
        for (const auto& item : value) config.h_rules.push_back(HRule::parse(get_string(item, key, source, text)));
      } else if (key == "grid") {
        if (!value.is_array()) fail(source, text, key, "'grid' must be an array of [d, n] pairs");
        config.grid.clear();
        for (const auto& item : value) {
          if (!item.is_array() || item.size() != 2) fail(source, text, key, "'grid' entries must be [d, n] pairs");
          config.grid.push_back({get_count(item[0], key, source, text), get_count(item[1], key, source, text)});
        }
      } else if (key == "g") {
        config.g = get_number(value, key, source, text);
      } else if (key == "y_mechanism") {
        config.y_mechanism = parse_y_mechanism(get_string(value, key, source, text));
      } else if (key == "chains") {
        config.chains = get_count(value, key, source, text);
      } else if (key == "horizon") {
        config.horizon = get_count(value, key, source, text);
      } else if (key == "threads") {
        config.threads = get_count(value, key, source, text);
      } else if (key == "output") {
        config.output = get_string(value, key, source, text);
      } else {
        fail(source, text, key, "unknown key '" + key + "'");
      }
    } catch (const ConfigError& e) {
      const std::string what = e.what();
      if (what.rfind(std::string(source), 0) == 0) throw;
      fail(source, text, key, what);
    }
  }

  try {
    config.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

std::string config_to_json(const ExperimentConfig& config) {
  json doc = json::object();
  doc["experiment"] = std::string(to_string(config.experiment));
  doc["replications"] = config.replications;
  doc["samples"] = config.samples;
  doc["seed"] = config.seed;
  json rules = json::array();
  for (const auto& r : config.h_rules) rules.push_back(r.name());
  doc["h_rules"] = rules;
  json grid = json::array();
  for (const auto& gp : config.grid) grid.push_back({gp.d, gp.n});
  doc["grid"] = grid;
  doc["g"] = config.g;
  doc["y_mechanism"] = std::string(to_string(config.y_mechanism));
  doc["chains"] = config.chains;
  doc["horizon"] = config.horizon;
  doc["threads"] = config.threads;
  doc["output"] = config.output;
  return doc.dump(2) + "\n";
}

}  // namespace arblobo
