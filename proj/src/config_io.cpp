#include "sbmh/config_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sbmh/error.hpp"

namespace sbmh {

using nlohmann::json;

BlockModelConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("config must be a JSON object");

  static const std::set<std::string> known{"n", "m", "p", "q", "allow_loops", "seed"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw ValidationError("unknown config key '" + key + "'");
  }
  for (const char* key : {"n", "m", "p", "q"}) {
    if (!j.contains(key)) throw ValidationError(std::string("config is missing '") + key + "'");
  }

  BlockModelConfig c;
  auto integer = [&](const char* key) {
    if (!j[key].is_number_integer()) throw ValidationError(std::string("'") + key + "' must be an integer");
    return j[key].get<long long>();
  };
  c.n = static_cast<int>(integer("n"));
  c.m = static_cast<int>(integer("m"));
  if (!j["q"].is_number()) throw ValidationError("'q' must be a number");
  c.q = j["q"].get<double>();
  if (j["p"].is_number()) {
    // A scalar is shared by every block.
    c.p.assign(c.m > 0 ? c.m : 1, j["p"].get<double>());
  } else if (j["p"].is_array()) {
    for (const auto& x : j["p"]) {
      if (!x.is_number()) throw ValidationError("'p' must be an array of numbers");
      c.p.push_back(x.get<double>());
    }
  } else {
    throw ValidationError("'p' must be an array of numbers");
  }
  if (j.contains("allow_loops")) {
    if (!j["allow_loops"].is_boolean()) throw ValidationError("'allow_loops' must be true or false");
    c.allow_loops = j["allow_loops"].get<bool>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) {
      throw ValidationError("'seed' must be a non-negative integer");
    }
    c.seed = j["seed"].get<std::uint64_t>();
  }
  c.validate();
  return c;
}

BlockModelConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const BlockModelConfig& config) {
  json j;
  j["n"] = config.n;
  j["m"] = config.m;
  j["p"] = config.p;
  j["q"] = config.q;
  j["allow_loops"] = config.allow_loops;
  j["seed"] = config.seed;
  return j.dump(2) + "\n";
}

}  // namespace sbmh
