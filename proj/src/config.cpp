#include "lqu/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lqu/errors.hpp"

namespace lqu {

namespace {

using nlohmann::json;

template <class T>
void read_field(const json& object, const char* key, T& target) {
  if (!object.contains(key)) return;
  try {
    target = object.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("config field '") + key + "': " + e.what());
  }
}

void require_known_keys(const json& object, std::initializer_list<const char*> known, const char* where) {
  for (const auto& [key, value] : object.items()) {
    bool found = false;
    for (const char* k : known) found = found || key == k;
    if (!found) throw Error(ErrorKind::ParseError, std::string("unknown ") + where + " key '" + key + "'");
  }
}

void apply_ga(GAConfig& ga, const json& object) {
  if (!object.is_object()) throw Error(ErrorKind::ParseError, "config field 'ga' must be an object");
  require_known_keys(object,
                     {"population_size", "generations", "tournament_size", "crossover_rate", "mutation_sigma",
                      "stall_tolerance", "stall_generations", "seed", "polish_steps", "polish_starts"},
                     "ga");
  read_field(object, "population_size", ga.population_size);
  read_field(object, "generations", ga.generations);
  read_field(object, "tournament_size", ga.tournament_size);
  read_field(object, "crossover_rate", ga.crossover_rate);
  read_field(object, "mutation_sigma", ga.mutation_sigma);
  read_field(object, "stall_tolerance", ga.stall_tolerance);
  read_field(object, "stall_generations", ga.stall_generations);
  read_field(object, "seed", ga.seed);
  read_field(object, "polish_steps", ga.polish_steps);
  read_field(object, "polish_starts", ga.polish_starts);
}

}  // namespace

void apply_config_json(SweepConfig& config, std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::ParseError, "config must be a JSON object");
  require_known_keys(doc,
                     {"state", "parameter", "start", "stop", "steps", "mode", "spectrum", "rate_a", "rate_b", "ga",
                      "output", "svg", "format", "record_timing", "threads"},
                     "config");

  read_field(doc, "state", config.state);
  read_field(doc, "parameter", config.parameter);
  read_field(doc, "start", config.start);
  read_field(doc, "stop", config.stop);
  read_field(doc, "steps", config.steps);
  if (doc.contains("mode")) {
    std::string mode;
    read_field(doc, "mode", mode);
    config.mode = parse_sweep_mode(mode);
  }
  if (doc.contains("spectrum")) {
    const json& spectrum = doc.at("spectrum");
    if (spectrum.is_array()) {
      std::ostringstream joined;
      for (std::size_t i = 0; i < spectrum.size(); ++i) {
        if (!spectrum[i].is_number()) throw Error(ErrorKind::ParseError, "spectrum entries must be numbers");
        joined << (i ? "," : "") << spectrum[i].get<double>();
      }
      config.spectrum = joined.str();
    } else {
      read_field(doc, "spectrum", config.spectrum);
    }
  }
  read_field(doc, "rate_a", config.rate_a);
  read_field(doc, "rate_b", config.rate_b);
  if (doc.contains("ga")) apply_ga(config.ga, doc.at("ga"));
  if (doc.contains("output")) {
    std::string output;
    read_field(doc, "output", output);
    config.output = output;
  }
  read_field(doc, "svg", config.svg);
  if (doc.contains("format")) {
    std::string format;
    read_field(doc, "format", format);
    if (format == "csv") {
      config.svg = false;
    } else if (format == "csv+svg") {
      config.svg = true;
    } else {
      throw Error(ErrorKind::ParseError, "format must be 'csv' or 'csv+svg', got '" + format + "'");
    }
  }
  read_field(doc, "record_timing", config.record_timing);
  read_field(doc, "threads", config.threads);
}

void apply_config_file(SweepConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  apply_config_json(config, text.str());
}

}  // namespace lqu
