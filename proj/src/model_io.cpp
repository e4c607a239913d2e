#include "maxrep/model_io.hpp"

#include <fstream>

#include "maxrep/errors.hpp"

namespace maxrep {

using nlohmann::json;

namespace {

template <class T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("model file: missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("model file: bad value for '") + key + "': " + e.what());
  }
}

template <class T>
std::optional<T> optional_key(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return required<T>(j, key);
}

void check_alphabet(const json& j, Symbol actual) {
  if (auto declared = optional_key<Symbol>(j, "alphabet_size"); declared && *declared != actual) {
    throw ConfigError("model file: alphabet_size " + std::to_string(*declared) +
                      " does not match parameters (" + std::to_string(actual) + ")");
  }
}

}  // namespace

ProcessModel model_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("model file: expected a JSON object");
  const ModelKind kind = model_kind_from_string(required<std::string>(j, "kind"));
  auto initial = optional_key<std::vector<double>>(j, "initial");
  const bool stationary = optional_key<bool>(j, "stationary").value_or(false);

  auto build = [&]() -> ProcessModel {
    switch (kind) {
      case ModelKind::iid: {
        auto m = ProcessModel::iid(required<std::vector<double>>(j, "probabilities"));
        check_alphabet(j, m.alphabet_size());
        return m;
      }
      case ModelKind::markov: {
        auto m = ProcessModel::markov(required<Matrix>(j, "transition"), initial, stationary);
        check_alphabet(j, m.alphabet_size());
        return m;
      }
      case ModelKind::hidden_markov: {
        auto transition = required<Matrix>(j, "transition");
        if (j.contains("emission_map")) {
          return ProcessModel::hidden_markov(std::move(transition),
                                             required<std::vector<Symbol>>(j, "emission_map"),
                                             required<Symbol>(j, "alphabet_size"), initial,
                                             stationary);
        }
        auto m = ProcessModel::hidden_markov(std::move(transition), required<Matrix>(j, "emission"),
                                             initial, stationary);
        check_alphabet(j, m.alphabet_size());
        return m;
      }
      case ModelKind::uniformly_dithered: {
        if (!j.contains("base")) throw ConfigError("model file: missing key 'base'");
        auto m = ProcessModel::uniformly_dithered(model_from_json(j.at("base")),
                                                  required<std::vector<double>>(j, "dither"),
                                                  required<double>(j, "dither_bound"));
        check_alphabet(j, m.alphabet_size());
        return m;
      }
      case ModelKind::periodic_random_phase:
        return ProcessModel::periodic(required<std::vector<Symbol>>(j, "period"),
                                      required<Symbol>(j, "alphabet_size"));
      case ModelKind::empirical_permutation:
        return ProcessModel::empirical_permutation(required<std::vector<Symbol>>(j, "source"),
                                                   required<Symbol>(j, "alphabet_size"));
    }
    throw ConfigError("model file: unhandled kind");
  };
  ProcessModel model = build();
  model.name = optional_key<std::string>(j, "name").value_or("");
  model.seed = optional_key<std::uint64_t>(j, "seed");
  return model;
}

json model_to_json(const ProcessModel& model) {
  json j;
  j["kind"] = to_string(model.kind());
  j["alphabet_size"] = model.alphabet_size();
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, IidParams>) {
          j["probabilities"] = p.probabilities;
        } else if constexpr (std::is_same_v<P, MarkovParams>) {
          j["transition"] = p.transition;
          if (p.initial) j["initial"] = *p.initial;
          j["stationary"] = p.stationary;
        } else if constexpr (std::is_same_v<P, HiddenMarkovParams>) {
          j["transition"] = p.transition;
          if (p.emission) j["emission"] = *p.emission;
          if (p.emission_map) j["emission_map"] = *p.emission_map;
          if (p.initial) j["initial"] = *p.initial;
          j["stationary"] = p.stationary;
        } else if constexpr (std::is_same_v<P, DitheredParams>) {
          j["base"] = model_to_json(*p.base);
          j["dither"] = p.dither;
          j["dither_bound"] = p.dither_bound;
        } else if constexpr (std::is_same_v<P, PeriodicParams>) {
          j["period"] = p.period;
        } else if constexpr (std::is_same_v<P, PermutationParams>) {
          j["source"] = p.source;
        }
      },
      model.params());
  if (!model.name.empty()) j["name"] = model.name;
  if (model.seed) j["seed"] = *model.seed;
  return j;
}

ProcessModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("model file '" + path + "': " + e.what());
  }
  return model_from_json(j);
}

void save_model(const ProcessModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write model file '" + path + "'");
  out << model_to_json(model).dump(2) << '\n';
}

}  // namespace maxrep
