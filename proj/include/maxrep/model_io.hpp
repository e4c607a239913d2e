#pragma once

#include <string>

#include "json.hpp"
#include "maxrep/processes.hpp"

namespace maxrep {

// Model files are JSON documents:
//
//   {"kind": "markov", "alphabet_size": 2,
//    "transition": [[0.7, 0.3], [0.3, 0.7]],
//    "initial": [0.5, 0.5], "stationary": true,
//    "name": "sticky", "seed": 7}
//
// Matrices are arrays of rows. Kind-specific keys:
//   iid                    probabilities
//   markov                 transition, [initial], [stationary]
//   hidden_markov          transition, emission | emission_map, [initial], [stationary]
//   uniformly_dithered     base (nested model), dither, dither_bound
//   periodic_random_phase  period
//   empirical_permutation  source
// model_to_json(model_from_json(j)) reproduces j for documents written by model_to_json.
ProcessModel model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const ProcessModel& model);

ProcessModel load_model(const std::string& path);
void save_model(const ProcessModel& model, const std::string& path);

}  // namespace maxrep
