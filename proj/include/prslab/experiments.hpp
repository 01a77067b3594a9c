// experiments.hpp -- named, reproducible experiment drivers
#pragma once

#include <string>
#include <vector>

#include "prslab/report.hpp"

namespace prslab {

std::vector<std::string> experiment_names();

// Dispatches to the named experiment. Throws std::invalid_argument on an
// unknown experiment or bad parameters; estimates are pure functions of
// (experiment, params, seed).
ExperimentReport run_experiment(const ExperimentConfig& config);

}  // namespace prslab
