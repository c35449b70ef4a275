#pragma once

#include <string>
#include <vector>

#include "switchsim/fitting.hpp"

namespace switchsim {

// One fittable/sweepable curve. Defaults are the values of the bundled
// "paper-2014" preset; lo/hi bracket the physically sensible range and are
// used for random sampling in the Jacobian consistency checks.
struct ModelParamSpec {
    std::string name;
    double value; // default
    double lo;
    double hi;
};

struct ModelInfo {
    std::string name;
    std::string formula; // one-line description, printed in table headers
    std::string x_name;
    double x_lo, x_hi; // representative sweep range
    std::vector<ModelParamSpec> params;
    ModelFn fn;

    ParamMap defaults() const;
};

const std::vector<ModelInfo>& model_registry();
const ModelInfo* find_model(const std::string& name); // nullptr if unknown
std::vector<std::string> model_names();

} // namespace switchsim
