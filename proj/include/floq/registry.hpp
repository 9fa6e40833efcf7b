#ifndef FLOQ_REGISTRY_HPP
#define FLOQ_REGISTRY_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "floq/drive.hpp"

namespace floq {

struct ParamSpec {
    std::string name;
    double value = 0.0;  // default
    std::string doc;
};

struct ModelInfo {
    std::string name;
    std::string description;
    std::vector<ParamSpec> params;
    std::vector<std::string> sweepable;
    std::function<DriveProtocol(const std::map<std::string, double>&)> make;
};

const std::vector<ModelInfo>& model_registry();
const ModelInfo& find_model(const std::string& name);

// Build a model from a parameter map; defaults fill the gaps, unknown keys
// are rejected.
DriveProtocol make_model(const std::string& name, const std::map<std::string, double>& params);

// Defaults merged with overrides (validated).
std::map<std::string, double> resolve_params(const ModelInfo& info,
                                             const std::map<std::string, double>& overrides);

}  // namespace floq

#endif
