#ifndef FLOQ_VERIFY_HPP
#define FLOQ_VERIFY_HPP

#include <string>
#include <vector>

namespace floq {

struct CheckResult {
    std::string module;
    std::string name;
    double observed = 0.0;
    double bound = 0.0;
    bool passed = false;
};

// Built-in invariant suite on small models. Bounds are multiplied by
// tol_scale; checks pass only when observed < bound (strict), so a zero
// scale demonstrates sensitivity.
std::vector<CheckResult> run_verification(const std::string& module_filter = "",
                                          double tol_scale = 1.0);

}  // namespace floq

#endif
