#include "floq/registry.hpp"

#include <cmath>

#include "floq/models.hpp"

namespace floq {

namespace {

double get(const std::map<std::string, double>& p, const std::string& k) { return p.at(k); }

std::vector<ModelInfo> build_registry() {
    std::vector<ModelInfo> reg;

    reg.push_back(ModelInfo{
        "xy_bloch",
        "circularly driven XY chain, free-fermion Bloch form (2x2 per momentum)",
        {{"g", 1.0, "transverse field"},
         {"J", 0.5, "hopping"},
         {"A", 2.5, "drive amplitude"},
         {"omega", 10.0, "drive frequency"},
         {"k", M_PI / 16, "quasi-momentum in (-pi, pi]"}},
        {"k", "J", "A", "omega", "g"},
        [](const std::map<std::string, double>& p) {
            XYBlochParams q;
            q.g = get(p, "g");
            q.J = get(p, "J");
            q.A = get(p, "A");
            q.omega = get(p, "omega");
            q.k = get(p, "k");
            return xy_bloch(q);
        }});

    reg.push_back(ModelInfo{
        "kicked_mfi",
        "kicked mixed-field Ising chain, U_F = U_1 U_2 U_1, periodic boundary",
        {{"L", 8, "spin count"},
         {"J", 1.0, "Ising coupling"},
         {"g", 1.0, "kick field"},
         {"h", 1.0, "longitudinal field"},
         {"T", 0.1, "period"}},
        {"T", "J", "g", "h"},
        [](const std::map<std::string, double>& p) {
            KickedMFIParams q;
            q.L = int(std::lround(get(p, "L")));
            q.J = get(p, "J");
            q.g = get(p, "g");
            q.h = get(p, "h");
            q.T = get(p, "T");
            return kicked_mfi(q);
        }});

    reg.push_back(ModelInfo{
        "dtc_chain",
        "disordered kicked Ising chain (discrete time crystal), open boundary",
        {{"L", 8, "spin count (even)"},
         {"J", 1.0, "mean coupling"},
         {"theta_x", M_PI, "kick angle"},
         {"T", 0.05, "period"},
         {"seed", 12345, "disorder seed"},
         {"disorder_scale", 1.0, "0 disables disorder"}},
        {"theta_x", "T", "J"},
        [](const std::map<std::string, double>& p) {
            DTCParams q;
            q.L = int(std::lround(get(p, "L")));
            q.J = get(p, "J");
            q.theta_x = get(p, "theta_x");
            q.T = get(p, "T");
            q.seed = static_cast<unsigned long long>(std::llround(get(p, "seed")));
            q.disorder_scale = get(p, "disorder_scale");
            return dtc_chain(q);
        }});

    reg.push_back(ModelInfo{
        "afti_hex",
        "chirally modulated honeycomb hopping model on a cylinder (per k_x)",
        {{"Lx", 100, "periodic extent (k_x grid)"},
         {"Ly", 20, "open extent; dimension 2 Ly"},
         {"J", 1.0, "hopping scale"},
         {"F", 2.0, "modulation strength"},
         {"omega", 8.7, "drive frequency"},
         {"kx", 0.0, "quasi-momentum along the cylinder"}},
        {"kx", "F", "omega"},
        [](const std::map<std::string, double>& p) {
            AFTIHexParams q;
            q.Lx = int(std::lround(get(p, "Lx")));
            q.Ly = int(std::lround(get(p, "Ly")));
            q.J = get(p, "J");
            q.F = get(p, "F");
            q.omega = get(p, "omega");
            return afti_hex(q, get(p, "kx"));
        }});

    reg.push_back(ModelInfo{
        "afti_rudner",
        "bipartite-lattice d-vector model on a cylinder (per k_x)",
        {{"mu", 1.0, "energy scale"},
         {"J", 1.5, "checkerboard hopping"},
         {"b", 1.5, "quadratic term"},
         {"a", 4.0, "Dirac velocity"},
         {"Delta0", 1.0, "drive amplitude"},
         {"omega", 1.0 / 0.07, "drive frequency"},
         {"Ly", 20, "open extent; dimension 2 Ly"},
         {"kx", 0.0, "quasi-momentum along the cylinder"}},
        {"kx", "Delta0", "omega"},
        [](const std::map<std::string, double>& p) {
            AFTIRudnerParams q;
            q.mu = get(p, "mu");
            q.J = get(p, "J");
            q.b = get(p, "b");
            q.a = get(p, "a");
            q.Delta0 = get(p, "Delta0");
            q.omega = get(p, "omega");
            q.Ly = int(std::lround(get(p, "Ly")));
            return afti_rudner(q, get(p, "kx"));
        }});

    return reg;
}

}  // namespace

const std::vector<ModelInfo>& model_registry() {
    static const std::vector<ModelInfo> reg = build_registry();
    return reg;
}

const ModelInfo& find_model(const std::string& name) {
    for (const auto& m : model_registry())
        if (m.name == name) return m;
    throw InvalidInput("unknown model: " + name);
}

std::map<std::string, double> resolve_params(const ModelInfo& info,
                                             const std::map<std::string, double>& overrides) {
    std::map<std::string, double> full;
    for (const auto& ps : info.params) full[ps.name] = ps.value;
    for (const auto& [k, v] : overrides) {
        if (!full.count(k))
            throw InvalidInput("model " + info.name + ": unknown parameter '" + k + "'");
        full[k] = v;
    }
    return full;
}

DriveProtocol make_model(const std::string& name, const std::map<std::string, double>& params) {
    const ModelInfo& info = find_model(name);
    return info.make(resolve_params(info, params));
}

}  // namespace floq
