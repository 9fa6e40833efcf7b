#include "floq/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "floq/agpsolve.hpp"
#include "floq/kato.hpp"
#include "floq/spectralflow.hpp"

#include "json.hpp"

namespace floq {

namespace {

const std::vector<std::string> kComputations = {"floquet", "kato",  "berry",
                                                "agpsolve", "hfe", "classify"};

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    size_t b = s.find_last_not_of(" \t\r\n");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_number(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw InvalidInput("config: key '" + key + "' needs a number, got '" + value + "'");
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

const std::string& floq_version() {
#ifdef FLOQ_VERSION
    static const std::string v = FLOQ_VERSION;
#else
    static const std::string v = "unknown";
#endif
    return v;
}

// --- config parsing -----------------------------------------------------------

ExperimentConfig ExperimentConfig::from_ini(const std::string& text) {
    ExperimentConfig cfg;
    std::map<std::string, std::map<std::string, std::string>> sections;
    std::vector<std::string> section_order;

    std::stringstream ss(text);
    std::string line;
    std::string current;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw InvalidInput("config line " + std::to_string(lineno) + ": bad section");
            current = trim(line.substr(1, line.size() - 2));
            if (sections.count(current))
                throw InvalidInput("config: duplicate section [" + current + "]");
            sections[current] = {};
            section_order.push_back(current);
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos || current.empty())
            throw InvalidInput("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (sections[current].count(key))
            throw InvalidInput("config: duplicate key '" + key + "' in [" + current + "]");
        sections[current][key] = value;
    }

    const std::vector<std::string> known = {"model", "compute", "sweep", "sweep2",
                                            "numerics", "output"};
    for (const auto& s : section_order)
        if (std::find(known.begin(), known.end(), s) == known.end())
            throw InvalidInput("config: unknown section [" + s + "]");

    if (!sections.count("model") || !sections["model"].count("name"))
        throw InvalidInput("config: [model] section with a name is required");
    for (const auto& [k, v] : sections["model"]) {
        if (k == "name")
            cfg.model = v;
        else
            cfg.params[k] = parse_number(k, v);
    }

    if (!sections.count("compute") || !sections["compute"].count("list"))
        throw InvalidInput("config: [compute] section with a list is required");
    for (const auto& [k, v] : sections["compute"]) {
        if (k != "list") throw InvalidInput("config: unknown key '" + k + "' in [compute]");
        cfg.computations = split_list(v);
    }

    auto parse_sweep = [&](const std::string& sec) {
        SweepSpec sw;
        for (const auto& [k, v] : sections[sec]) {
            if (k == "parameter")
                sw.parameter = v;
            else if (k == "start")
                sw.start = parse_number(k, v);
            else if (k == "stop")
                sw.stop = parse_number(k, v);
            else if (k == "points")
                sw.points = int(std::lround(parse_number(k, v)));
            else
                throw InvalidInput("config: unknown key '" + k + "' in [" + sec + "]");
        }
        if (sw.parameter.empty())
            throw InvalidInput("config: [" + sec + "] needs a parameter");
        cfg.sweeps.push_back(sw);
    };
    if (sections.count("sweep")) parse_sweep("sweep");
    if (sections.count("sweep2")) {
        if (!sections.count("sweep"))
            throw InvalidInput("config: [sweep2] requires [sweep]");
        parse_sweep("sweep2");
    }

    if (sections.count("numerics")) {
        for (const auto& [k, v] : sections["numerics"]) {
            if (k == "steps_per_period")
                cfg.numerics.steps_per_period = int(std::lround(parse_number(k, v)));
            else if (k == "grid_points")
                cfg.numerics.grid_points = int(std::lround(parse_number(k, v)));
            else if (k == "micromotion_samples")
                cfg.numerics.micromotion_samples = int(std::lround(parse_number(k, v)));
            else if (k == "n_h")
                cfg.numerics.n_h = int(std::lround(parse_number(k, v)));
            else if (k == "rank_tol")
                cfg.numerics.rank_tol = parse_number(k, v);
            else if (k == "classify_tol")
                cfg.numerics.classify_tol = parse_number(k, v);
            else if (k == "seed")
                cfg.numerics.seed = std::llround(parse_number(k, v));
            else if (k == "threads")
                cfg.numerics.threads = int(std::lround(parse_number(k, v)));
            else
                throw InvalidInput("config: unknown key '" + k + "' in [numerics]");
        }
    }

    if (sections.count("output")) {
        for (const auto& [k, v] : sections["output"]) {
            if (k == "dir") {
                cfg.output.dir = v;
            } else if (k == "formats") {
                cfg.output.csv = cfg.output.json = false;
                for (const auto& f : split_list(v)) {
                    if (f == "csv")
                        cfg.output.csv = true;
                    else if (f == "json")
                        cfg.output.json = true;
                    else
                        throw InvalidInput("config: unknown output format '" + f + "'");
                }
            } else {
                throw InvalidInput("config: unknown key '" + k + "' in [output]");
            }
        }
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw InvalidInput(std::string("config: JSON parse error: ") + e.what());
    }

    ExperimentConfig cfg;
    const std::vector<std::string> known = {"model", "compute", "sweep", "sweep2",
                                            "numerics", "output"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw InvalidInput("config: unknown section '" + it.key() + "'");

    if (!j.contains("model") || !j["model"].contains("name"))
        throw InvalidInput("config: model.name is required");
    for (auto it = j["model"].begin(); it != j["model"].end(); ++it) {
        if (it.key() == "name")
            cfg.model = it.value().get<std::string>();
        else
            cfg.params[it.key()] = it.value().get<double>();
    }

    if (!j.contains("compute") || !j["compute"].is_array())
        throw InvalidInput("config: compute list is required");
    for (const auto& c : j["compute"]) cfg.computations.push_back(c.get<std::string>());

    auto parse_sweep = [&](const nlohmann::json& js, const char* sec) {
        SweepSpec sw;
        for (auto it = js.begin(); it != js.end(); ++it) {
            const std::string& k = it.key();
            if (k == "parameter")
                sw.parameter = it.value().get<std::string>();
            else if (k == "start")
                sw.start = it.value().get<double>();
            else if (k == "stop")
                sw.stop = it.value().get<double>();
            else if (k == "points")
                sw.points = it.value().get<int>();
            else
                throw InvalidInput("config: unknown key '" + k + "' in " + std::string(sec));
        }
        cfg.sweeps.push_back(sw);
    };
    if (j.contains("sweep")) parse_sweep(j["sweep"], "sweep");
    if (j.contains("sweep2")) {
        if (!j.contains("sweep")) throw InvalidInput("config: sweep2 requires sweep");
        parse_sweep(j["sweep2"], "sweep2");
    }

    if (j.contains("numerics")) {
        const auto& jn = j["numerics"];
        for (auto it = jn.begin(); it != jn.end(); ++it) {
            const std::string& k = it.key();
            if (k == "steps_per_period")
                cfg.numerics.steps_per_period = it.value().get<int>();
            else if (k == "grid_points")
                cfg.numerics.grid_points = it.value().get<int>();
            else if (k == "micromotion_samples")
                cfg.numerics.micromotion_samples = it.value().get<int>();
            else if (k == "n_h")
                cfg.numerics.n_h = it.value().get<int>();
            else if (k == "rank_tol")
                cfg.numerics.rank_tol = it.value().get<double>();
            else if (k == "classify_tol")
                cfg.numerics.classify_tol = it.value().get<double>();
            else if (k == "seed")
                cfg.numerics.seed = it.value().get<long long>();
            else if (k == "threads")
                cfg.numerics.threads = it.value().get<int>();
            else
                throw InvalidInput("config: unknown numerics key '" + k + "'");
        }
    }
    if (j.contains("output")) {
        const auto& jo = j["output"];
        for (auto it = jo.begin(); it != jo.end(); ++it) {
            const std::string& k = it.key();
            if (k == "dir") {
                cfg.output.dir = it.value().get<std::string>();
            } else if (k == "formats") {
                cfg.output.csv = cfg.output.json = false;
                for (const auto& f : jo["formats"]) {
                    const std::string fs = f.get<std::string>();
                    if (fs == "csv")
                        cfg.output.csv = true;
                    else if (fs == "json")
                        cfg.output.json = true;
                    else
                        throw InvalidInput("config: unknown output format '" + fs + "'");
                }
            } else {
                throw InvalidInput("config: unknown output key '" + k + "'");
            }
        }
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("config: cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const size_t first = text.find_first_not_of(" \t\r\n");
    const bool looks_json = first != std::string::npos && text[first] == '{';
    const bool json_ext = path.size() > 5 && path.substr(path.size() - 5) == ".json";
    if (looks_json || json_ext) return from_json_text(text);
    return from_ini(text);
}

void ExperimentConfig::validate() const {
    const ModelInfo& info = find_model(model);
    const auto full = resolve_params(info, params);

    if (computations.empty())
        throw InvalidInput("config: computation list is empty");
    for (const auto& c : computations)
        if (std::find(kComputations.begin(), kComputations.end(), c) == kComputations.end())
            throw InvalidInput("config: unknown computation '" + c + "'");

    if (sweeps.size() > 2) throw InvalidInput("config: at most two sweeps");
    for (const auto& sw : sweeps) {
        if (sw.points < 1) throw InvalidInput("config: sweep points must be >= 1");
        if (!full.count(sw.parameter))
            throw InvalidInput("config: sweep parameter '" + sw.parameter +
                               "' is not a parameter of model " + model);
    }
    if (numerics.steps_per_period < 1 || numerics.grid_points < 2)
        throw InvalidInput("config: numerics out of range");
    if (!output.csv && !output.json)
        throw InvalidInput("config: no output format selected");

    const bool wants_agp =
        std::find(computations.begin(), computations.end(), "agpsolve") != computations.end();
    if (wants_agp) {
        DriveProtocol probe = info.make(full);
        if (probe.is_kicked() || !probe.fourier())
            throw InvalidInput("config: agpsolve needs a continuous drive with a Fourier form");
        const int n_h = numerics.n_h < 0 ? probe.fourier()->max_harmonic() + 4 : numerics.n_h;
        const Eigen::Index rows = probe.dim() * probe.dim() * (2 * n_h + 1);
        if (rows > kSuperoperatorRowLimit)
            throw InvalidInput("config: agpsolve superoperator would have " +
                               std::to_string(rows) + " rows (limit " +
                               std::to_string(kSuperoperatorRowLimit) + "); lower n_h");
    }
}

// --- tables ---------------------------------------------------------------------

std::string ResultTable::to_csv(bool with_meta) const {
    std::string out;
    if (with_meta)
        for (const auto& [k, v] : meta) out += "# " + k + " = " + v + "\n";
    for (size_t c = 0; c < columns.size(); ++c) {
        out += columns[c];
        out += (c + 1 == columns.size()) ? "\n" : ",";
    }
    for (const auto& row : rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            out += row[c].is_text ? row[c].text : format_double(row[c].num);
            out += (c + 1 == row.size()) ? "\n" : ",";
        }
    }
    return out;
}

std::string ResultTable::to_json_text() const {
    nlohmann::json j;
    j["columns"] = columns;
    nlohmann::json jrows = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json jr = nlohmann::json::array();
        for (const auto& c : row) {
            if (c.is_text)
                jr.push_back(c.text);
            else
                jr.push_back(c.num);
        }
        jrows.push_back(std::move(jr));
    }
    j["rows"] = std::move(jrows);
    nlohmann::json jm;
    for (const auto& [k, v] : meta) jm[k] = v;
    j["meta"] = jm;
    return j.dump(2) + "\n";
}

// --- runner ----------------------------------------------------------------------

namespace {

struct PointResult {
    double value = 0.0;
    double period = 0.0;
    RealVector theta, quasi, xi, gamma;
    Matrix states;
    bool symmetry_fixed = false;
    double agp_residual = 0.0;
    double agp_sigma_min = 0.0;
    long agp_rank = 0;
    RealVector xi0;
    DriveFamilyFlags flags;
    bool has_kato = false;
    std::string error;
};

bool wants(const ExperimentConfig& cfg, const std::string& c) {
    return std::find(cfg.computations.begin(), cfg.computations.end(), c) !=
           cfg.computations.end();
}

PointResult compute_point(const ExperimentConfig& cfg, const ModelInfo& info,
                          const std::map<std::string, double>& base, const std::string& param,
                          double value) {
    PointResult pr;
    pr.value = value;
    auto params = base;
    params[param] = value;

    DriveProtocol d = info.make(params);
    pr.period = d.period();

    FloquetOptions fopts;
    fopts.prop.steps_per_period = cfg.numerics.steps_per_period;
    fopts.micromotion_samples = cfg.numerics.micromotion_samples;
    FloquetSolution sol = solve_floquet(d, 0.0, fopts);
    pr.theta = sol.theta;
    pr.quasi = sol.quasienergy;
    pr.states = sol.states;
    pr.symmetry_fixed = sol.degenerate_clusters_symmetry_fixed;

    const bool need_kato = wants(cfg, "kato") || wants(cfg, "berry") || wants(cfg, "classify");
    if (need_kato) {
        KatoOptions kopts;
        kopts.grid_points = cfg.numerics.grid_points;
        kopts.prop = fopts.prop;
        KatoResult kr = kato_analyze(d, sol, kopts);
        pr.xi = kr.xi_T;
        pr.gamma = kr.gamma;
        pr.has_kato = true;
        if (wants(cfg, "classify"))
            pr.flags = classify_drive(d, sol, kr, cfg.numerics.classify_tol);
    }

    if (wants(cfg, "agpsolve")) {
        const int n_h =
            cfg.numerics.n_h < 0 ? d.fourier()->max_harmonic() + 4 : cfg.numerics.n_h;
        FourierOperator h = FourierOperator::from_series(*d.fourier(), n_h);
        AgpSolveReport rep;
        solve_kato_agp(h, n_h, cfg.numerics.rank_tol, &rep);
        pr.agp_residual = rep.residual;
        pr.agp_sigma_min = rep.sigma_min_kept;
        pr.agp_rank = long(rep.rank);
    }

    if (wants(cfg, "hfe")) pr.xi0 = hfe_kato(d).xi0;
    return pr;
}

void append_meta(ResultTable& t, const ExperimentConfig& cfg,
                 const std::map<std::string, double>& full, const SweepSpec& sw) {
    t.meta.push_back({"table", t.name});
    t.meta.push_back({"model", cfg.model});
    for (const auto& [k, v] : full) t.meta.push_back({"param. " + k, format_double(v)});
    t.meta.push_back({"sweep_parameter", sw.parameter});
    t.meta.push_back({"sweep_points", std::to_string(sw.points)});
    t.meta.push_back({"steps_per_period", std::to_string(cfg.numerics.steps_per_period)});
    t.meta.push_back({"grid_points", std::to_string(cfg.numerics.grid_points)});
    t.meta.push_back({"seed", std::to_string(cfg.numerics.seed)});
    t.meta.push_back({"version", floq_version()});
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    t.meta.push_back({"timestamp", buf});
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg) {
    RunOutcome out;
    try {
        cfg.validate();
    } catch (const Error& e) {
        out.exit_code = kExitValidation;
        out.error = e.what();
        return out;
    }

    const ModelInfo& info = find_model(cfg.model);
    const auto full = resolve_params(info, cfg.params);

    std::vector<SweepSpec> sweeps = cfg.sweeps;
    if (sweeps.empty()) {
        SweepSpec single;
        single.parameter = info.params.front().name;
        single.start = single.stop = full.at(single.parameter);
        single.points = 1;
        sweeps.push_back(single);
    }

    for (const auto& sw : sweeps) {
        std::vector<double> values(size_t(sw.points));
        for (int i = 0; i < sw.points; ++i)
            values[size_t(i)] =
                sw.points == 1 ? sw.start
                               : sw.start + (sw.stop - sw.start) * i / double(sw.points - 1);

        std::vector<PointResult> results(values.size());
        std::atomic<size_t> next{0};
        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        const unsigned nthreads =
            cfg.numerics.threads > 0 ? unsigned(cfg.numerics.threads)
                                     : std::min<unsigned>(hw, unsigned(values.size()));
        auto worker = [&] {
            for (;;) {
                const size_t i = next.fetch_add(1);
                if (i >= values.size()) return;
                try {
                    results[i] = compute_point(cfg, info, full, sw.parameter, values[i]);
                } catch (const std::exception& e) {
                    results[i].value = values[i];
                    results[i].error = e.what();
                }
            }
        };
        std::vector<std::thread> pool;
        for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();

        for (const auto& r : results)
            if (!r.error.empty()) {
                out.exit_code = kExitNumeric;
                out.error = "point " + format_double(r.value) + ": " + r.error;
            }

        // tracked band continuation when the whole sweep solved
        const bool kato_present =
            std::all_of(results.begin(), results.end(),
                        [](const PointResult& r) { return r.has_kato && r.error.empty(); });
        BandTrack tr;
        bool tracked = false;
        if (kato_present && results.size() > 1) {
            std::vector<SweepPoint> pts;
            for (const auto& r : results) {
                SweepPoint sp;
                sp.parameter = r.value;
                sp.period = r.period;
                sp.theta = r.theta;
                sp.xi = r.xi;
                sp.gamma = r.gamma;
                sp.states = r.states;
                sp.symmetry_fixed = r.symmetry_fixed;
                pts.push_back(std::move(sp));
            }
            tr = track(pts);
            tracked = true;
        }

        auto long_table = [&](const std::string& comp) {
            ResultTable t;
            t.name = comp + "_" + sw.parameter;
            t.columns = {"grid_index", sw.parameter, "band", "quantity", "value"};
            append_meta(t, cfg, full, sw);
            return t;
        };

        if (wants(cfg, "floquet")) {
            ResultTable t = long_table("floquet");
            for (size_t p = 0; p < results.size(); ++p) {
                const auto& r = results[p];
                if (!r.error.empty()) continue;
                for (Eigen::Index b = 0; b < r.theta.size(); ++b) {
                    const int idx = tracked ? tr.index_path(b, int(p)) : int(b);
                    t.rows.push_back({int(p), r.value, int(b), "theta_F", r.theta[idx]});
                    t.rows.push_back({int(p), r.value, int(b), "quasienergy", r.quasi[idx]});
                }
            }
            out.tables.push_back(std::move(t));
        }

        if (wants(cfg, "kato") || wants(cfg, "berry")) {
            ResultTable t = long_table("kato");
            for (size_t p = 0; p < results.size(); ++p) {
                const auto& r = results[p];
                if (!r.error.empty() || !r.has_kato) continue;
                for (Eigen::Index b = 0; b < r.xi.size(); ++b) {
                    const int idx = tracked ? tr.index_path(b, int(p)) : int(b);
                    t.rows.push_back({int(p), r.value, int(b), "xi_K", r.xi[idx]});
                    if (wants(cfg, "berry"))
                        t.rows.push_back({int(p), r.value, int(b), "gamma", r.gamma[idx]});
                    const double eps_f = r.theta[idx] / r.period;
                    const double ell = std::round((r.xi[idx] - eps_f) / (2 * M_PI / r.period));
                    t.rows.push_back({int(p), r.value, int(b), "photon_index", ell});
                    if (tracked && p > 0) {
                        // band-variation statistic (resonance 'chaos' indicator)
                        const double step = std::abs(tr.xi(b, int(p)) - tr.xi(b, int(p) - 1));
                        t.rows.push_back({int(p), r.value, int(b), "xi_K_step", step});
                    }
                }
            }
            out.tables.push_back(std::move(t));
        }

        if (wants(cfg, "agpsolve")) {
            ResultTable t = long_table("agpsolve");
            for (size_t p = 0; p < results.size(); ++p) {
                const auto& r = results[p];
                if (!r.error.empty()) continue;
                t.rows.push_back({int(p), r.value, -1, "residual", r.agp_residual});
                t.rows.push_back({int(p), r.value, -1, "rank", double(r.agp_rank)});
                t.rows.push_back({int(p), r.value, -1, "sigma_min_kept", r.agp_sigma_min});
            }
            out.tables.push_back(std::move(t));
        }

        if (wants(cfg, "hfe")) {
            ResultTable t = long_table("hfe");
            for (size_t p = 0; p < results.size(); ++p) {
                const auto& r = results[p];
                if (!r.error.empty()) continue;
                for (Eigen::Index b = 0; b < r.xi0.size(); ++b)
                    t.rows.push_back({int(p), r.value, int(b), "xi0", r.xi0[b]});
            }
            out.tables.push_back(std::move(t));
        }

        if (wants(cfg, "classify")) {
            ResultTable t = long_table("classify");
            for (size_t p = 0; p < results.size(); ++p) {
                const auto& r = results[p];
                if (!r.error.empty() || !r.has_kato) continue;
                t.rows.push_back({int(p), r.value, -1, "equilibrium", r.flags.equilibrium ? 1.0 : 0.0});
                t.rows.push_back(
                    {int(p), r.value, -1, "pure_micromotion", r.flags.pure_micromotion ? 1.0 : 0.0});
                t.rows.push_back({int(p), r.value, -1, "flat", r.flags.flat ? 1.0 : 0.0});
                t.rows.push_back(
                    {int(p), r.value, -1, "pure_geometric", r.flags.pure_geometric ? 1.0 : 0.0});
            }
            out.tables.push_back(std::move(t));
        }
    }
    return out;
}

int write_outcome(const RunOutcome& outcome, const ExperimentConfig& cfg,
                  const std::string& dir_override) {
    namespace fs = std::filesystem;
    std::string dir = dir_override;
    if (dir.empty()) dir = cfg.output.dir;
    if (dir.empty()) {
        const char* env = std::getenv("FLOQ_OUT_DIR");
        dir = env ? env : ".";
    }
    fs::create_directories(dir);

    for (const auto& t : outcome.tables) {
        if (cfg.output.csv) {
            std::ofstream f(fs::path(dir) / (t.name + ".csv"), std::ios::binary);
            f << t.to_csv();
        }
        if (cfg.output.json) {
            std::ofstream f(fs::path(dir) / (t.name + ".json"), std::ios::binary);
            f << t.to_json_text();
        }
    }
    if (outcome.exit_code != kExitOk) {
        nlohmann::json j;
        j["exit_code"] = outcome.exit_code;
        j["error"] = outcome.error;
        j["partial_tables"] = outcome.tables.size();
        std::ofstream f(fs::path(dir) / "error.json", std::ios::binary);
        f << j.dump(2) << "\n";
    }
    return outcome.exit_code;
}

}  // namespace floq
