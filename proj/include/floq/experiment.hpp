#ifndef FLOQ_EXPERIMENT_HPP
#define FLOQ_EXPERIMENT_HPP

#include <map>
#include <string>
#include <vector>

#include "floq/registry.hpp"

namespace floq {

// Exit codes of the experiment runner (mirrored by the CLI).
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumeric = 3;

struct SweepSpec {
    std::string parameter;
    double start = 0.0;
    double stop = 0.0;
    int points = 1;
};

struct NumericsSpec {
    int steps_per_period = 2048;
    int grid_points = 1024;
    int micromotion_samples = 256;
    int n_h = -1;               // -1: drive harmonics + 4
    double rank_tol = 1e-8;
    double classify_tol = 1e-7;
    long long seed = 0;
    int threads = 0;            // 0: machine parallelism
};

struct OutputSpec {
    std::string dir;            // empty: FLOQ_OUT_DIR env or "."
    bool csv = true;
    bool json = false;
};

struct ExperimentConfig {
    std::string model;
    std::map<std::string, double> params;
    std::vector<std::string> computations;  // subset of {floquet,kato,berry,agpsolve,hfe,classify}
    std::vector<SweepSpec> sweeps;          // 1 or 2 entries ([sweep], [sweep2])
    NumericsSpec numerics;
    OutputSpec output;

    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig from_ini(const std::string& text);
    static ExperimentConfig from_json_text(const std::string& text);
    void validate() const;  // throws InvalidInput
};

// One table cell: a number or a label (the long format's quantity column).
struct Cell {
    bool is_text = false;
    double num = 0.0;
    std::string text;

    Cell(double v) : num(v) {}                          // NOLINT(google-explicit-constructor)
    Cell(int v) : num(v) {}                             // NOLINT(google-explicit-constructor)
    Cell(const char* s) : is_text(true), text(s) {}     // NOLINT(google-explicit-constructor)
    Cell(std::string s) : is_text(true), text(std::move(s)) {}  // NOLINT
};

// Column-labeled table with metadata header.
struct ResultTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, std::string>> meta;

    // '#'-prefixed metadata lines, header row, then data rows. The body
    // (everything after the metadata block) is deterministic for a fixed
    // config + seed + version.
    std::string to_csv(bool with_meta = true) const;
    std::string to_json_text() const;
};

struct RunOutcome {
    int exit_code = kExitOk;
    std::vector<ResultTable> tables;
    std::string error;        // machine-readable message when exit_code != 0
};

RunOutcome run_experiment(const ExperimentConfig& cfg);

// Write tables (and error.json on failure) under dir; returns exit code.
int write_outcome(const RunOutcome& outcome, const ExperimentConfig& cfg,
                  const std::string& dir_override = "");

const std::string& floq_version();

}  // namespace floq

#endif
