#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "fermigibbs/model.hpp"

namespace fg::io {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelConfig {
    // single_mode | quadratic | random_quadratic | chain | hubbard | custom
    std::string type = "single_mode";
    double epsilon = 0.5;
    int n_modes = 1;
    double hopping = 1.0;
    double mu = 0.0;
    double U = 0.0;
    std::vector<int> dims{1};
    std::uint64_t seed = 1;
    double scale = 0.5;
    double r0 = 1.0;
    RMat h_imag;                                      // quadratic: Im h, 2n x 2n
    std::vector<std::pair<std::vector<int>, cd>> terms;  // custom: Majorana words
};

struct Tolerances {
    double algebra = 1e-13;
    double stationarity = 1e-7;
    double kms = 1e-7;
    double negative_control = 1e-3;
    double spectrum = 1e-8;
    double hermiticity = 1e-9;
    double route = 1e-8;
    double free_parent = 1e-8;
    double closed_form_rel = 1e-6;
    double decoupling = 1e-8;
    double mixing_slack = 1e-7;
    double rate = 1e-6;
    double overlap = 1e-8;
    double expectation = 1e-7;
    double norm = 1e-10;
    double dissipator_dual = 1e-8;
    double coherent_dual = 1e-6;
    double kernel = 1e-7;
    double b1_hat_zero = 1e-10;
};

struct ExperimentConfig {
    ModelConfig model;
    double beta = 1.0;
    std::vector<double> U_grid;
    std::vector<int> jumps;
    std::string method = "closed";  // closed | quadrature | both
    std::string coherent = "bohr_product";
    Tolerances tol;
    std::string out_dir = "out";
    std::uint64_t seed = 7;
    int max_modes = kMaxModes;
};

// Parse errors report line and column; invalid values name the field.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& cfg);
// FNV-1a of the canonical dump of the effective configuration, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

int model_mode_count(const ModelConfig& m);
Model build_model(const ModelConfig& m, int max_modes = kMaxModes);
Model build_model_with_U(const ModelConfig& m, double U, int max_modes = kMaxModes);

struct Check {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double tolerance = 0.0;
    std::string relation = "<=";
};

struct RunReport {
    std::string subcommand;
    std::vector<Check> checks;
    nlohmann::json payload;

    bool all_passed() const;
    nlohmann::json to_json(const ExperimentConfig& cfg) const;
};

// Runs one subcommand (build, gap, mix, sweep, correlations, kernels, validate)
// and writes report.json plus the CSV tables it produces into cfg.out_dir.
RunReport run(const std::string& subcommand, const ExperimentConfig& cfg);
const std::vector<std::string>& subcommands();

}  // namespace fg::io
