#pragma once

#include <string>

namespace cvbit {

/// Numeric defaults, all overridable through a plain key=value config file.
struct Config {
    // matrix validation
    double symmetry_tol = 1e-12;     // relative, covariance symmetry
    double physicality_tol = 1e-9;   // slack on lambda >= 1 and nu_- >= 1
    double hermiticity_tol = 1e-12;  // density matrices
    double trace_tol = 1e-10;

    // Fock truncation
    double tail_tol = 1e-8;          // boundary-level probability mass
    int cutoff_cap = 200;
    double imag_residual_tol = 1e-10;

    // sign-overlap quadrature: nodes = max(quad_min_nodes, quad_nodes_factor * cutoff)
    int quad_nodes_factor = 4;
    int quad_min_nodes = 256;

    // photon-subtracted series
    double series_band_tol = 1e-10;
    int series_nmax = 170;

    // angle optimizer
    int opt_grid = 32;
    int opt_refine_passes = 60;
    double opt_angle_tol = 1e-9;
    double opt_value_tol = 1e-10;

    // homodyne sampler grid
    double sample_extent = 8.0;
    int sample_cells = 2048;
    double sample_underflow_tol = 1e-6;

    // random Gaussian state generation
    int random_cm_max_attempts = 100000;
    double lambda_max = 9.0;
};

const Config& default_config();

/// Parse a config file: one `key = value` per line, '#' comments.
/// Unknown keys are rejected. Values on top of `base`.
Config load_config_file(const std::string& path, const Config& base = Config{});

/// Apply a single "key=value" assignment.
void apply_config_entry(Config& cfg, const std::string& key, const std::string& value);

} // namespace cvbit
