#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace stvp {

// Runtime configuration shared by the library and the CLI. Values come from
// a plain-text key=value file and can be overridden per key on the command
// line. Unknown keys are rejected so typos do not silently fall back to
// defaults.
struct Config {
    // background model
    int window = 5;                 // frames per batch, tau + 1
    int window_stride = 0;          // 0 = non-overlapping (stride == window)
    double lambda_sig = 10.0;       // sigmoid steepness of the foreground probability
    double rpca_lambda = 0.0;       // 0 = auto: 1/sqrt(max(rows, cols))
    double rpca_tol = 1e-6;
    int rpca_max_iter = 500;

    // descriptors
    int grid_w = 16;                // model grid width
    int grid_h = 32;                // model grid height
    double variance_target = 0.95;  // PCA retained-variance fraction

    // object model
    double beta = 1.0;              // Gibbs temperature on whitened coefficients
    double p0 = 0.05;               // base foreground rate
    double eps_loc = 1e-8;          // density floor for location/velocity priors

    // shortlist
    std::vector<double> scales = {0.75, 1.0, 1.33};
    double nms_overlap = 0.5;       // IoU threshold for non-maximum suppression
    double keep_prior = 0.5;        // candidate kept if fg prior exceeds this
    int detect_stride = 2;
    double min_fg_frac = 0.05;      // skip windows with less foreground than this
    double group_threshold = 0.3;   // stop merging below this trajectory similarity
    double edge_threshold = 0.1;    // gradient magnitude for edge points
    double kalman_q = 1.0;          // process noise variance (px^2)
    double kalman_r = 0.25;         // observation noise variance (px^2)
    double hs_alpha = 10.0;         // Horn-Schunck smoothness weight
    int hs_iters = 50;

    // inference
    double solver_tol = 1e-7;       // relative objective decrease
    int solver_max_iter = 200;
    double decode_threshold = 0.5;  // relaxed -> binary activation
    bool solver_fixed_step = false; // true: 1/L step instead of backtracking

    // learning
    int em_rounds = 20;
    double em_tol = 1e-4;
    int shape_iters = 500;
    int min_cluster = 5;            // segments needed for a valid prototype
    int init_cluster_factor = 3;    // Ward cut at factor * M clusters

    // evaluation
    double coverage = 0.4;          // pixel-criterion coverage fraction

    // misc
    int threads = 1;
    std::uint64_t seed = 0;

    // Load key=value lines from a file; '#' starts a comment. Throws on
    // unknown keys or malformed lines.
    void load(const std::string& path);
    // Apply a single "key=value" override.
    void set(const std::string& assignment);
    // Serialize back to key=value text (used to echo config into artifacts).
    std::string to_text() const;
};

}  // namespace stvp
