#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "stvp/video_io.hpp"

namespace stvp {

// Low-rank background of one frame window. B has one column per frame.
struct BackgroundModel {
    Eigen::MatrixXd B;       // pixels x frames
    int rank = 0;            // effective rank after singular value thresholding
    double lambda_sig = 10.0;
    double nuclear_norm = 0.0;
    bool converged = false;
    // Best objective value ||B||_* + lambda*||I-B||_1 seen up to each
    // iteration; non-increasing by construction, kept for audit.
    std::vector<double> objective_trace;
};

// Per-pixel foreground probability and the thresholded binary mask over a
// frame window. Layout matches VideoTensor (frame-major, row-major).
struct ForegroundField {
    int width = 0;
    int height = 0;
    int frames = 0;
    std::vector<double> prob;
    std::vector<std::uint8_t> mask;

    double prob_at(int x, int y, int t) const {
        return prob[(static_cast<size_t>(t) * height + y) * width + x];
    }
    std::uint8_t mask_at(int x, int y, int t) const {
        return mask[(static_cast<size_t>(t) * height + y) * width + x];
    }
};

struct RpcaOptions {
    double lambda = 0.0;   // 0 = 1/sqrt(max(rows, cols))
    double tol = 1e-6;     // relative change stopping criterion
    int max_iter = 500;
};

// Decompose the stacked window into a low-rank background plus a sparse
// residual by minimizing ||B||_* + lambda*||I-B||_1 with an inexact
// augmented-Lagrangian scheme and singular value thresholding. Windows must
// span at least 2 frames.
BackgroundModel subtract_background(const VideoTensor& video, int window,
                                    const RpcaOptions& opts = {});

// Same solver on a raw pixels-x-frames matrix.
BackgroundModel rpca(const Eigen::MatrixXd& observations, const RpcaOptions& opts = {});

// P(f=1) = 2/(1+exp(-lambda*|I-B|)) - 1 per pixel; mask = (prob > 0.5).
ForegroundField foreground_probability(const VideoTensor& video,
                                       const BackgroundModel& bg,
                                       double lambda_sig = 10.0);

}  // namespace stvp
