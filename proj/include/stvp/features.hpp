#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

#include "stvp/video_io.hpp"

namespace stvp {

// Axis-aligned support box given by its center and size, in frame pixels.
struct Box {
    double cx = 0.0;
    double cy = 0.0;
    double w = 0.0;
    double h = 0.0;

    double x0() const { return cx - w / 2.0; }
    double y0() const { return cy - h / 2.0; }
    double x1() const { return cx + w / 2.0; }
    double y1() const { return cy + h / 2.0; }
};

double box_iou(const Box& a, const Box& b);

// Spatio-temporal appearance+motion descriptor: per frame of the window, the
// intensity derivatives (dx, dy, dt) sampled on the fixed model grid inside
// the support region. raw length = frames * grid_w * grid_h * 3.
struct Descriptor {
    std::vector<double> raw;
    std::vector<double> compressed;
};

struct PcaBasis {
    Eigen::VectorXd mean;
    Eigen::MatrixXd components;   // dim x k, orthonormal columns
    Eigen::VectorXd eigenvalues;  // k, descending
    double retained_variance = 0.0;
    double variance_target = 0.0;

    int dim() const { return static_cast<int>(mean.size()); }
    int k() const { return static_cast<int>(components.cols()); }

    // Scale coefficients to unit variance per retained direction.
    Eigen::VectorXd whiten(const Eigen::VectorXd& coeffs) const;

    void save(std::ostream& out) const;
    void save(const std::string& path) const;
    static PcaBasis load(std::istream& in);
    static PcaBasis load(const std::string& path);
};

// Resample the box contents of one frame onto a grid_w x grid_h patch by
// bilinear interpolation; out-of-frame samples clamp to the border.
std::vector<double> resample_patch(const VideoTensor& video, int t, const Box& box,
                                   int grid_w, int grid_h);

// Full spatio-temporal descriptor over frames [t0, t0 + boxes.size()).
// Spatial derivatives are central differences (one-sided at grid borders),
// temporal derivatives forward differences (backward at the last frame), all
// computed after resampling to the model grid. Throws std::out_of_range with
// the frame index if a box leaves the frame.
Descriptor compute_descriptor(const VideoTensor& video, int t0,
                              const std::vector<Box>& boxes, int grid_w, int grid_h);

// Single-frame appearance feature (dx, dy only) used by the background
// classifier, where no temporal neighbor is available.
std::vector<double> compute_frame_descriptor(const PixelMap& frame, const Box& box,
                                             int grid_w, int grid_h);

// Fit a PCA basis retaining at least variance_target of the total variance.
// The sign of each component is fixed by making its largest-magnitude entry
// positive. All-identical inputs yield an empty basis whose mean is the
// common vector.
PcaBasis fit_pca(const std::vector<std::vector<double>>& descriptors,
                 double variance_target);

std::vector<double> project(const PcaBasis& basis, const std::vector<double>& raw);
std::vector<double> reconstruct(const PcaBasis& basis, const std::vector<double>& coeffs);

}  // namespace stvp
