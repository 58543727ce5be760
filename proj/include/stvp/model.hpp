#pragma once

#include <Eigen/Dense>

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "stvp/features.hpp"
#include "stvp/video_io.hpp"

namespace stvp {

// Gaussian-kernel Parzen density with a diagonal bandwidth. During EM the
// densities are uniform placeholders that evaluate to 1.
struct ParzenDensity {
    Eigen::MatrixXd samples;   // n x d
    Eigen::VectorXd bandwidth; // d
    bool uniform = true;

    int dim() const { return static_cast<int>(bandwidth.size()); }
    double evaluate(const Eigen::VectorXd& x) const;

    // Silverman's rule per dimension; a small floor keeps degenerate
    // (constant) dimensions usable.
    static ParzenDensity fit(const Eigen::MatrixXd& samples);
};

// One normal-object prototype: a spatio-temporal shape, a compressed
// descriptor, and location/velocity densities. The shape stores
// q = -log(1 - P(f=1)) per model pixel, frame-major over the window.
struct Prototype {
    std::vector<double> shape;       // (tau+1) * grid_w * grid_h, all >= 0
    std::vector<double> descriptor;  // compressed (whitened) coefficients
    ParzenDensity loc;               // over (x, y, s)
    ParzenDensity vel;               // over (dx, dy, ds)
    bool frozen = false;             // no descriptor mass in the last M-step

    double shape_at(int t, int gx, int gy, int grid_w, int grid_h) const {
        return shape[(static_cast<size_t>(t) * grid_h + gy) * grid_w + gx];
    }
    // Implied foreground probability 1 - exp(-q).
    double prob_at(int t, int gx, int gy, int grid_w, int grid_h) const;
};

struct PrototypeSet {
    std::vector<Prototype> prototypes;
    PcaBasis basis;
    double beta = 1.0;
    int grid_w = 16;
    int grid_h = 32;
    int tau = 4;

    int size() const { return static_cast<int>(prototypes.size()); }
    int frames() const { return tau + 1; }
    size_t shape_len() const {
        return static_cast<size_t>(frames()) * grid_w * grid_h;
    }

    void save(std::ostream& out) const;
    static PrototypeSet load(std::istream& in);
};

// Gibbs matching distribution P(m | d) = exp(-beta * ||d - d_m||^2) / Z,
// evaluated stably. Returns M probabilities summing to 1.
std::vector<double> match_probability(const PrototypeSet& set,
                                      const std::vector<double>& descriptor);

// log Z(d) = log sum_m exp(-beta * delta_m), needed by the objective.
double log_partition(const PrototypeSet& set, const std::vector<double>& descriptor);

// Location/velocity prior of Eq-style product form: the density of the final
// location times the density of the last displacement, floored at eps.
double location_velocity_prior(const Prototype& proto,
                               const std::vector<std::array<double, 3>>& trajectory,
                               double eps_floor);

// Paste one prototype frame at a hypothesis location: the probability of a
// frame pixel equals the prototype probability of the nearest model pixel
// after the inverse scale/translation; zero outside the support region.
// active=false forces an all-zero map.
PixelMap paste_shape(const Prototype& proto, const PrototypeSet& set, int t,
                     double x, double y, double s, int frame_w, int frame_h,
                     bool active = true);

// Noisy-OR combination: 1 - (1-p0) * prod(1 - p_h).
double noisy_or(const std::vector<double>& per_hypothesis, double p0);

// Geometry shared by pasting and the objective builder: the model pixel that
// a frame pixel lands on, or false if it falls outside the grid.
bool frame_to_model_pixel(double hx, double hy, double s, int grid_w, int grid_h,
                          int px, int py, int* gx, int* gy);

}  // namespace stvp
