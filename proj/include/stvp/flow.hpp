#pragma once

#include <vector>

#include "stvp/video_io.hpp"

namespace stvp {

// Dense optical flow field between two frames.
struct FlowField {
    int width = 0;
    int height = 0;
    std::vector<double> u;  // horizontal displacement, px/frame
    std::vector<double> v;  // vertical displacement

    double u_at(int x, int y) const { return u[static_cast<size_t>(y) * width + x]; }
    double v_at(int x, int y) const { return v[static_cast<size_t>(y) * width + x]; }
    // Bilinear lookup at real coordinates, clamped to the border.
    double sample_u(double x, double y) const;
    double sample_v(double x, double y) const;
};

// Classic Horn-Schunck flow: quadratic data + smoothness terms solved by
// Jacobi iterations of the coupled update equations. alpha is the smoothness
// weight (enters squared).
FlowField horn_schunck(const PixelMap& prev, const PixelMap& next, double alpha,
                       int iterations);

}  // namespace stvp
