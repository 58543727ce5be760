#include "stvp/flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stvp {

namespace {

inline double px(const std::vector<double>& img, int w, int h, int x, int y) {
    x = std::clamp(x, 0, w - 1);
    y = std::clamp(y, 0, h - 1);
    return img[static_cast<size_t>(y) * w + x];
}

}  // namespace

double FlowField::sample_u(double x, double y) const {
    x = std::clamp(x, 0.0, double(width - 1));
    y = std::clamp(y, 0.0, double(height - 1));
    const int x0 = std::min(int(x), std::max(width - 2, 0));
    const int y0 = std::min(int(y), std::max(height - 2, 0));
    const double fx = x - x0, fy = y - y0;
    const int x1 = std::min(x0 + 1, width - 1), y1 = std::min(y0 + 1, height - 1);
    return (1 - fy) * ((1 - fx) * u_at(x0, y0) + fx * u_at(x1, y0)) +
           fy * ((1 - fx) * u_at(x0, y1) + fx * u_at(x1, y1));
}

double FlowField::sample_v(double x, double y) const {
    x = std::clamp(x, 0.0, double(width - 1));
    y = std::clamp(y, 0.0, double(height - 1));
    const int x0 = std::min(int(x), std::max(width - 2, 0));
    const int y0 = std::min(int(y), std::max(height - 2, 0));
    const double fx = x - x0, fy = y - y0;
    const int x1 = std::min(x0 + 1, width - 1), y1 = std::min(y0 + 1, height - 1);
    return (1 - fy) * ((1 - fx) * v_at(x0, y0) + fx * v_at(x1, y0)) +
           fy * ((1 - fx) * v_at(x0, y1) + fx * v_at(x1, y1));
}

FlowField horn_schunck(const PixelMap& prev, const PixelMap& next, double alpha,
                       int iterations) {
    if (prev.width != next.width || prev.height != next.height)
        throw std::invalid_argument("horn_schunck: frame size mismatch");
    const int w = prev.width, h = prev.height;
    const size_t n = static_cast<size_t>(w) * h;
    const std::vector<double>& a = prev.values;
    const std::vector<double>& b = next.values;

    // Derivative estimates averaged over the 2x2x2 cube, as in the classic
    // formulation.
    std::vector<double> Ex(n), Ey(n), Et(n);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const size_t i = static_cast<size_t>(y) * w + x;
            Ex[i] = 0.25 * (px(a, w, h, x + 1, y) - px(a, w, h, x, y) +
                            px(a, w, h, x + 1, y + 1) - px(a, w, h, x, y + 1) +
                            px(b, w, h, x + 1, y) - px(b, w, h, x, y) +
                            px(b, w, h, x + 1, y + 1) - px(b, w, h, x, y + 1));
            Ey[i] = 0.25 * (px(a, w, h, x, y + 1) - px(a, w, h, x, y) +
                            px(a, w, h, x + 1, y + 1) - px(a, w, h, x + 1, y) +
                            px(b, w, h, x, y + 1) - px(b, w, h, x, y) +
                            px(b, w, h, x + 1, y + 1) - px(b, w, h, x + 1, y));
            Et[i] = 0.25 * (px(b, w, h, x, y) - px(a, w, h, x, y) +
                            px(b, w, h, x + 1, y) - px(a, w, h, x + 1, y) +
                            px(b, w, h, x, y + 1) - px(a, w, h, x, y + 1) +
                            px(b, w, h, x + 1, y + 1) - px(a, w, h, x + 1, y + 1));
        }
    }

    FlowField flow;
    flow.width = w;
    flow.height = h;
    flow.u.assign(n, 0.0);
    flow.v.assign(n, 0.0);
    std::vector<double> ubar(n), vbar(n);
    const double alpha2 = alpha * alpha;

    auto local_average = [&](const std::vector<double>& f, std::vector<double>& out) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                out[static_cast<size_t>(y) * w + x] =
                    (1.0 / 6.0) * (px(f, w, h, x - 1, y) + px(f, w, h, x + 1, y) +
                                   px(f, w, h, x, y - 1) + px(f, w, h, x, y + 1)) +
                    (1.0 / 12.0) * (px(f, w, h, x - 1, y - 1) + px(f, w, h, x + 1, y - 1) +
                                    px(f, w, h, x - 1, y + 1) + px(f, w, h, x + 1, y + 1));
            }
        }
    };

    for (int it = 0; it < iterations; ++it) {
        local_average(flow.u, ubar);
        local_average(flow.v, vbar);
        for (size_t i = 0; i < n; ++i) {
            const double t = (Ex[i] * ubar[i] + Ey[i] * vbar[i] + Et[i]) /
                             (alpha2 + Ex[i] * Ex[i] + Ey[i] * Ey[i]);
            flow.u[i] = ubar[i] - Ex[i] * t;
            flow.v[i] = vbar[i] - Ey[i] * t;
        }
    }
    return flow;
}

}  // namespace stvp
