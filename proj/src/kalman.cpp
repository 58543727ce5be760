#include "stvp/kalman.hpp"

#include <Eigen/Dense>

#include <stdexcept>

namespace stvp {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat36 = Eigen::Matrix<double, 3, 6>;
using Mat3 = Eigen::Matrix<double, 3, 3>;

std::vector<std::array<double, 3>> smooth_trajectory(
    const std::vector<std::optional<std::array<double, 3>>>& observations,
    double process_var, double observation_var) {
    const int n = static_cast<int>(observations.size());
    int first = -1, second = -1, count = 0;
    for (int i = 0; i < n; ++i) {
        if (observations[i]) {
            ++count;
            if (first < 0) first = i;
            else if (second < 0) second = i;
        }
    }
    if (count < 2)
        throw std::invalid_argument("smooth_trajectory: need at least 2 observations");

    Mat6 F = Mat6::Identity();
    F(0, 3) = F(1, 4) = F(2, 5) = 1.0;  // unit frame step
    Mat36 H = Mat36::Zero();
    H(0, 0) = H(1, 1) = H(2, 2) = 1.0;
    const Mat6 Q = Mat6::Identity() * process_var;
    const Mat3 R = Mat3::Identity() * observation_var;

    // Initial state from the first two observations.
    Vec6 x0 = Vec6::Zero();
    const auto& o1 = *observations[first];
    const auto& o2 = *observations[second];
    const double dt = second - first;
    for (int d = 0; d < 3; ++d) {
        x0[d] = o1[d];
        x0[3 + d] = (o2[d] - o1[d]) / dt;
    }
    Mat6 P0 = Mat6::Identity() * 1e4;

    // Forward pass, storing predicted and filtered moments for RTS.
    std::vector<Vec6> x_pred(n), x_filt(n);
    std::vector<Mat6> P_pred(n), P_filt(n);
    Vec6 x = x0;
    Mat6 P = P0;
    for (int t = 0; t < n; ++t) {
        if (t > 0) {
            x = F * x;
            P = F * P * F.transpose() + Q;
        }
        x_pred[t] = x;
        P_pred[t] = P;
        if (observations[t]) {
            Eigen::Vector3d z(observations[t]->at(0), observations[t]->at(1),
                              observations[t]->at(2));
            const Eigen::Vector3d innov = z - H * x;
            const Mat3 S = H * P * H.transpose() + R;
            const Eigen::Matrix<double, 6, 3> K = P * H.transpose() * S.inverse();
            x = x + K * innov;
            P = (Mat6::Identity() - K * H) * P;
        }
        x_filt[t] = x;
        P_filt[t] = P;
    }

    // RTS backward pass.
    std::vector<Vec6> x_smooth(n);
    x_smooth[n - 1] = x_filt[n - 1];
    Mat6 P_smooth = P_filt[n - 1];
    for (int t = n - 2; t >= 0; --t) {
        const Mat6 C = P_filt[t] * F.transpose() * P_pred[t + 1].inverse();
        x_smooth[t] = x_filt[t] + C * (x_smooth[t + 1] - x_pred[t + 1]);
        P_smooth = P_filt[t] + C * (P_smooth - P_pred[t + 1]) * C.transpose();
    }

    std::vector<std::array<double, 3>> out(n);
    for (int t = 0; t < n; ++t) {
        if (observations[t]) {
            out[t] = *observations[t];
        } else {
            out[t] = {x_smooth[t][0], x_smooth[t][1], x_smooth[t][2]};
        }
    }
    return out;
}

}  // namespace stvp
