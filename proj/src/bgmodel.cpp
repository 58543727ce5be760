#include "stvp/bgmodel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stvp {

namespace {

double l1_norm(const Eigen::MatrixXd& m) { return m.cwiseAbs().sum(); }

Eigen::MatrixXd shrink(const Eigen::MatrixXd& m, double tau) {
    return m.unaryExpr([tau](double v) {
        return v > tau ? v - tau : (v < -tau ? v + tau : 0.0);
    });
}

}  // namespace

BackgroundModel rpca(const Eigen::MatrixXd& D, const RpcaOptions& opts) {
    const Eigen::Index rows = D.rows(), cols = D.cols();
    const double lambda =
        opts.lambda > 0 ? opts.lambda : 1.0 / std::sqrt(double(std::max(rows, cols)));

    BackgroundModel model;
    const double norm_D = std::max(D.norm(), 1e-12);
    // Dual scaling as in the standard inexact ALM initialization.
    const double j_scale = std::max(D.operatorNorm(), D.cwiseAbs().maxCoeff() / lambda);
    Eigen::MatrixXd Y = D / std::max(j_scale, 1e-12);
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(rows, cols);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, cols);
    double mu = 1.25 / std::max(D.operatorNorm(), 1e-12);
    const double mu_max = mu * 1e7;
    const double rho = 1.6;

    auto objective = [&](const Eigen::MatrixXd& B, double* nuc, int* rank) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
        const auto& sv = svd.singularValues();
        if (nuc) *nuc = sv.sum();
        if (rank) {
            const double cut = 1e-9 * std::max(1.0, sv.size() ? sv[0] : 0.0);
            *rank = int((sv.array() > cut).count());
        }
        return sv.sum() + lambda * l1_norm(D - B);
    };

    Eigen::MatrixXd best_B = D;  // residual zero; finite objective
    double best_obj = objective(best_B, nullptr, nullptr);
    model.objective_trace.push_back(best_obj);

    model.converged = false;
    for (int it = 0; it < opts.max_iter; ++it) {
        // E-step: soft-threshold the residual against the current background.
        E = shrink(D - A + Y / mu, lambda / mu);
        // A-step: singular value thresholding.
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(D - E + Y / mu,
                                              Eigen::ComputeThinU | Eigen::ComputeThinV);
        Eigen::VectorXd sv = svd.singularValues();
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            sv[i] = std::max(sv[i] - 1.0 / mu, 0.0);
        A = svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose();

        const Eigen::MatrixXd residual = D - A - E;
        Y += mu * residual;
        mu = std::min(mu * rho, mu_max);

        // The background iterate satisfies I = B + E exactly.
        const Eigen::MatrixXd B = D - E;
        const double obj = objective(B, nullptr, nullptr);
        if (obj < best_obj) {
            best_obj = obj;
            best_B = B;
        }
        model.objective_trace.push_back(best_obj);

        const double primal = residual.norm() / norm_D;
        const double rel_change =
            model.objective_trace.size() >= 2
                ? std::abs(model.objective_trace.end()[-2] - best_obj) /
                      std::max(best_obj, 1e-12)
                : 1.0;
        if (primal < 1e-7 && rel_change < opts.tol) {
            model.converged = true;
            break;
        }
    }

    model.B = best_B;
    objective(model.B, &model.nuclear_norm, &model.rank);
    return model;
}

BackgroundModel subtract_background(const VideoTensor& video, int window,
                                    const RpcaOptions& opts) {
    if (window < 2)
        throw std::invalid_argument("subtract_background: window must be >= 2");
    if (video.frames < window)
        throw std::invalid_argument("subtract_background: video shorter than window");

    const Eigen::Index pixels = static_cast<Eigen::Index>(video.frame_size());
    Eigen::MatrixXd D(pixels, window);
    for (int t = 0; t < window; ++t)
        D.col(t) = Eigen::Map<const Eigen::VectorXd>(video.frame(t), pixels);
    return rpca(D, opts);
}

ForegroundField foreground_probability(const VideoTensor& video,
                                       const BackgroundModel& bg,
                                       double lambda_sig) {
    if (bg.B.rows() != static_cast<Eigen::Index>(video.frame_size()) ||
        bg.B.cols() > video.frames)
        throw std::invalid_argument("foreground_probability: shape mismatch");

    ForegroundField field;
    field.width = video.width;
    field.height = video.height;
    field.frames = static_cast<int>(bg.B.cols());
    const size_t n = video.frame_size() * field.frames;
    field.prob.resize(n);
    field.mask.resize(n);
    for (int t = 0; t < field.frames; ++t) {
        const double* frame = video.frame(t);
        for (size_t i = 0; i < video.frame_size(); ++i) {
            const double diff = std::abs(frame[i] - bg.B(static_cast<Eigen::Index>(i), t));
            const double p = 2.0 / (1.0 + std::exp(-lambda_sig * diff)) - 1.0;
            const size_t idx = video.frame_size() * t + i;
            field.prob[idx] = p;
            field.mask[idx] = p > 0.5 ? 1 : 0;
        }
    }
    return field;
}

}  // namespace stvp
