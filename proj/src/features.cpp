#include "stvp/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace stvp {

double box_iou(const Box& a, const Box& b) {
    const double ix = std::max(0.0, std::min(a.x1(), b.x1()) - std::max(a.x0(), b.x0()));
    const double iy = std::max(0.0, std::min(a.y1(), b.y1()) - std::max(a.y0(), b.y0()));
    const double inter = ix * iy;
    const double uni = a.w * a.h + b.w * b.h - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

namespace {

double sample_bilinear(const double* img, int width, int height, double x, double y) {
    x = std::clamp(x, 0.0, double(width - 1));
    y = std::clamp(y, 0.0, double(height - 1));
    const int x0 = std::min(int(x), width - 2 >= 0 ? width - 2 : 0);
    const int y0 = std::min(int(y), height - 2 >= 0 ? height - 2 : 0);
    const int x1 = std::min(x0 + 1, width - 1);
    const int y1 = std::min(y0 + 1, height - 1);
    const double fx = x - x0;
    const double fy = y - y0;
    const double v00 = img[y0 * width + x0];
    const double v10 = img[y0 * width + x1];
    const double v01 = img[y1 * width + x0];
    const double v11 = img[y1 * width + x1];
    return (1 - fy) * ((1 - fx) * v00 + fx * v10) + fy * ((1 - fx) * v01 + fx * v11);
}

std::vector<double> resample_from(const double* img, int width, int height,
                                  const Box& box, int grid_w, int grid_h) {
    std::vector<double> patch(static_cast<size_t>(grid_w) * grid_h);
    // Grid point (i, j) samples the center of cell (i, j) of a uniform
    // subdivision of the box, so a grid matching the box reproduces pixels.
    // Pixel centers sit at integer coordinates.
    for (int j = 0; j < grid_h; ++j) {
        for (int i = 0; i < grid_w; ++i) {
            const double u = (i + 0.5) / grid_w;
            const double v = (j + 0.5) / grid_h;
            const double x = box.x0() + u * box.w;
            const double y = box.y0() + v * box.h;
            patch[static_cast<size_t>(j) * grid_w + i] =
                sample_bilinear(img, width, height, x, y);
        }
    }
    return patch;
}

// Central differences inside, one-sided at the grid borders.
void spatial_derivatives(const std::vector<double>& patch, int w, int h,
                         std::vector<double>& dx, std::vector<double>& dy) {
    dx.resize(patch.size());
    dy.resize(patch.size());
    for (int j = 0; j < h; ++j) {
        for (int i = 0; i < w; ++i) {
            const size_t idx = static_cast<size_t>(j) * w + i;
            if (w == 1) dx[idx] = 0.0;
            else if (i == 0) dx[idx] = patch[idx + 1] - patch[idx];
            else if (i == w - 1) dx[idx] = patch[idx] - patch[idx - 1];
            else dx[idx] = 0.5 * (patch[idx + 1] - patch[idx - 1]);
            if (h == 1) dy[idx] = 0.0;
            else if (j == 0) dy[idx] = patch[idx + w] - patch[idx];
            else if (j == h - 1) dy[idx] = patch[idx] - patch[idx - w];
            else dy[idx] = 0.5 * (patch[idx + w] - patch[idx - w]);
        }
    }
}

}  // namespace

std::vector<double> resample_patch(const VideoTensor& video, int t, const Box& box,
                                   int grid_w, int grid_h) {
    return resample_from(video.frame(t), video.width, video.height, box, grid_w, grid_h);
}

Descriptor compute_descriptor(const VideoTensor& video, int t0,
                              const std::vector<Box>& boxes, int grid_w, int grid_h) {
    const int n = static_cast<int>(boxes.size());
    if (n < 1) throw std::invalid_argument("compute_descriptor: empty window");
    for (int k = 0; k < n; ++k) {
        const Box& b = boxes[k];
        if (b.x0() < -0.5 || b.y0() < -0.5 || b.x1() > video.width - 0.5 ||
            b.y1() > video.height - 0.5)
            throw std::out_of_range("compute_descriptor: box outside frame at frame " +
                                    std::to_string(t0 + k));
        if (t0 + k < 0 || t0 + k >= video.frames)
            throw std::out_of_range("compute_descriptor: frame index out of range: " +
                                    std::to_string(t0 + k));
    }

    const size_t cell = static_cast<size_t>(grid_w) * grid_h;
    std::vector<std::vector<double>> patches(n);
    for (int k = 0; k < n; ++k)
        patches[k] = resample_patch(video, t0 + k, boxes[k], grid_w, grid_h);

    Descriptor d;
    d.raw.resize(cell * 3 * n);
    std::vector<double> dx, dy;
    for (int k = 0; k < n; ++k) {
        spatial_derivatives(patches[k], grid_w, grid_h, dx, dy);
        double* out = d.raw.data() + cell * 3 * k;
        for (size_t i = 0; i < cell; ++i) {
            out[i] = dx[i];
            out[cell + i] = dy[i];
            // forward difference in time; backward at the last frame
            const int a = (k < n - 1) ? k : k - 1;
            out[2 * cell + i] = (n == 1) ? 0.0 : patches[a + 1][i] - patches[a][i];
        }
    }
    return d;
}

std::vector<double> compute_frame_descriptor(const PixelMap& frame, const Box& box,
                                             int grid_w, int grid_h) {
    std::vector<double> patch =
        resample_from(frame.values.data(), frame.width, frame.height, box, grid_w, grid_h);
    std::vector<double> dx, dy;
    spatial_derivatives(patch, grid_w, grid_h, dx, dy);
    std::vector<double> out(dx.size() * 2);
    std::copy(dx.begin(), dx.end(), out.begin());
    std::copy(dy.begin(), dy.end(), out.begin() + dx.size());
    return out;
}

PcaBasis fit_pca(const std::vector<std::vector<double>>& descriptors,
                 double variance_target) {
    if (descriptors.size() < 2)
        throw std::invalid_argument("fit_pca: need at least 2 descriptors");
    if (!(variance_target > 0.0 && variance_target <= 1.0))
        throw std::invalid_argument("fit_pca: variance_target outside (0,1]");
    const int n = static_cast<int>(descriptors.size());
    const int dim = static_cast<int>(descriptors[0].size());
    for (const auto& d : descriptors)
        if (static_cast<int>(d.size()) != dim)
            throw std::invalid_argument("fit_pca: inconsistent descriptor lengths");

    Eigen::MatrixXd X(n, dim);
    for (int i = 0; i < n; ++i)
        X.row(i) = Eigen::Map<const Eigen::VectorXd>(descriptors[i].data(), dim);

    PcaBasis basis;
    basis.variance_target = variance_target;
    basis.mean = X.colwise().mean();
    X.rowwise() -= basis.mean.transpose();

    // Work in the smaller space: the Gram matrix when samples are fewer than
    // dimensions, the covariance otherwise.
    Eigen::VectorXd evals;    // descending, scaled as covariance eigenvalues
    Eigen::MatrixXd evecs;    // dim x r
    const double denom = n - 1;
    if (n <= dim) {
        Eigen::MatrixXd G = X * X.transpose() / denom;  // n x n
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
        evals = es.eigenvalues().reverse();
        Eigen::MatrixXd U = es.eigenvectors().rowwise().reverse();
        evecs.resize(dim, n);
        for (int j = 0; j < n; ++j) {
            const double lam = evals[j];
            if (lam > 0)
                evecs.col(j) = X.transpose() * U.col(j) / std::sqrt(lam * denom);
            else
                evecs.col(j).setZero();
        }
    } else {
        Eigen::MatrixXd C = X.transpose() * X / denom;  // dim x dim
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
        evals = es.eigenvalues().reverse();
        evecs = es.eigenvectors().rowwise().reverse();
    }

    const double total = std::max(evals.sum(), 0.0);
    const double eps = 1e-12 * std::max(1.0, evals.size() > 0 ? evals[0] : 0.0);
    if (total <= eps) {
        // degenerate: all descriptors identical
        basis.components.resize(dim, 0);
        basis.eigenvalues.resize(0);
        basis.retained_variance = 1.0;
        return basis;
    }

    int k = 0;
    double cum = 0.0;
    for (int j = 0; j < evals.size(); ++j) {
        if (evals[j] <= eps) break;  // numerical rank reached
        cum += evals[j];
        ++k;
        if (cum / total >= variance_target) break;
    }

    basis.components = evecs.leftCols(k);
    basis.eigenvalues = evals.head(k);
    basis.retained_variance = cum / total;

    // Deterministic sign: largest-magnitude entry of each component positive.
    for (int j = 0; j < k; ++j) {
        int arg = 0;
        basis.components.col(j).cwiseAbs().maxCoeff(&arg);
        if (basis.components(arg, j) < 0) basis.components.col(j) *= -1.0;
    }
    return basis;
}

std::vector<double> project(const PcaBasis& basis, const std::vector<double>& raw) {
    if (static_cast<int>(raw.size()) != basis.dim())
        throw std::invalid_argument("project: descriptor length mismatch");
    Eigen::Map<const Eigen::VectorXd> d(raw.data(), raw.size());
    Eigen::VectorXd c = basis.components.transpose() * (d - basis.mean);
    return {c.data(), c.data() + c.size()};
}

std::vector<double> reconstruct(const PcaBasis& basis, const std::vector<double>& coeffs) {
    if (static_cast<int>(coeffs.size()) != basis.k())
        throw std::invalid_argument("reconstruct: coefficient length mismatch");
    Eigen::Map<const Eigen::VectorXd> c(coeffs.data(), coeffs.size());
    Eigen::VectorXd d = basis.mean + basis.components * c;
    return {d.data(), d.data() + d.size()};
}

Eigen::VectorXd PcaBasis::whiten(const Eigen::VectorXd& coeffs) const {
    Eigen::VectorXd out = coeffs;
    for (int i = 0; i < out.size(); ++i)
        out[i] /= std::sqrt(std::max(eigenvalues[i], 1e-12));
    return out;
}

void PcaBasis::save(std::ostream& out) const {
    out << "STVP-PCA 1\n"
        << "dim " << dim() << "\nk " << k() << "\nvariance " << retained_variance
        << "\ntarget " << variance_target << "\nend\n";
    auto put = [&](const double* p, size_t count) {
        out.write(reinterpret_cast<const char*>(p),
                  static_cast<std::streamsize>(count * sizeof(double)));
    };
    put(mean.data(), mean.size());
    put(components.data(), static_cast<size_t>(components.size()));
    put(eigenvalues.data(), eigenvalues.size());
}

void PcaBasis::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("PcaBasis::save: cannot open " + path);
    save(out);
}

PcaBasis PcaBasis::load(std::istream& in) {
    std::string magic, version;
    in >> magic >> version;
    if (magic != "STVP-PCA") throw std::runtime_error("bad PCA header");
    PcaBasis b;
    int dim = 0, k = 0;
    std::string key;
    while (in >> key && key != "end") {
        if (key == "dim") in >> dim;
        else if (key == "k") in >> k;
        else if (key == "variance") in >> b.retained_variance;
        else if (key == "target") in >> b.variance_target;
    }
    in.get();  // newline after "end"
    b.mean.resize(dim);
    b.components.resize(dim, k);
    b.eigenvalues.resize(k);
    auto get = [&](double* p, size_t count) {
        in.read(reinterpret_cast<char*>(p),
                static_cast<std::streamsize>(count * sizeof(double)));
        if (!in) throw std::runtime_error("truncated PCA data");
    };
    get(b.mean.data(), dim);
    get(b.components.data(), static_cast<size_t>(dim) * k);
    get(b.eigenvalues.data(), k);
    return b;
}

PcaBasis PcaBasis::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("PcaBasis::load: cannot open " + path);
    return load(in);
}

}  // namespace stvp
