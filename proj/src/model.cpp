#include "stvp/model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace stvp {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;

void put_doubles(std::ostream& out, const double* p, size_t n) {
    out.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
}

void get_doubles(std::istream& in, double* p, size_t n) {
    in.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
    if (!in) throw std::runtime_error("prototype set: truncated binary block");
}

void save_density(std::ostream& out, const ParzenDensity& d) {
    out << "density " << (d.uniform ? 1 : 0) << " " << d.samples.rows() << " "
        << d.dim() << "\n";
    if (!d.uniform) {
        put_doubles(out, d.samples.data(), static_cast<size_t>(d.samples.size()));
        put_doubles(out, d.bandwidth.data(), d.bandwidth.size());
    }
}

ParzenDensity load_density(std::istream& in) {
    std::string tag;
    int uniform = 0;
    Eigen::Index n = 0, dim = 0;
    in >> tag >> uniform >> n >> dim;
    if (tag != "density") throw std::runtime_error("prototype set: bad density block");
    in.get();  // newline
    ParzenDensity d;
    d.uniform = uniform != 0;
    d.samples.resize(n, dim);
    d.bandwidth = Eigen::VectorXd::Ones(dim);
    if (!d.uniform) {
        get_doubles(in, d.samples.data(), static_cast<size_t>(d.samples.size()));
        get_doubles(in, d.bandwidth.data(), dim);
    }
    return d;
}

}  // namespace

double ParzenDensity::evaluate(const Eigen::VectorXd& x) const {
    if (uniform) return 1.0;
    if (x.size() != bandwidth.size())
        throw std::invalid_argument("ParzenDensity::evaluate: dimension mismatch");
    const Eigen::Index n = samples.rows();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double k = 1.0;
        for (Eigen::Index d = 0; d < x.size(); ++d) {
            const double z = (x[d] - samples(i, d)) / bandwidth[d];
            k *= kInvSqrt2Pi / bandwidth[d] * std::exp(-0.5 * z * z);
        }
        acc += k;
    }
    return acc / double(n);
}

ParzenDensity ParzenDensity::fit(const Eigen::MatrixXd& samples) {
    if (samples.rows() < 1)
        throw std::invalid_argument("ParzenDensity::fit: no samples");
    ParzenDensity d;
    d.uniform = false;
    d.samples = samples;
    const Eigen::Index n = samples.rows();
    const Eigen::Index dim = samples.cols();
    d.bandwidth.resize(dim);
    const double factor =
        std::pow(4.0 / ((dim + 2.0) * double(n)), 1.0 / (dim + 4.0));
    for (Eigen::Index j = 0; j < dim; ++j) {
        double sigma = 0.0;
        if (n > 1) {
            const double mean = samples.col(j).mean();
            sigma = std::sqrt((samples.col(j).array() - mean).square().sum() / (n - 1));
        }
        d.bandwidth[j] = std::max(sigma * factor, 1e-3);
    }
    return d;
}

double Prototype::prob_at(int t, int gx, int gy, int grid_w, int grid_h) const {
    return 1.0 - std::exp(-shape_at(t, gx, gy, grid_w, grid_h));
}

std::vector<double> match_probability(const PrototypeSet& set,
                                      const std::vector<double>& descriptor) {
    const int M = set.size();
    std::vector<double> logits(M);
    for (int m = 0; m < M; ++m) {
        const auto& dm = set.prototypes[m].descriptor;
        if (dm.size() != descriptor.size())
            throw std::invalid_argument("match_probability: descriptor length mismatch");
        double delta = 0.0;
        for (size_t i = 0; i < dm.size(); ++i) {
            const double diff = descriptor[i] - dm[i];
            delta += diff * diff;
        }
        logits[m] = -set.beta * delta;
    }
    const double top = *std::max_element(logits.begin(), logits.end());
    double z = 0.0;
    for (double& l : logits) {
        l = std::exp(l - top);
        z += l;
    }
    for (double& l : logits) l /= z;
    return logits;
}

double log_partition(const PrototypeSet& set, const std::vector<double>& descriptor) {
    const int M = set.size();
    double top = -std::numeric_limits<double>::infinity();
    std::vector<double> logits(M);
    for (int m = 0; m < M; ++m) {
        const auto& dm = set.prototypes[m].descriptor;
        double delta = 0.0;
        for (size_t i = 0; i < dm.size(); ++i) {
            const double diff = descriptor[i] - dm[i];
            delta += diff * diff;
        }
        logits[m] = -set.beta * delta;
        top = std::max(top, logits[m]);
    }
    double z = 0.0;
    for (double l : logits) z += std::exp(l - top);
    return top + std::log(z);
}

double location_velocity_prior(const Prototype& proto,
                               const std::vector<std::array<double, 3>>& trajectory,
                               double eps_floor) {
    if (trajectory.size() < 2)
        throw std::invalid_argument("location_velocity_prior: trajectory needs >= 2 frames");
    const auto& last = trajectory.back();
    const auto& prev = trajectory[trajectory.size() - 2];
    Eigen::Vector3d loc(last[0], last[1], last[2]);
    Eigen::Vector3d vel(last[0] - prev[0], last[1] - prev[1], last[2] - prev[2]);
    const double p = proto.loc.evaluate(loc) * proto.vel.evaluate(vel);
    return std::max(p, eps_floor);
}

bool frame_to_model_pixel(double hx, double hy, double s, int grid_w, int grid_h,
                          int px, int py, int* gx, int* gy) {
    const long ix = std::lround((px - hx) / s + grid_w / 2.0);
    const long iy = std::lround((py - hy) / s + grid_h / 2.0);
    if (ix < 0 || ix >= grid_w || iy < 0 || iy >= grid_h) return false;
    *gx = static_cast<int>(ix);
    *gy = static_cast<int>(iy);
    return true;
}

PixelMap paste_shape(const Prototype& proto, const PrototypeSet& set, int t,
                     double x, double y, double s, int frame_w, int frame_h,
                     bool active) {
    PixelMap map(frame_w, frame_h, 0.0);
    if (!active) return map;
    // Only pixels inside the scaled support box can map onto the grid.
    const int x_lo = std::max(0, int(std::floor(x - s * set.grid_w / 2.0)) - 1);
    const int x_hi = std::min(frame_w - 1, int(std::ceil(x + s * set.grid_w / 2.0)) + 1);
    const int y_lo = std::max(0, int(std::floor(y - s * set.grid_h / 2.0)) - 1);
    const int y_hi = std::min(frame_h - 1, int(std::ceil(y + s * set.grid_h / 2.0)) + 1);
    for (int py = y_lo; py <= y_hi; ++py) {
        for (int px = x_lo; px <= x_hi; ++px) {
            int gx, gy;
            if (frame_to_model_pixel(x, y, s, set.grid_w, set.grid_h, px, py, &gx, &gy))
                map.at(px, py) = proto.prob_at(t, gx, gy, set.grid_w, set.grid_h);
        }
    }
    return map;
}

double noisy_or(const std::vector<double>& per_hypothesis, double p0) {
    if (!(p0 > 0.0 && p0 < 1.0))
        throw std::invalid_argument("noisy_or: P0 outside (0,1)");
    double not_fg = 1.0 - p0;
    for (double p : per_hypothesis) {
        if (p < 0.0 || p > 1.0)
            throw std::invalid_argument("noisy_or: probability outside [0,1]");
        not_fg *= 1.0 - p;
    }
    return 1.0 - not_fg;
}

void PrototypeSet::save(std::ostream& out) const {
    out << "STVP-PROTO 1\n"
        << "M " << size() << "\n"
        << "grid " << grid_w << " " << grid_h << "\n"
        << "tau " << tau << "\n"
        << "beta " << beta << "\n"
        << "end\n";
    basis.save(out);
    for (const auto& p : prototypes) {
        out << "proto " << p.shape.size() << " " << p.descriptor.size() << " "
            << (p.frozen ? 1 : 0) << "\n";
        put_doubles(out, p.shape.data(), p.shape.size());
        put_doubles(out, p.descriptor.data(), p.descriptor.size());
        save_density(out, p.loc);
        save_density(out, p.vel);
    }
}

PrototypeSet PrototypeSet::load(std::istream& in) {
    std::string magic, version;
    in >> magic >> version;
    if (magic != "STVP-PROTO") throw std::runtime_error("bad prototype set header");
    PrototypeSet set;
    int M = 0;
    std::string key;
    while (in >> key && key != "end") {
        if (key == "M") in >> M;
        else if (key == "grid") in >> set.grid_w >> set.grid_h;
        else if (key == "tau") in >> set.tau;
        else if (key == "beta") in >> set.beta;
    }
    in.get();
    set.basis = PcaBasis::load(in);
    set.prototypes.resize(M);
    for (auto& p : set.prototypes) {
        std::string tag;
        size_t shape_n = 0, desc_n = 0;
        int frozen = 0;
        in >> tag >> shape_n >> desc_n >> frozen;
        if (tag != "proto") throw std::runtime_error("bad prototype block");
        in.get();
        p.shape.resize(shape_n);
        p.descriptor.resize(desc_n);
        p.frozen = frozen != 0;
        get_doubles(in, p.shape.data(), shape_n);
        get_doubles(in, p.descriptor.data(), desc_n);
        p.loc = load_density(in);
        p.vel = load_density(in);
    }
    return set;
}

}  // namespace stvp
