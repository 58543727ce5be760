#include "stvp/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stvp {

namespace {

std::vector<double> parse_scale_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    if (out.empty()) throw std::runtime_error("config: empty scale list");
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

void Config::set(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw std::runtime_error("config: expected key=value, got '" + assignment + "'");
    const std::string key = trim(assignment.substr(0, eq));
    const std::string val = trim(assignment.substr(eq + 1));

    auto d = [&] { return std::stod(val); };
    auto i = [&] { return std::stoi(val); };

    if (key == "window") window = i();
    else if (key == "window_stride") window_stride = i();
    else if (key == "lambda_sig") lambda_sig = d();
    else if (key == "rpca_lambda") rpca_lambda = d();
    else if (key == "rpca_tol") rpca_tol = d();
    else if (key == "rpca_max_iter") rpca_max_iter = i();
    else if (key == "grid_w") grid_w = i();
    else if (key == "grid_h") grid_h = i();
    else if (key == "variance_target") variance_target = d();
    else if (key == "beta") beta = d();
    else if (key == "p0") p0 = d();
    else if (key == "eps_loc") eps_loc = d();
    else if (key == "scales") scales = parse_scale_list(val);
    else if (key == "nms_overlap") nms_overlap = d();
    else if (key == "keep_prior") keep_prior = d();
    else if (key == "detect_stride") detect_stride = i();
    else if (key == "min_fg_frac") min_fg_frac = d();
    else if (key == "group_threshold") group_threshold = d();
    else if (key == "edge_threshold") edge_threshold = d();
    else if (key == "kalman_q") kalman_q = d();
    else if (key == "kalman_r") kalman_r = d();
    else if (key == "hs_alpha") hs_alpha = d();
    else if (key == "hs_iters") hs_iters = i();
    else if (key == "solver_tol") solver_tol = d();
    else if (key == "solver_max_iter") solver_max_iter = i();
    else if (key == "decode_threshold") decode_threshold = d();
    else if (key == "solver_fixed_step") solver_fixed_step = (val == "1" || val == "true");
    else if (key == "em_rounds") em_rounds = i();
    else if (key == "em_tol") em_tol = d();
    else if (key == "shape_iters") shape_iters = i();
    else if (key == "min_cluster") min_cluster = i();
    else if (key == "init_cluster_factor") init_cluster_factor = i();
    else if (key == "coverage") coverage = d();
    else if (key == "threads") threads = i();
    else if (key == "seed") seed = std::stoull(val);
    else throw std::runtime_error("config: unknown key '" + key + "'");
}

void Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        set(line);
    }
}

std::string Config::to_text() const {
    std::ostringstream out;
    out << "window=" << window << "\n";
    out << "window_stride=" << window_stride << "\n";
    out << "lambda_sig=" << lambda_sig << "\n";
    out << "rpca_lambda=" << rpca_lambda << "\n";
    out << "rpca_tol=" << rpca_tol << "\n";
    out << "rpca_max_iter=" << rpca_max_iter << "\n";
    out << "grid_w=" << grid_w << "\n";
    out << "grid_h=" << grid_h << "\n";
    out << "variance_target=" << variance_target << "\n";
    out << "beta=" << beta << "\n";
    out << "p0=" << p0 << "\n";
    out << "eps_loc=" << eps_loc << "\n";
    out << "scales=";
    for (size_t i = 0; i < scales.size(); ++i) out << (i ? "," : "") << scales[i];
    out << "\n";
    out << "nms_overlap=" << nms_overlap << "\n";
    out << "keep_prior=" << keep_prior << "\n";
    out << "detect_stride=" << detect_stride << "\n";
    out << "min_fg_frac=" << min_fg_frac << "\n";
    out << "group_threshold=" << group_threshold << "\n";
    out << "edge_threshold=" << edge_threshold << "\n";
    out << "kalman_q=" << kalman_q << "\n";
    out << "kalman_r=" << kalman_r << "\n";
    out << "hs_alpha=" << hs_alpha << "\n";
    out << "hs_iters=" << hs_iters << "\n";
    out << "solver_tol=" << solver_tol << "\n";
    out << "solver_max_iter=" << solver_max_iter << "\n";
    out << "decode_threshold=" << decode_threshold << "\n";
    out << "solver_fixed_step=" << (solver_fixed_step ? 1 : 0) << "\n";
    out << "em_rounds=" << em_rounds << "\n";
    out << "em_tol=" << em_tol << "\n";
    out << "shape_iters=" << shape_iters << "\n";
    out << "min_cluster=" << min_cluster << "\n";
    out << "init_cluster_factor=" << init_cluster_factor << "\n";
    out << "coverage=" << coverage << "\n";
    out << "threads=" << threads << "\n";
    out << "seed=" << seed << "\n";
    return out.str();
}

}  // namespace stvp
