#include "elaa/csv.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace elaa {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << std::setprecision(17);
    return out;
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string cell;
    while (std::getline(is, cell, ',')) out.push_back(cell);
    return out;
}

std::ifstream open_in(const std::string& path, const std::string& header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != header) throw IoError("'" + path + "' does not start with '" + header + "'");
    return in;
}

constexpr const char* kSerHeader = "method,uwsvd,iteration,ser,zf_ser,trials,seed";
constexpr const char* kCondHeader = "channel,trial,cond_a,cond_a_bar";

}  // namespace

void write_csv(const std::vector<SerCurve>& curves, const std::string& path) {
    auto out = open_out(path);
    out << kSerHeader << '\n';
    for (const auto& c : curves)
        for (std::size_t t = 0; t < c.ser.size(); ++t)
            out << to_string(c.method) << ',' << (c.uwsvd ? 1 : 0) << ',' << t + 1 << ',' << c.ser[t] << ','
                << c.zf_ser << ',' << c.trials << ',' << c.seed << '\n';
    finish(out, path);
}

void write_csv(const std::vector<CondSample>& samples, const std::string& path) {
    auto out = open_out(path);
    out << kCondHeader << '\n';
    for (const auto& s : samples)
        out << to_string(s.channel) << ',' << s.trial << ',' << s.cond_a << ',' << s.cond_a_bar << '\n';
    finish(out, path);
}

std::vector<SerCurve> read_ser_csv(const std::string& path) {
    auto in = open_in(path, kSerHeader);
    std::vector<SerCurve> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto f = split(line);
        if (f.size() != 7) throw IoError("'" + path + "': malformed row '" + line + "'");
        const auto method = parse_method(f[0]);
        const bool uw = f[1] == "1";
        const auto iteration = std::stoul(f[2]);
        if (out.empty() || out.back().method != method || out.back().uwsvd != uw || iteration == 1) {
            SerCurve c;
            c.method = method;
            c.uwsvd = uw;
            c.zf_ser = std::stod(f[4]);
            c.trials = std::stoi(f[5]);
            c.seed = std::stoull(f[6]);
            out.push_back(std::move(c));
        }
        out.back().ser.push_back(std::stod(f[3]));
    }
    return out;
}

std::vector<CondSample> read_cond_csv(const std::string& path) {
    auto in = open_in(path, kCondHeader);
    std::vector<CondSample> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto f = split(line);
        if (f.size() != 4) throw IoError("'" + path + "': malformed row '" + line + "'");
        out.push_back({parse_channel_kind(f[0]), std::stoi(f[1]), std::stod(f[2]), std::stod(f[3])});
    }
    return out;
}

void write_trajectory_csv(const Trajectory<double>& traj, const std::string& path, int checkpoint_every) {
    auto out = open_out(path);
    const Eigen::Index n = traj.iterates.empty() ? 0 : traj.iterates.front().size();
    out << "iteration,residual_norm,error_norm";
    if (checkpoint_every > 0)
        for (Eigen::Index i = 0; i < n; ++i) out << ",x" << i << "_re,x" << i << "_im";
    out << '\n';
    for (std::size_t t = 0; t < traj.iterates.size(); ++t) {
        out << t + 1 << ',' << traj.residual_norms[t] << ',';
        if (t < traj.error_norms.size()) out << traj.error_norms[t];
        if (checkpoint_every > 0) {
            const bool dump = (t + 1) % static_cast<std::size_t>(checkpoint_every) == 0;
            for (Eigen::Index i = 0; i < n; ++i) {
                out << ',';
                if (dump) out << traj.iterates[t](i).real();
                out << ',';
                if (dump) out << traj.iterates[t](i).imag();
            }
        }
        out << '\n';
    }
    finish(out, path);
}

}  // namespace elaa
