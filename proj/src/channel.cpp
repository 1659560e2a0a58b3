#include "elaa/channel.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "elaa/rng.hpp"

namespace elaa {

namespace {

enum Stream : std::uint64_t { kWindowStream = 1, kKappaStream = 2, kFadingStream = 3 };

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

// floor(Exp(mean)) has mean 1 / (e^{1/mean} - 1).
double floored_exp_mean(double mean) {
    if (!(mean > 0.0)) return 0.0;
    return 1.0 / std::expm1(1.0 / mean);
}

}  // namespace

void GeometryConfig::validate() const {
    require(m >= 1, "geometry: antennas must be >= 1");
    require(k_users >= 1, "geometry: users must be >= 1");
    require(n_per_user >= 1, "geometry: antennas_per_user must be >= 1");
    require(carrier_freq > 0.0 && std::isfinite(carrier_freq), "geometry: carrier frequency must be positive");
    require(array_spacing() > 0.0, "geometry: antenna spacing must be positive");
    require(terminal_spacing() > 0.0, "geometry: terminal antenna spacing must be positive");
    require(user_spacing > 0.0, "geometry: user spacing must be positive");
    require(standoff > 0.0, "geometry: standoff must be positive");
}

void FadingConfig::validate() const {
    require(beta_nlos > 0.0 && beta_los > 0.0, "fading: path-loss coefficients must be positive");
    require(gamma_nlos > 0.0 && gamma_los > 0.0, "fading: path-loss exponents must be positive");
    require(kappa_sigma_db >= 0.0, "fading: kappa_sigma_db must be >= 0");
    require(std::isfinite(kappa_mu_db), "fading: kappa_mu_db must be finite");
    require(los_decay > 0.0, "fading: los_decay must be positive");
    require(los_fraction >= 0.0 && los_fraction <= 1.0, "fading: los_fraction must lie in [0, 1]");
}

RealMatrix link_distances(const GeometryConfig& g) {
    g.validate();
    const double da = g.array_spacing();
    const double du = g.terminal_spacing();
    RealMatrix d(g.m, g.n());
    for (Eigen::Index k = 0; k < g.k_users; ++k) {
        const double centre = (static_cast<double>(k) - 0.5 * static_cast<double>(g.k_users - 1)) * g.user_spacing;
        for (Eigen::Index i = 0; i < g.n_per_user; ++i) {
            const double ux = centre + (static_cast<double>(i) - 0.5 * static_cast<double>(g.n_per_user - 1)) * du;
            for (Eigen::Index m = 0; m < g.m; ++m) {
                const double ax = (static_cast<double>(m) - 0.5 * static_cast<double>(g.m - 1)) * da;
                d(m, k * g.n_per_user + i) = std::hypot(ax - ux, g.standoff);
            }
        }
    }
    if (!(d.minCoeff() > 0.0)) throw ConfigError("geometry: a link has zero length");
    return d;
}

LosMask los_state_windows(const GeometryConfig& g, double los_decay, double los_fraction, std::uint64_t seed) {
    g.validate();
    LosMask mask = LosMask::Constant(g.m, g.k_users, false);
    if (los_fraction >= 1.0) {
        mask.setConstant(true);
        return mask;
    }
    if (los_fraction <= 0.0 || !(los_decay > 0.0)) return mask;

    const double run_mean = los_decay / g.array_spacing();
    const double run_avg = floored_exp_mean(run_mean);
    const double gap_avg = run_avg * (1.0 - los_fraction) / los_fraction;
    // Gap = 1 + floor(Exp(gap_scale)); a zero scale pins every gap to one element.
    const double gap_scale = gap_avg > 1.0 ? 1.0 / std::log1p(1.0 / (gap_avg - 1.0)) : 0.0;

    Rng rng(seed);
    for (Eigen::Index k = 0; k < g.k_users; ++k) {
        bool los = rng.uniform() < los_fraction;
        Eigen::Index pos = 0;
        while (pos < g.m) {
            Eigen::Index len;
            if (los) {
                len = static_cast<Eigen::Index>(std::floor(rng.exponential(run_mean)));
            } else {
                len = 1 + (gap_scale > 0.0 ? static_cast<Eigen::Index>(std::floor(rng.exponential(gap_scale))) : 0);
            }
            const Eigen::Index end = std::min(g.m, pos + std::max<Eigen::Index>(len, 0));
            if (los)
                for (Eigen::Index m = pos; m < end; ++m) mask(m, k) = true;
            pos = end;
            los = !los;
        }
    }
    return mask;
}

ChannelRealization gen_elaa(const GeometryConfig& g, const FadingConfig& f, std::uint64_t seed) {
    g.validate();
    f.validate();
    ChannelRealization ch;
    ch.partition = UserPartition::uniform(g.k_users, g.n_per_user);
    ch.distances = link_distances(g);
    ch.los_mask = los_state_windows(g, f.los_decay, f.los_fraction, derive_seed(seed, kWindowStream));
    ch.h.resize(g.m, g.n());

    Rng kappa_rng(derive_seed(seed, kKappaStream));
    Rng fading_rng(derive_seed(seed, kFadingStream));
    const double k_wave = 2.0 * std::numbers::pi / g.wavelength();

    Eigen::MatrixXd kappa = Eigen::MatrixXd::Zero(g.m, g.k_users);
    for (Eigen::Index k = 0; k < g.k_users; ++k) {
        double current = 0.0;
        for (Eigen::Index m = 0; m < g.m; ++m) {
            if (!ch.los_mask(m, k)) continue;
            if (m == 0 || !ch.los_mask(m - 1, k)) {
                const double kdb = f.kappa_mu_db + f.kappa_sigma_db * kappa_rng.normal();
                current = std::pow(10.0, kdb / 10.0);
            }
            kappa(m, k) = current;
        }
    }

    for (Eigen::Index n = 0; n < g.n(); ++n) {
        const Eigen::Index k = n / g.n_per_user;
        for (Eigen::Index m = 0; m < g.m; ++m) {
            const double d = ch.distances(m, n);
            const std::complex<double> w = fading_rng.complex_normal();
            if (ch.los_mask(m, k)) {
                const double kp = kappa(m, k);
                const std::complex<double> phi = std::polar(1.0, -k_wave * d);
                const double direct = std::sqrt(kp / (kp + 1.0));
                const double diffuse = std::sqrt(1.0 / (kp + 1.0));
                ch.h(m, n) = (f.beta_los / std::pow(d, f.gamma_los)) * (direct * phi + diffuse * w);
            } else {
                ch.h(m, n) = (f.beta_nlos / std::pow(d, f.gamma_nlos)) * w;
            }
        }
    }
    return ch;
}

ChannelRealization gen_iid_rayleigh(Eigen::Index m, const UserPartition& partition, std::uint64_t seed) {
    if (m < 1 || partition.total() < 1) throw ConfigError("gen_iid_rayleigh: dimensions must be >= 1");
    ChannelRealization ch;
    ch.partition = partition;
    ch.h.resize(m, partition.total());
    Rng rng(derive_seed(seed, kFadingStream));
    for (Eigen::Index j = 0; j < ch.h.cols(); ++j)
        for (Eigen::Index i = 0; i < m; ++i) ch.h(i, j) = rng.complex_normal();
    ch.los_mask = LosMask::Constant(m, static_cast<Eigen::Index>(partition.users()), false);
    ch.distances = RealMatrix::Ones(m, partition.total());
    return ch;
}

ChannelRealization gen_iid_rayleigh(Eigen::Index m, Eigen::Index n, std::uint64_t seed) {
    return gen_iid_rayleigh(m, UserPartition::uniform(n, 1), seed);
}

void write_channel_csv(const ChannelRealization& ch, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << std::setprecision(17);
    out << "# elaa-channel v1 rows=" << ch.h.rows() << " cols=" << ch.h.cols() << " users=";
    for (std::size_t k = 0; k < ch.partition.users(); ++k) out << (k ? ";" : "") << ch.partition.size(k);
    out << "\nrow,col,re,im,distance,los\n";
    Eigen::Index user = 0;
    for (Eigen::Index j = 0; j < ch.h.cols(); ++j) {
        while (j >= ch.partition.offset(static_cast<std::size_t>(user)) + ch.partition.size(static_cast<std::size_t>(user)))
            ++user;
        for (Eigen::Index i = 0; i < ch.h.rows(); ++i)
            out << i << ',' << j << ',' << ch.h(i, j).real() << ',' << ch.h(i, j).imag() << ',' << ch.distances(i, j)
                << ',' << (ch.los_mask(i, user) ? 1 : 0) << '\n';
    }
    if (!out) throw IoError("write to '" + path + "' failed");
}

ChannelRealization read_channel_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::string line;
    std::getline(in, line);
    Eigen::Index rows = 0, cols = 0;
    std::vector<Eigen::Index> sizes;
    {
        std::istringstream meta(line);
        std::string tok;
        while (meta >> tok) {
            if (tok.rfind("rows=", 0) == 0) rows = std::stol(tok.substr(5));
            else if (tok.rfind("cols=", 0) == 0) cols = std::stol(tok.substr(5));
            else if (tok.rfind("users=", 0) == 0) {
                std::istringstream us(tok.substr(6));
                std::string part;
                while (std::getline(us, part, ';')) sizes.push_back(std::stol(part));
            }
        }
    }
    if (rows < 1 || cols < 1 || sizes.empty()) throw IoError("'" + path + "' is not an elaa-channel dump");
    ChannelRealization ch;
    ch.partition = UserPartition(sizes);
    ch.h.resize(rows, cols);
    ch.distances.resize(rows, cols);
    ch.los_mask = LosMask::Constant(rows, static_cast<Eigen::Index>(sizes.size()), false);
    std::getline(in, line);  // column header
    Eigen::Index user = 0;
    for (Eigen::Index j = 0; j < cols; ++j) {
        while (j >= ch.partition.offset(static_cast<std::size_t>(user)) + ch.partition.size(static_cast<std::size_t>(user)))
            ++user;
        for (Eigen::Index i = 0; i < rows; ++i) {
            if (!std::getline(in, line)) throw IoError("'" + path + "' is truncated");
            std::istringstream row(line);
            std::string f[6];
            for (auto& s : f) std::getline(row, s, ',');
            ch.h(i, j) = {std::stod(f[2]), std::stod(f[3])};
            ch.distances(i, j) = std::stod(f[4]);
            if (f[5] == "1") ch.los_mask(i, user) = true;
        }
    }
    return ch;
}

void write_factors_csv(const UwSvdFactors<double>& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << std::setprecision(17) << "kind,block,row,col,re,im\n";
    for (std::size_t k = 0; k < f.partition.users(); ++k) {
        const auto o = f.partition.offset(k);
        const auto nk = f.partition.size(k);
        for (Eigen::Index j = 0; j < nk; ++j)
            for (Eigen::Index i = 0; i < f.psi.rows(); ++i)
                out << "psi," << k << ',' << i << ',' << o + j << ',' << f.psi(i, o + j).real() << ','
                    << f.psi(i, o + j).imag() << '\n';
        for (Eigen::Index j = 0; j < nk; ++j) out << "sigma," << k << ',' << o + j << ",0," << f.sigma(o + j) << ",0\n";
        for (Eigen::Index j = 0; j < nk; ++j)
            for (Eigen::Index i = 0; i < nk; ++i)
                out << "v," << k << ',' << i << ',' << j << ',' << f.v_blocks[k](i, j).real() << ','
                    << f.v_blocks[k](i, j).imag() << '\n';
    }
    if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace elaa
