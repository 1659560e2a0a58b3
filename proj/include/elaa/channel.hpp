#pragma once

// Narrowband uplink channel generators: a spatially non-stationary ELAA
// channel mixing Rician LoS and Rayleigh NLoS links with geometric path loss,
// and the conventional i.i.d. Rayleigh channel.

#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "elaa/numerics.hpp"
#include "elaa/uwsvd.hpp"

namespace elaa {

inline constexpr double kSpeedOfLight = 299792458.0;

/// Uniform linear service array on the x axis, centred at the origin, and a
/// parallel line of user terminals at y = standoff, centred on broadside.
struct GeometryConfig {
    Eigen::Index m = 256;
    double carrier_freq = 3.5e9;
    /// Service-array element spacing; half a wavelength when unset.
    std::optional<double> antenna_spacing;
    Eigen::Index k_users = 32;
    Eigen::Index n_per_user = 2;
    double user_spacing = 1.0;
    double standoff = 30.0;
    /// Spacing of a terminal's own antennas along the user line; half a wavelength when unset.
    std::optional<double> ut_antenna_spacing;

    double wavelength() const { return kSpeedOfLight / carrier_freq; }
    double array_spacing() const { return antenna_spacing.value_or(0.5 * wavelength()); }
    double terminal_spacing() const { return ut_antenna_spacing.value_or(0.5 * wavelength()); }
    Eigen::Index n() const { return k_users * n_per_user; }

    /// Throws ConfigError on an invalid field.
    void validate() const;
};

/// Path-loss and Rice-factor parameters. Amplitude gains are beta / d^gamma.
/// Defaults are the 3GPP urban-micro street-canyon values.
struct FadingConfig {
    double beta_nlos = 0.020;
    double gamma_nlos = 1.765;
    double beta_los = 0.007;
    double gamma_los = 1.050;
    double kappa_mu_db = 9.0;
    double kappa_sigma_db = 10.0;
    /// Mean length of a LoS window along the array, metres.
    double los_decay = 3.0;
    /// Long-run fraction of service antennas in LoS with a given terminal.
    double los_fraction = 0.7;

    void validate() const;
};

using LosMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;  // M x K
using RealMatrix = Eigen::MatrixXd;

struct ChannelRealization {
    ComplexMatrix h;        // M x N
    UserPartition partition;
    LosMask los_mask;       // M x K, constant over a terminal's antennas
    RealMatrix distances;   // M x N, metres (1 for the geometry-free i.i.d. model)
};

/// Antenna-to-antenna distances d_{m,n}, M x N.
RealMatrix link_distances(const GeometryConfig& geometry);

/// LoS/NLoS state per (service antenna, terminal).
///
/// For each terminal the array is walked element by element as an alternating
/// renewal process: LoS runs last floor(Exp(los_decay / spacing)) elements and
/// NLoS gaps 1 + floor(Exp(nu)) elements, with nu chosen so the long-run LoS
/// fraction equals `los_fraction`. The initial state is LoS with probability
/// `los_fraction`.
LosMask los_state_windows(const GeometryConfig& geometry, double los_decay, double los_fraction,
                          std::uint64_t seed);

/// NLoS: (beta0 / d^gamma0) w.  LoS: (beta1 / d^gamma1)(sqrt(k/(k+1)) phi + sqrt(1/(k+1)) w),
/// with w ~ CN(0, 1), phi = exp(-j 2 pi d / lambda), and one Rice factor
/// 10^(N(mu, sigma^2)/10) per (terminal, LoS window).
ChannelRealization gen_elaa(const GeometryConfig& geometry, const FadingConfig& fading, std::uint64_t seed);

/// Entries i.i.d. CN(0, 1).
ChannelRealization gen_iid_rayleigh(Eigen::Index m, const UserPartition& partition, std::uint64_t seed);
ChannelRealization gen_iid_rayleigh(Eigen::Index m, Eigen::Index n, std::uint64_t seed);

/// CSV dump, one row per entry in column-major order:
/// `row,col,re,im,distance,los` after a `# elaa-channel v1 rows=M cols=N users=n1;n2;...` line.
void write_channel_csv(const ChannelRealization& ch, const std::string& path);
ChannelRealization read_channel_csv(const std::string& path);

/// Factor dump: `kind,block,row,col,re,im` with kind in {psi, sigma, v}.
void write_factors_csv(const UwSvdFactors<double>& f, const std::string& path);

}  // namespace elaa
