#include "elaa/modem.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "elaa/rng.hpp"

namespace elaa {

namespace {

std::uint32_t gray(std::uint32_t v) { return v ^ (v >> 1); }

}  // namespace

QamConstellation QamConstellation::square(int order) {
    int bits_per_axis = 0;
    while ((1 << (2 * bits_per_axis)) < order) ++bits_per_axis;
    if (order < 4 || (1 << (2 * bits_per_axis)) != order)
        throw ConfigError("square QAM needs an order of 4^k, got " + std::to_string(order));
    const int levels = 1 << bits_per_axis;
    // Average energy of the odd-integer grid is 2 (L^2 - 1) / 3.
    const double scale = 1.0 / std::sqrt(2.0 * (levels * levels - 1) / 3.0);

    QamConstellation c;
    c.order = order;
    c.points.resize(static_cast<std::size_t>(order));
    c.labels.resize(static_cast<std::size_t>(order));
    for (int i = 0; i < levels; ++i) {
        for (int q = 0; q < levels; ++q) {
            const std::uint32_t label = (gray(static_cast<std::uint32_t>(i)) << bits_per_axis) | gray(static_cast<std::uint32_t>(q));
            const double re = (2 * i - levels + 1) * scale;
            const double im = (2 * q - levels + 1) * scale;
            c.points[label] = {re, im};
            c.labels[label] = label;
        }
    }
    return c;
}

QamConstellation QamConstellation::from_points(std::vector<std::complex<double>> points) {
    if (points.empty()) throw ConfigError("constellation needs at least one point");
    QamConstellation c;
    c.order = static_cast<int>(points.size());
    c.points = std::move(points);
    c.labels.resize(c.points.size());
    for (std::size_t i = 0; i < c.labels.size(); ++i) c.labels[i] = static_cast<std::uint32_t>(i);
    return c;
}

std::size_t QamConstellation::nearest(std::complex<double> z) const {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double d = std::norm(z - points[i]);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

double QamConstellation::min_distance() const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) best = std::min(best, std::abs(points[i] - points[j]));
    return best;
}

ComplexVector draw_symbols(Eigen::Index n, const QamConstellation& c, std::uint64_t seed) {
    if (n < 1) throw DimensionError("draw_symbols: n must be >= 1");
    if (c.points.empty()) throw ConfigError("draw_symbols: empty constellation");
    Rng rng(seed);
    ComplexVector s(n);
    for (Eigen::Index i = 0; i < n; ++i) s(i) = c.points[rng.below(c.points.size())];
    return s;
}

NoiseSpec calibrate_noise(const ComplexMatrix& h, double esno_db) {
    if (!all_finite(h)) throw NumericalError("calibrate_noise: non-finite channel");
    const double energy = h.squaredNorm();
    if (!(energy > 0.0)) throw ZeroChannelError("calibrate_noise: channel has zero energy");
    const double sigma2 = (energy / static_cast<double>(h.rows())) * std::pow(10.0, -esno_db / 10.0);
    return {esno_db, sigma2};
}

ComplexVector add_awgn(const ComplexVector& clean, const NoiseSpec& spec, std::uint64_t seed) {
    if (!(spec.sigma_z2 >= 0.0)) throw ConfigError("add_awgn: negative noise variance");
    ComplexVector out = clean;
    if (spec.sigma_z2 == 0.0) return out;
    Rng rng(seed);
    const double sd = std::sqrt(spec.sigma_z2);
    for (Eigen::Index i = 0; i < out.size(); ++i) out(i) += sd * rng.complex_normal();
    return out;
}

SymbolErrors hard_decide_and_count(const ComplexVector& estimate, const ComplexVector& truth,
                                   const QamConstellation& c) {
    if (estimate.size() != truth.size()) throw DimensionError("hard_decide_and_count: length mismatch");
    SymbolErrors e;
    e.total = truth.size();
    for (Eigen::Index i = 0; i < truth.size(); ++i)
        if (c.nearest(estimate(i)) != c.nearest(truth(i))) ++e.errors;
    return e;
}

}  // namespace elaa
