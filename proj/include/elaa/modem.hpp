#pragma once

#include <cstdint>
#include <vector>

#include "elaa/numerics.hpp"

namespace elaa {

/// Constellation with one bit label per point; points are stored in label order.
struct QamConstellation {
    int order = 0;
    std::vector<std::complex<double>> points;
    std::vector<std::uint32_t> labels;

    /// Square Gray-coded QAM with unit average energy. `order` must be 4^k.
    static QamConstellation square(int order);
    /// Arbitrary point set; labels are 0..n-1 in the given order.
    static QamConstellation from_points(std::vector<std::complex<double>> points);

    /// Index of the nearest point; ties go to the lower label.
    std::size_t nearest(std::complex<double> z) const;
    double min_distance() const;
};

struct NoiseSpec {
    double esno_db = 0.0;
    double sigma_z2 = 0.0;
};

ComplexVector draw_symbols(Eigen::Index n, const QamConstellation& constellation, std::uint64_t seed);

/// sigma_z^2 = (||H||_F^2 / M) 10^{-EsNo/10}: per receive antenna, the average
/// received energy of unit-energy symbols over the noise variance equals Es/No.
NoiseSpec calibrate_noise(const ComplexMatrix& h, double esno_db);

/// clean + z with z ~ CN(0, sigma_z2 I).
ComplexVector add_awgn(const ComplexVector& clean, const NoiseSpec& spec, std::uint64_t seed);

struct SymbolErrors {
    std::int64_t errors = 0;
    std::int64_t total = 0;
};

/// Nearest-point hard decision on `estimate`, compared with the decision on `truth`.
SymbolErrors hard_decide_and_count(const ComplexVector& estimate, const ComplexVector& truth,
                                   const QamConstellation& constellation);

}  // namespace elaa
