#pragma once

#include "cvbit/bitcorr.hpp"
#include "cvbit/config.hpp"
#include "cvbit/fock.hpp"
#include "cvbit/gaussian.hpp"
#include "cvbit/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace cvbit {

/// One joint sign outcome per shot: bit 0 = (x_A >= 0), bit 1 = (x_B >= 0).
using BitCode = std::uint8_t;

struct Strength {
    double b_hat;
    double std_err; // binomial error of P_equal, scaled by 2
};

/// b_hat = |2 (#equal) / (#total) - 1|, std_err = 2 sqrt(p (1-p) / #total).
Strength empirical_strength(std::span<const BitCode> codes);

struct HomodyneRun {
    std::uint64_t seed = 0;
    std::uint64_t shots = 0;
    AnglePair angles;
    double smoothing_sigma = 0.0;
    std::vector<BitCode> bits;
    double b_hat = 0.0;
    double std_err = 0.0;
};

/// Shots are generated in fixed blocks of kSampleBlock with per-block derived
/// seeds, so the stream is a deterministic concatenation independent of any
/// worker partitioning.
inline constexpr std::uint64_t kSampleBlock = 1ull << 20;

/// Exact sampling from the rotated bivariate normal marginal.
class GaussianPositionSampler {
public:
    GaussianPositionSampler(const CovarianceMatrix& cm, AnglePair angles);
    void draw(Rng& rng, double& x, double& y) const;

private:
    double sd_a_;
    double slope_;
    double resid_sd_;
};

/// Inverse-CDF sampling from the tabulated joint position density of a Fock
/// state on a uniform grid over [-extent, extent]^2.
class GridPositionSampler {
public:
    GridPositionSampler(const FockPureState& psi, AnglePair angles,
                        const Config& cfg = default_config());
    GridPositionSampler(const FockDensityMatrix& rho, AnglePair angles,
                        const Config& cfg = default_config());

    void draw(Rng& rng, double& x, double& y) const;
    double offgrid_mass() const { return offgrid_mass_; }

private:
    void build(const Eigen::MatrixXd& density_cells, const Config& cfg);

    int cells_ = 0;
    double extent_ = 0.0;
    double step_ = 0.0;
    double offgrid_mass_ = 0.0;
    std::vector<double> row_cdf_;  // marginal over x_A cells
    std::vector<double> cond_cdf_; // per-row conditional over x_B cells
};

HomodyneRun sample_run(const CovarianceMatrix& cm, AnglePair angles, std::uint64_t shots,
                       std::uint64_t seed, double smoothing_sigma = 0.0,
                       const Config& cfg = default_config());
HomodyneRun sample_run(const FockPureState& psi, AnglePair angles, std::uint64_t shots,
                       std::uint64_t seed, double smoothing_sigma = 0.0,
                       const Config& cfg = default_config());
HomodyneRun sample_run(const FockDensityMatrix& rho, AnglePair angles, std::uint64_t shots,
                       std::uint64_t seed, double smoothing_sigma = 0.0,
                       const Config& cfg = default_config());

/// Reusable drivers for prebuilt samplers (table construction amortized
/// across repeated runs).
HomodyneRun sample_run(const GaussianPositionSampler& sampler, AnglePair angles,
                       std::uint64_t shots, std::uint64_t seed, double smoothing_sigma = 0.0);
HomodyneRun sample_run(const GridPositionSampler& sampler, AnglePair angles,
                       std::uint64_t shots, std::uint64_t seed, double smoothing_sigma = 0.0);

// --- bit stream files ---------------------------------------------------------
//
// Binary layout: 16-byte header = magic "CVBIT\0" (6 bytes), version u16 LE,
// shots u64 LE; then 2 bits per shot packed little-endian (shot i occupies
// bits 2i, 2i+1 of the payload; bit value 1 encodes "+").

inline constexpr std::uint16_t kBitStreamVersion = 1;

void write_bits_binary(std::ostream& out, const HomodyneRun& run);
void write_bits_binary(const std::string& path, const HomodyneRun& run);

struct BitStream {
    std::uint64_t shots = 0;
    std::vector<BitCode> codes;
};

BitStream read_bits_binary(std::istream& in);
BitStream read_bits_binary(const std::string& path);

/// CSV with header "shot,bit_a,bit_b"; bits serialized as 1 (plus) / 0 (minus).
void write_bits_csv(std::ostream& out, const HomodyneRun& run);
void write_bits_csv(const std::string& path, const HomodyneRun& run);

} // namespace cvbit
