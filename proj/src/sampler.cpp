#include "cvbit/sampler.hpp"
#include "cvbit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <ostream>

namespace cvbit {

Strength empirical_strength(std::span<const BitCode> codes) {
    if (codes.empty()) throw Empty("empirical_strength: no bits");
    std::uint64_t equal = 0;
    for (const BitCode c : codes) {
        const bool a = c & 1u, b = c & 2u;
        if (a == b) ++equal;
    }
    const double n = static_cast<double>(codes.size());
    const double p_hat = static_cast<double>(equal) / n;
    return Strength{std::abs(2.0 * p_hat - 1.0), 2.0 * std::sqrt(p_hat * (1.0 - p_hat) / n)};
}

GaussianPositionSampler::GaussianPositionSampler(const CovarianceMatrix& cm, AnglePair angles) {
    const RotatedMarginal marg = rotated_position_marginal(cm, angles.theta, angles.phi);
    if (marg.var_a <= 0.0 || marg.var_b <= 0.0)
        throw DomainError("GaussianPositionSampler: non-positive marginal variance");
    sd_a_ = std::sqrt(marg.var_a);
    slope_ = marg.cov / sd_a_;
    resid_sd_ = std::sqrt(std::max(0.0, marg.var_b - slope_ * slope_));
}

void GaussianPositionSampler::draw(Rng& rng, double& x, double& y) const {
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    x = sd_a_ * z1;
    y = slope_ * z1 + resid_sd_ * z2;
}

namespace {

// Cell masses by 2x2 Gauss quadrature: per axis the two nodes sit at
// center -+ h / (2 sqrt 3) with weight h/2, giving O(h^4) mass accuracy.
// kGaussPair[a](k) returns node a of cell k.
Eigen::MatrixXcd hermite_table(int dim, int cells, double extent, double step, int node) {
    const double offset = (node == 0 ? -1.0 : 1.0) * step / (2.0 * std::sqrt(3.0));
    Eigen::MatrixXd psi(dim, cells);
    std::vector<double> col(dim);
    for (int k = 0; k < cells; ++k) {
        const double x = -extent + (k + 0.5) * step + offset;
        hermite_psi_all(dim - 1, x, col);
        for (int n = 0; n < dim; ++n) psi(n, k) = col[n];
    }
    return psi.cast<std::complex<double>>();
}

} // namespace

GridPositionSampler::GridPositionSampler(const FockPureState& psi, AnglePair angles,
                                         const Config& cfg)
    : cells_(cfg.sample_cells), extent_(cfg.sample_extent),
      step_(2.0 * cfg.sample_extent / cfg.sample_cells) {
    const FockPureState rotated = rotate_mode_phases(psi, angles.theta, angles.phi);
    const Eigen::MatrixXcd tab[2] = {
        hermite_table(psi.dim(), cells_, extent_, step_, 0),
        hermite_table(psi.dim(), cells_, extent_, step_, 1),
    };
    Eigen::MatrixXd density = Eigen::MatrixXd::Zero(cells_, cells_);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            density += (tab[a].transpose() * rotated.coeffs * tab[b]).cwiseAbs2();
    density *= 0.25 * step_ * step_;
    build(density, cfg);
}

GridPositionSampler::GridPositionSampler(const FockDensityMatrix& rho, AnglePair angles,
                                         const Config& cfg)
    : cells_(cfg.sample_cells), extent_(cfg.sample_extent),
      step_(2.0 * cfg.sample_extent / cfg.sample_cells) {
    const FockDensityMatrix rotated = rotate_mode_phases(rho, angles.theta, angles.phi);
    const Eigen::MatrixXcd tab[2] = {
        hermite_table(rho.dim, cells_, extent_, step_, 0),
        hermite_table(rho.dim, cells_, extent_, step_, 1),
    };
    // Spectral form: density = sum_j w_j |Phi_j|^2 over eigenvectors of rho.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rotated.rho);
    const double w_max = es.eigenvalues().cwiseAbs().maxCoeff();
    Eigen::MatrixXd density = Eigen::MatrixXd::Zero(cells_, cells_);
    const int d = rho.dim;
    for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
        const double w = es.eigenvalues()(j);
        if (w <= 1e-14 * w_max) continue;
        Eigen::MatrixXcd vec(d, d);
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n) vec(m, n) = es.eigenvectors()(m * d + n, j);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                density += w * (tab[a].transpose() * vec * tab[b]).cwiseAbs2();
    }
    density *= 0.25 * step_ * step_;
    build(density, cfg);
}

void GridPositionSampler::build(const Eigen::MatrixXd& density_cells, const Config& cfg) {
    double total = 0.0;
    row_cdf_.assign(cells_ + 1, 0.0);
    cond_cdf_.assign(static_cast<std::size_t>(cells_) * cells_, 0.0);
    for (int i = 0; i < cells_; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j < cells_; ++j) {
            row_sum += std::max(0.0, density_cells(i, j));
            cond_cdf_[static_cast<std::size_t>(i) * cells_ + j] = row_sum;
        }
        total += row_sum;
        row_cdf_[i + 1] = total;
    }
    offgrid_mass_ = std::max(0.0, 1.0 - total);
    if (offgrid_mass_ > cfg.sample_underflow_tol)
        throw GridUnderflow("GridPositionSampler: probability mass outside the grid");
}

void GridPositionSampler::draw(Rng& rng, double& x, double& y) const {
    const double total = row_cdf_.back();
    const double u1 = rng.uniform() * total;
    const auto row_it = std::upper_bound(row_cdf_.begin() + 1, row_cdf_.end(), u1);
    const int i = std::min<int>(cells_ - 1, static_cast<int>(row_it - row_cdf_.begin()) - 1);

    const double* row = cond_cdf_.data() + static_cast<std::size_t>(i) * cells_;
    const double u2 = rng.uniform() * row[cells_ - 1];
    const auto col_it = std::upper_bound(row, row + cells_, u2);
    const int j = std::min<int>(cells_ - 1, static_cast<int>(col_it - row));

    x = -extent_ + (i + rng.uniform()) * step_;
    y = -extent_ + (j + rng.uniform()) * step_;
}

namespace {

template <class Sampler>
HomodyneRun run_blocks(const Sampler& sampler, AnglePair angles, std::uint64_t shots,
                       std::uint64_t seed, double smoothing_sigma) {
    if (shots < 1) throw OutOfRange("sample_run: shots must be >= 1");
    if (smoothing_sigma < 0.0) throw OutOfRange("sample_run: smoothing sigma must be >= 0");
    HomodyneRun run;
    run.seed = seed;
    run.shots = shots;
    run.angles = angles;
    run.smoothing_sigma = smoothing_sigma;
    run.bits.resize(shots);

    std::uint64_t done = 0;
    std::uint64_t block = 0;
    while (done < shots) {
        const std::uint64_t count = std::min(kSampleBlock, shots - done);
        Rng rng(Rng::derive(seed, block));
        for (std::uint64_t k = 0; k < count; ++k) {
            double x, y;
            sampler.draw(rng, x, y);
            if (smoothing_sigma > 0.0) {
                x += smoothing_sigma * rng.normal();
                y += smoothing_sigma * rng.normal();
            }
            run.bits[done + k] =
                static_cast<BitCode>((x >= 0.0 ? 1u : 0u) | (y >= 0.0 ? 2u : 0u));
        }
        done += count;
        ++block;
    }
    const Strength s = empirical_strength(run.bits);
    run.b_hat = s.b_hat;
    run.std_err = s.std_err;
    return run;
}

} // namespace

HomodyneRun sample_run(const GaussianPositionSampler& sampler, AnglePair angles,
                       std::uint64_t shots, std::uint64_t seed, double smoothing_sigma) {
    return run_blocks(sampler, angles, shots, seed, smoothing_sigma);
}

HomodyneRun sample_run(const GridPositionSampler& sampler, AnglePair angles,
                       std::uint64_t shots, std::uint64_t seed, double smoothing_sigma) {
    return run_blocks(sampler, angles, shots, seed, smoothing_sigma);
}

HomodyneRun sample_run(const CovarianceMatrix& cm, AnglePair angles, std::uint64_t shots,
                       std::uint64_t seed, double smoothing_sigma, const Config&) {
    return run_blocks(GaussianPositionSampler(cm, angles), angles, shots, seed, smoothing_sigma);
}

HomodyneRun sample_run(const FockPureState& psi, AnglePair angles, std::uint64_t shots,
                       std::uint64_t seed, double smoothing_sigma, const Config& cfg) {
    return run_blocks(GridPositionSampler(psi, angles, cfg), angles, shots, seed, smoothing_sigma);
}

HomodyneRun sample_run(const FockDensityMatrix& rho, AnglePair angles, std::uint64_t shots,
                       std::uint64_t seed, double smoothing_sigma, const Config& cfg) {
    return run_blocks(GridPositionSampler(rho, angles, cfg), angles, shots, seed, smoothing_sigma);
}

// --- bit stream files ---------------------------------------------------------

namespace {

void put_u16(std::ostream& out, std::uint16_t v) {
    const unsigned char bytes[2] = {static_cast<unsigned char>(v & 0xff),
                                    static_cast<unsigned char>(v >> 8)};
    out.write(reinterpret_cast<const char*>(bytes), 2);
}

void put_u64(std::ostream& out, std::uint64_t v) {
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(bytes), 8);
}

std::uint16_t get_u16(std::istream& in) {
    unsigned char bytes[2];
    in.read(reinterpret_cast<char*>(bytes), 2);
    return static_cast<std::uint16_t>(bytes[0] | (bytes[1] << 8));
}

std::uint64_t get_u64(std::istream& in) {
    unsigned char bytes[8];
    in.read(reinterpret_cast<char*>(bytes), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    return v;
}

constexpr char kMagic[6] = {'C', 'V', 'B', 'I', 'T', '\0'};

} // namespace

void write_bits_binary(std::ostream& out, const HomodyneRun& run) {
    out.write(kMagic, 6);
    put_u16(out, kBitStreamVersion);
    put_u64(out, run.shots);
    std::vector<unsigned char> packed((run.shots + 3) / 4, 0);
    for (std::uint64_t i = 0; i < run.shots; ++i)
        packed[i / 4] |= static_cast<unsigned char>((run.bits[i] & 3u) << (2 * (i % 4)));
    out.write(reinterpret_cast<const char*>(packed.data()),
              static_cast<std::streamsize>(packed.size()));
    if (!out) throw IoError("write_bits_binary: stream failure");
}

void write_bits_binary(const std::string& path, const HomodyneRun& run) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("write_bits_binary: cannot open '" + path + "'");
    write_bits_binary(out, run);
}

BitStream read_bits_binary(std::istream& in) {
    char magic[6];
    in.read(magic, 6);
    if (!in || std::memcmp(magic, kMagic, 6) != 0)
        throw ParseError("read_bits_binary: bad magic");
    const std::uint16_t version = get_u16(in);
    if (version != kBitStreamVersion)
        throw ParseError("read_bits_binary: unsupported version");
    BitStream stream;
    stream.shots = get_u64(in);
    std::vector<unsigned char> packed((stream.shots + 3) / 4);
    in.read(reinterpret_cast<char*>(packed.data()), static_cast<std::streamsize>(packed.size()));
    if (!in) throw ParseError("read_bits_binary: truncated payload");
    stream.codes.resize(stream.shots);
    for (std::uint64_t i = 0; i < stream.shots; ++i)
        stream.codes[i] = static_cast<BitCode>((packed[i / 4] >> (2 * (i % 4))) & 3u);
    return stream;
}

BitStream read_bits_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("read_bits_binary: cannot open '" + path + "'");
    return read_bits_binary(in);
}

void write_bits_csv(std::ostream& out, const HomodyneRun& run) {
    out << "shot,bit_a,bit_b\n";
    for (std::uint64_t i = 0; i < run.shots; ++i)
        out << i << ',' << (run.bits[i] & 1u) << ',' << ((run.bits[i] >> 1) & 1u) << '\n';
    if (!out) throw IoError("write_bits_csv: stream failure");
}

void write_bits_csv(const std::string& path, const HomodyneRun& run) {
    std::ofstream out(path);
    if (!out) throw IoError("write_bits_csv: cannot open '" + path + "'");
    write_bits_csv(out, run);
}

} // namespace cvbit
