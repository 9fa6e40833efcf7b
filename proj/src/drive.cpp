#include "floq/drive.hpp"

#include <cmath>
#include <numeric>
#include <random>

namespace floq {

Matrix FourierSeries::sample(double t) const {
    if (harmonics.empty()) throw InvalidInput("FourierSeries: empty");
    Matrix out = Matrix::Zero(harmonics.front().second.rows(), harmonics.front().second.cols());
    for (const auto& [l, h] : harmonics)
        out += std::exp(Cplx(0.0, l * omega * t)) * h;
    return out;
}

int FourierSeries::max_harmonic() const {
    int m = 0;
    for (const auto& [l, h] : harmonics) m = std::max(m, std::abs(l));
    return m;
}

bool FourierSeries::hermitian_time_domain(double tol) const {
    for (const auto& [l, h] : harmonics) {
        const Matrix* partner = nullptr;
        for (const auto& [l2, h2] : harmonics)
            if (l2 == -l) partner = &h2;
        if (!partner) return max_abs(h) <= tol;
        if (max_abs(*partner - h.adjoint()) > tol * std::max(1.0, max_abs(h))) return false;
    }
    return true;
}

DriveProtocol DriveProtocol::continuous(Eigen::Index dim, double period, Sampler sampler,
                                        std::optional<FourierSeries> fourier, std::string name) {
    if (dim <= 0) throw InvalidInput("DriveProtocol: dimension must be positive");
    if (!(period > 0)) throw InvalidInput("DriveProtocol: period must be positive");
    if (!sampler) throw InvalidInput("DriveProtocol: sampler required");

    DriveProtocol d;
    d.dim_ = dim;
    d.period_ = period;
    d.name_ = std::move(name);
    d.sampler_ = std::move(sampler);
    d.fourier_ = std::move(fourier);

    // Periodicity and Hermiticity spot checks at construction.
    std::mt19937_64 rng(0x5eedULL);
    std::uniform_real_distribution<double> unif(0.0, period);
    for (int i = 0; i < 8; ++i) {
        const double t = unif(rng);
        const Matrix h0 = d.sampler_(t);
        if (h0.rows() != dim || h0.cols() != dim)
            throw InvalidInput("DriveProtocol: sampler dimension mismatch");
        if (!is_hermitian(h0, 1e-10))
            throw InvalidInput("DriveProtocol: sampled Hamiltonian not Hermitian");
        const Matrix h1 = d.sampler_(t + period);
        const double scale = std::max(1.0, max_abs(h0));
        if (max_abs(h1 - h0) > 1e-12 * scale)
            throw InvalidInput("DriveProtocol: sampler violates H(t+T) = H(t)");
    }
    if (d.fourier_) {
        if (!d.fourier_->hermitian_time_domain())
            throw InvalidInput("DriveProtocol: Fourier series not Hermitian in time domain");
        for (int i = 0; i < 4; ++i) {
            const double t = unif(rng);
            const Matrix hs = d.sampler_(t);
            if (max_abs(d.fourier_->sample(t) - hs) > 1e-9 * std::max(1.0, max_abs(hs)))
                throw InvalidInput("DriveProtocol: Fourier series disagrees with sampler");
        }
    }
    return d;
}

DriveProtocol DriveProtocol::kicked(Eigen::Index dim, double period,
                                    std::vector<KickSegment> segments, std::string name) {
    if (dim <= 0) throw InvalidInput("DriveProtocol: dimension must be positive");
    if (!(period > 0)) throw InvalidInput("DriveProtocol: period must be positive");
    if (segments.empty()) throw InvalidInput("DriveProtocol: kicked drive needs segments");

    // Durations must be positive rationals summing exactly to 1.
    long common = 1;
    for (const auto& s : segments) {
        if (s.num <= 0 || s.den <= 0)
            throw InvalidInput("DriveProtocol: segment durations must be positive");
        common = std::lcm(common, s.den);
    }
    long total = 0;
    for (const auto& s : segments) total += s.num * (common / s.den);
    if (total != common)
        throw InvalidInput("DriveProtocol: segment durations must sum exactly to the period");

    DriveProtocol d;
    d.dim_ = dim;
    d.period_ = period;
    d.name_ = std::move(name);
    d.starts_.reserve(segments.size() + 1);
    double t = 0.0;
    for (const auto& s : segments) {
        if (s.h.rows() != dim || s.h.cols() != dim)
            throw InvalidInput("DriveProtocol: segment dimension mismatch");
        if (!is_hermitian(s.h, 1e-10))
            throw InvalidInput("DriveProtocol: segment Hamiltonian not Hermitian");
        d.starts_.push_back(t);
        t += period * static_cast<double>(s.num) / static_cast<double>(s.den);
    }
    d.starts_.push_back(period);
    d.segments_ = std::move(segments);
    return d;
}

double DriveProtocol::segment_duration(size_t j) const {
    const auto& s = segments_.at(j);
    return period_ * static_cast<double>(s.num) / static_cast<double>(s.den);
}

Matrix DriveProtocol::hamiltonian(double t) const {
    if (!std::isfinite(t)) throw InvalidInput("DriveProtocol: non-finite time");
    if (!is_kicked()) {
        Matrix h = sampler_(t);
        return 0.5 * (h + h.adjoint());
    }
    double tau = std::fmod(t, period_);
    if (tau < 0) tau += period_;
    for (size_t j = 0; j + 1 < starts_.size(); ++j)
        if (tau < starts_[j + 1] || j + 2 == starts_.size())
            return segments_[j].h;
    return segments_.back().h;
}

void DriveProtocol::declare_symmetry(std::string name, Matrix op) {
    if (op.rows() != dim_ || op.cols() != dim_)
        throw InvalidInput("DriveProtocol: symmetry dimension mismatch");
    symmetry_ = std::move(op);
    symmetry_name_ = std::move(name);
}

void DriveProtocol::set_metadata(const std::string& key, RealVector values) {
    metadata_[key] = std::move(values);
}

}  // namespace floq
