#ifndef FLOQ_DRIVE_HPP
#define FLOQ_DRIVE_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "floq/numkernel.hpp"

namespace floq {

// Finite operator Fourier series O(t) = sum_l e^{i l w t} O_l.
// Hermitian time-domain operators satisfy O_{-l} = O_l^dag.
struct FourierSeries {
    double omega = 0.0;
    std::vector<std::pair<int, Matrix>> harmonics;  // (l, O_l), each l once

    Matrix sample(double t) const;
    int max_harmonic() const;
    bool hermitian_time_domain(double tol = 1e-10) const;
};

// One piecewise-constant segment of a kicked drive. The duration is the
// exact rational fraction num/den of the period, so segment durations sum
// to T without roundoff.
struct KickSegment {
    Matrix h;
    long num = 1;
    long den = 1;
};

// Time-periodic Hamiltonian generator: either a continuous rule H(t)
// (optionally with an exact Fourier series) or an ordered list of kicked
// segments. Values are immutable after construction and safe to share.
class DriveProtocol {
  public:
    using Sampler = std::function<Matrix(double)>;

    static DriveProtocol continuous(Eigen::Index dim, double period, Sampler sampler,
                                    std::optional<FourierSeries> fourier = std::nullopt,
                                    std::string name = "custom");
    static DriveProtocol kicked(Eigen::Index dim, double period, std::vector<KickSegment> segments,
                                std::string name = "custom");

    Eigen::Index dim() const { return dim_; }
    double period() const { return period_; }
    bool is_kicked() const { return !segments_.empty(); }
    const std::string& name() const { return name_; }

    // H(t), periodically extended. For kicked drives, t belongs to the
    // segment whose half-open window [start, end) contains t mod T.
    Matrix hamiltonian(double t) const;

    const std::vector<KickSegment>& segments() const { return segments_; }
    // Segment start times within [0, T].
    const std::vector<double>& segment_starts() const { return starts_; }
    double segment_duration(size_t j) const;

    const std::optional<FourierSeries>& fourier() const { return fourier_; }

    // Declared symmetry operator (e.g. spin-flip parity): used to fix the
    // eigenbasis inside degenerate Floquet clusters.
    void declare_symmetry(std::string name, Matrix op);
    const std::optional<Matrix>& symmetry() const { return symmetry_; }
    const std::string& symmetry_name() const { return symmetry_name_; }

    // Numeric side data recorded at construction (disorder couplings, ...).
    void set_metadata(const std::string& key, RealVector values);
    const std::map<std::string, RealVector>& metadata() const { return metadata_; }

  private:
    DriveProtocol() = default;

    Eigen::Index dim_ = 0;
    double period_ = 0.0;
    std::string name_;
    Sampler sampler_;
    std::optional<FourierSeries> fourier_;
    std::vector<KickSegment> segments_;
    std::vector<double> starts_;
    std::optional<Matrix> symmetry_;
    std::string symmetry_name_;
    std::map<std::string, RealVector> metadata_;
};

}  // namespace floq

#endif
