#pragma once

// Piecewise-uniform Shishkin meshes on [0, T] for n initial layers.
//
// [0,T] = [0,s_1] u (s_1,s_2] u ... u (s_n,T], with N/2^n intervals on the
// first piece, N/2^(n-i+1) on (s_i, s_(i+1)], and N/2 on (s_n, T].

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "shishkin/problem.hpp"

namespace shishkin {

struct TransitionPoints {
    std::vector<double> sigmas;      // s_1 < ... < s_n <= T/2
    std::vector<std::uint8_t> bits;  // b_i = 0 iff s_i = s_(i+1)/2 (s_(n+1) = T)
};

/// s_n = min{T/2, (eps_n/alpha) ln N}, then s_i = min{s_(i+1)/2, (eps_i/alpha) ln N}
/// for i = n-1 down to 1. A tie selects the halving branch (b_i = 0).
///
/// Throws MeshError unless N is a positive multiple of 2^n, or alpha/T are not positive.
TransitionPoints transition_points(const PerturbationVector& eps, double alpha, double horizon,
                                   std::size_t intervals);

class ShishkinMesh {
public:
    std::size_t intervals() const noexcept { return points_.size() - 1; }
    std::size_t layers() const noexcept { return sigmas_.size(); }
    double horizon() const noexcept { return points_.back(); }

    std::span<const double> points() const noexcept { return points_; }
    double point(std::size_t j) const { return points_[j]; }
    /// delta_j = t_j - t_(j-1), 1 <= j <= N.
    double delta(std::size_t j) const { return points_[j] - points_[j - 1]; }

    std::span<const double> sigmas() const noexcept { return sigmas_; }
    std::span<const std::uint8_t> bits() const noexcept { return bits_; }
    /// Interval counts of the n+1 uniform pieces.
    std::span<const std::size_t> piece_counts() const noexcept { return counts_; }

    /// True when this mesh was produced by bisect() rather than from the
    /// transition-point formula at its own N.
    bool is_bisection() const noexcept { return bisected_; }

private:
    friend ShishkinMesh build_mesh(const PerturbationVector&, double, double, std::size_t);
    friend ShishkinMesh bisect(const ShishkinMesh&);

    std::vector<double> points_;
    std::vector<double> sigmas_;
    std::vector<std::uint8_t> bits_;
    std::vector<std::size_t> counts_;
    bool bisected_ = false;
};

ShishkinMesh build_mesh(const PerturbationVector& eps, double alpha, double horizon,
                        std::size_t intervals);
ShishkinMesh build_mesh(const ValidatedProblem& vp, std::size_t intervals);

/// Splits every interval in two at its midpoint. The transition points are
/// kept, so the coarse points are an exact subset of the result.
ShishkinMesh bisect(const ShishkinMesh& mesh);

/// The points t_ij where B_i(t)/eps_i = B_j(t)/eps_j, for i < j.
class InteractionPoints {
public:
    explicit InteractionPoints(std::size_t n) : n_(n), values_(n * n, 0.0) {}
    std::size_t size() const noexcept { return n_; }
    /// Zero-based, requires i < j.
    double at(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
    double& at(std::size_t i, std::size_t j) { return values_[i * n_ + j]; }

private:
    std::size_t n_;
    std::vector<double> values_;
};

/// t_ij = ln(eps_j/eps_i) / (alpha (1/eps_i - 1/eps_j)).
InteractionPoints interaction_points(const PerturbationVector& eps, double alpha);

}  // namespace shishkin
