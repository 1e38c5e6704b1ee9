#include "shishkin/mesh.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "shishkin/error.hpp"
#include "shishkin/format.hpp"

namespace shishkin {

namespace {

// Largest n for which 2^n is representable without fuss.
constexpr std::size_t kMaxLayers = 30;

void check_intervals(std::size_t n, std::size_t intervals) {
    if (n > kMaxLayers) throw MeshError("too many layers: " + std::to_string(n));
    const std::size_t block = std::size_t{1} << n;
    if (intervals == 0 || intervals % block != 0)
        throw MeshError("N=" + std::to_string(intervals) + " is not divisible by 2^n=" +
                        std::to_string(block) + "; use N = " + std::to_string(block) +
                        "*k with k a positive power of 2");
}

}  // namespace

TransitionPoints transition_points(const PerturbationVector& eps, double alpha, double horizon,
                                   std::size_t intervals) {
    const std::size_t n = eps.size();
    check_intervals(n, intervals);
    if (!(alpha > 0.0)) throw MeshError("alpha must be positive, got " + format_g(alpha));
    if (!(horizon > 0.0)) throw MeshError("T must be positive, got " + format_g(horizon));

    const double log_n = std::log(static_cast<double>(intervals));
    TransitionPoints tp{std::vector<double>(n), std::vector<std::uint8_t>(n)};
    double upper = horizon;  // s_(i+1), with s_(n+1) = T
    for (std::size_t i = n; i-- > 0;) {
        const double half = upper / 2.0;
        const double layer = eps[i] / alpha * log_n;
        if (half <= layer) {
            tp.sigmas[i] = half;
            tp.bits[i] = 0;
        } else {
            tp.sigmas[i] = layer;
            tp.bits[i] = 1;
        }
        upper = tp.sigmas[i];
    }
    return tp;
}

ShishkinMesh build_mesh(const PerturbationVector& eps, double alpha, double horizon,
                        std::size_t intervals) {
    auto tp = transition_points(eps, alpha, horizon, intervals);
    const std::size_t n = eps.size();

    ShishkinMesh mesh;
    mesh.counts_.resize(n + 1);
    mesh.counts_[0] = intervals >> n;
    for (std::size_t i = 1; i < n; ++i) mesh.counts_[i] = intervals >> (n - i + 1);
    mesh.counts_[n] = intervals / 2;
    std::size_t total = 0;
    for (std::size_t c : mesh.counts_) total += c;
    if (total != intervals) throw std::logic_error("interval counts do not sum to N");

    mesh.points_.reserve(intervals + 1);
    mesh.points_.push_back(0.0);
    double start = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        const double end = k < n ? tp.sigmas[k] : horizon;
        const std::size_t m = mesh.counts_[k];
        const double h = (end - start) / static_cast<double>(m);
        for (std::size_t i = 1; i < m; ++i) mesh.points_.push_back(start + static_cast<double>(i) * h);
        mesh.points_.push_back(end);
        start = end;
    }
    mesh.sigmas_ = std::move(tp.sigmas);
    mesh.bits_ = std::move(tp.bits);
    return mesh;
}

ShishkinMesh build_mesh(const ValidatedProblem& vp, std::size_t intervals) {
    return build_mesh(vp.spec().eps(), vp.alpha(), vp.spec().horizon(), intervals);
}

ShishkinMesh bisect(const ShishkinMesh& mesh) {
    ShishkinMesh fine;
    fine.sigmas_ = mesh.sigmas_;
    fine.bits_ = mesh.bits_;
    fine.bisected_ = true;
    fine.counts_.reserve(mesh.counts_.size());
    for (std::size_t c : mesh.counts_) fine.counts_.push_back(2 * c);
    fine.points_.reserve(2 * mesh.intervals() + 1);
    fine.points_.push_back(mesh.points_.front());
    for (std::size_t j = 1; j < mesh.points_.size(); ++j) {
        fine.points_.push_back(0.5 * (mesh.points_[j - 1] + mesh.points_[j]));
        fine.points_.push_back(mesh.points_[j]);
    }
    return fine;
}

InteractionPoints interaction_points(const PerturbationVector& eps, double alpha) {
    if (!(alpha > 0.0)) throw Error("alpha must be positive");
    const std::size_t n = eps.size();
    InteractionPoints tp(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            tp.at(i, j) = std::log(eps[j] / eps[i]) / (alpha * (1.0 / eps[i] - 1.0 / eps[j]));
    return tp;
}

}  // namespace shishkin
