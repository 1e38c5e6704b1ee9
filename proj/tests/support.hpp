#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "shishkin/problem.hpp"
#include "shishkin/smallmat.hpp"

namespace testsupport {

using shishkin::SquareMatrix;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Strictly diagonally dominant, nonpositive off-diagonals, row sums >= margin.
inline SquareMatrix random_m_matrix(std::mt19937_64& rng, std::size_t n, double margin = 0.1) {
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        double off = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            m(i, j) = rng() % 3 == 0 ? 0.0 : -uniform(rng, 0.0, 2.0);
            off -= m(i, j);
        }
        m(i, i) = off + margin + uniform(rng, 0.0, 3.0);
    }
    return m;
}

// Generic diagonally dominant matrix with mixed signs.
inline SquareMatrix random_dominant(std::mt19937_64& rng, std::size_t n) {
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        double off = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            m(i, j) = uniform(rng, -5.0, 5.0);
            off += std::abs(m(i, j));
        }
        m(i, i) = (rng() % 2 ? 1.0 : -1.0) * (off + uniform(rng, 0.5, 5.0));
    }
    return m;
}

// Strictly increasing eps in (0,1] with eps_i <= eps_(i+1)/2.
inline std::vector<double> random_eps(std::mt19937_64& rng, std::size_t n) {
    std::vector<double> eps(n);
    eps[n - 1] = std::pow(2.0, -uniform(rng, 0.0, 12.0));
    for (std::size_t i = n - 1; i-- > 0;) eps[i] = eps[i + 1] * std::pow(2.0, -uniform(rng, 1.0, 6.0));
    return eps;
}

// Variable-coefficient problem satisfying (a1) on [0,T]: nonnegative
// polynomial magnitudes on the off-diagonal, diagonal dominating them with
// margin, nonnegative f and u0.
inline shishkin::ValidatedProblem random_problem(std::mt19937_64& rng, std::size_t n,
                                                 bool nonnegative_data = true) {
    using shishkin::TimePolynomial;
    const double horizon = 1.0;
    std::vector<std::vector<TimePolynomial>> a(n, std::vector<TimePolynomial>(n));
    std::vector<double> off_bound(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            // -(c0 + c1 t + c2 t^2) with c >= 0: bounded by c0 + c1 + c2 on [0,1].
            const double c0 = uniform(rng, 0.0, 1.0), c1 = uniform(rng, 0.0, 1.0),
                         c2 = uniform(rng, 0.0, 0.5);
            a[i][j] = TimePolynomial({-c0, -c1, -c2});
            off_bound[i] += c0 + c1 + c2;
        }
    for (std::size_t i = 0; i < n; ++i)
        a[i][i] = TimePolynomial({off_bound[i] + uniform(rng, 0.5, 2.0), uniform(rng, 0.0, 1.0)});
    std::vector<TimePolynomial> f;
    shishkin::Vector u0(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (nonnegative_data) {
            f.emplace_back(std::vector<double>{uniform(rng, 0.0, 2.0), uniform(rng, 0.0, 1.0),
                                               uniform(rng, 0.0, 1.0)});
            u0[i] = uniform(rng, 0.0, 2.0);
        } else {
            f.emplace_back(std::vector<double>{uniform(rng, -2.0, 2.0), uniform(rng, -1.0, 1.0)});
            u0[i] = uniform(rng, -2.0, 2.0);
        }
    }
    auto eps = random_eps(rng, n);
    eps[n - 1] = std::min(eps[n - 1], 0.25);
    for (std::size_t i = n - 1; i-- > 0;) eps[i] = std::min(eps[i], eps[i + 1] / 2);
    return shishkin::validate(shishkin::ProblemSpec(std::move(a), std::move(f), std::move(u0),
                                                    horizon, shishkin::PerturbationVector(eps)),
                              128);
}

// N = 2^n * 2^k with a few sizes.
inline std::size_t random_intervals(std::mt19937_64& rng, std::size_t n) {
    return (std::size_t{1} << n) << pick(rng, 1, 6);
}

}  // namespace testsupport
