#pragma once

// Random invariant polynomials and randomized valid diagram inputs.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bipoly.hpp"
#include "errors.hpp"
#include "pipeline.hpp"

namespace patchwork {

inline double binomial(int n, int k)
{
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

/// Kostlan-weighted random polynomial invariant under rs (T2: real, S2: Hermitian).
inline BiPoly random_invariant(int b, const RealStructure& rs, std::mt19937_64& rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    BiPoly f(b);
    for (int i = 0; i <= b; ++i)
        for (int j = 0; j <= b; ++j) {
            const double w = std::sqrt(binomial(b, i) * binomial(b, j));
            switch (rs.kind) {
            case RealStructureKind::T2:
                f.set(i, j, w * normal(rng));
                break;
            case RealStructureKind::S2:
                if (i == j) {
                    f.set(i, i, w * normal(rng));
                } else if (i < j) {
                    const cplx c(w * normal(rng), w * normal(rng));
                    f.set(i, j, c / std::sqrt(2.0));
                    f.set(j, i, std::conj(c) / std::sqrt(2.0));
                }
                break;
            case RealStructureKind::Empty:
                // c(b-i, b-j) = (-1)^(i+j) conj(c(i,j)); fill the lexicographically smaller half.
                if (i * (b + 1) + j <= (b - i) * (b + 1) + (b - j)) {
                    const int si = b - i, sj = b - j;
                    const double sg = (i + j) % 2 ? -1.0 : 1.0;
                    if (si == i && sj == j) {
                        // Self-partner: c = sg * conj(c).
                        f.set(i, j, sg > 0 ? cplx(w * normal(rng), 0.0) : cplx(0.0, w * normal(rng)));
                    } else {
                        const cplx c(w * normal(rng), w * normal(rng));
                        f.set(i, j, c);
                        f.set(si, sj, sg * std::conj(c));
                    }
                }
                break;
            }
        }
    return f;
}

/// Random polynomial input of the given degree.
inline PolynomialInput random_input(int degree, const RealStructure& rs, std::mt19937_64& rng,
                                    int grid = kDefaultResolution)
{
    PolynomialInput in;
    in.degree = degree;
    in.rs = rs;
    in.grid = grid;
    std::bernoulli_distribution coin(0.5);
    in.f0 = BiPoly::constant(coin(rng) ? 1.0 : -1.0);
    for (int j = 0; j < expected_curve_count(degree); ++j)
        in.curves.push_back(random_invariant(expected_bidegree(degree, j), rs, rng));
    return in;
}

struct RandomBuild {
    PolynomialInput input;
    BuildResult result;
    int rejected = 0;
};

/// Draws inputs until one builds; numerical rejections (tangency, coarse grids,
/// singular curves) are resampled.
inline RandomBuild random_build(int degree, const RealStructure& rs, std::mt19937_64& rng,
                                int grid = kDefaultResolution, int max_grid = 512, int max_attempts = 50)
{
    RandomBuild rb;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        rb.input = random_input(degree, rs, rng, grid);
        rb.input.max_grid = max_grid;
        try {
            rb.result = build(rb.input);
            return rb;
        } catch (const Error& e) {
            switch (e.kind()) {
            case ErrorKind::ResolutionTooCoarse:
            case ErrorKind::SingularCurve:
            case ErrorKind::TangencyDetected:
            case ErrorKind::DuplicateCollision:
                ++rb.rejected;
                continue;
            default:
                throw;
            }
        }
    }
    fail(ErrorKind::ResolutionTooCoarse, "no valid random input after " + std::to_string(max_attempts) + " attempts");
}

} // namespace patchwork
