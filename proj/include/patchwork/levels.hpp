#pragma once

// Critical levels of the one-variable tropical polynomial
//   T -> max_j (beta_j + 2 j T),
// whose breakpoints gamma_l all have multiplicity two.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "errors.hpp"

namespace patchwork {

struct LevelData {
    std::vector<double> gammas; // 0 < gamma_1 < ... < gamma_k
    std::vector<double> betas;  // beta_0 .. beta_k, normalized so beta_k = 0

    int count() const { return static_cast<int>(gammas.size()); }
};

inline void validate_gammas(const std::vector<double>& gammas)
{
    for (std::size_t l = 0; l < gammas.size(); ++l) {
        if (!(gammas[l] > 0.0) || !std::isfinite(gammas[l]))
            fail(ErrorKind::NonPositive, "critical levels must be positive and finite");
        if (l > 0 && !(gammas[l] > gammas[l - 1]))
            fail(ErrorKind::NotSorted, "critical levels must be strictly increasing");
    }
}

inline std::vector<double> betas_from_gammas(const std::vector<double>& gammas)
{
    validate_gammas(gammas);
    const std::size_t k = gammas.size();
    std::vector<double> betas(k + 1, 0.0);
    for (std::size_t l = k; l >= 1; --l)
        betas[l - 1] = betas[l] + 2.0 * gammas[l - 1];
    return betas;
}

inline std::vector<double> gammas_from_betas(const std::vector<double>& betas)
{
    if (betas.empty())
        fail(ErrorKind::DegenerateLevels, "need at least one coefficient");
    std::vector<double> gammas;
    gammas.reserve(betas.size() - 1);
    for (std::size_t l = 1; l < betas.size(); ++l) {
        const double gamma = 0.5 * (betas[l - 1] - betas[l]);
        if (!(gamma > 0.0) || !std::isfinite(gamma))
            fail(ErrorKind::DegenerateLevels, "breakpoint at a nonpositive level");
        if (!gammas.empty() && !(gamma > gammas.back()))
            fail(ErrorKind::DegenerateLevels, "breakpoints coincide or skip a slope");
        gammas.push_back(gamma);
    }
    return gammas;
}

/// Default placement 1, 2, ..., k.
inline LevelData default_levels(int k)
{
    LevelData data;
    for (int l = 1; l <= k; ++l)
        data.gammas.push_back(static_cast<double>(l));
    data.betas = betas_from_gammas(data.gammas);
    return data;
}

inline LevelData make_levels(const std::vector<double>& gammas)
{
    LevelData data;
    data.gammas = gammas;
    data.betas = betas_from_gammas(gammas);
    return data;
}

/// Value of the tropical polynomial at T.
inline double tropical_value(const std::vector<double>& betas, double t)
{
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < betas.size(); ++j)
        best = std::max(best, betas[j] + 2.0 * static_cast<double>(j) * t);
    return best;
}

} // namespace patchwork
