#pragma once

#include <array>

#include "prdkit/density_model.hpp"

namespace prdkit {

/// Two isotropic Gaussians: P at the origin, Q shifted by mu along every
/// coordinate.
struct ShiftConfig {
    std::size_t d = 64;
    double mu = 0.0;
    std::size_t n = 10000;
};

inline std::pair<DensityModel, DensityModel> shift_pair(const ShiftConfig& cfg) {
    if (cfg.d == 0) throw std::invalid_argument("shift_pair: d must be >= 1");
    if (cfg.mu < 0.0) throw std::invalid_argument("shift_pair: mu must be >= 0");
    std::vector<double> origin(cfg.d, 0.0), shifted(cfg.d, cfg.mu);
    return {isotropic_gaussian(std::move(origin)), isotropic_gaussian(std::move(shifted))};
}

/// Four-mode mixture pair on shared centers mu_l * 1_d; the weights differ
/// between P and Q (mode dropping, invention and re-weighting in one setup).
struct GmmConfig {
    std::size_t d = 64;
    std::array<double, 4> centers{0.0, -5.0, 3.0, 5.0};
    std::array<double, 4> p_weights{0.2, 0.2, 0.6, 0.0};
    std::array<double, 4> q_weights{0.0, 0.5, 0.1, 0.4};
};

inline GmmConfig gmm_preset_main() { return {}; }

inline GmmConfig gmm_preset_alternate() {
    GmmConfig cfg;
    cfg.p_weights = {0.3, 0.2, 0.5, 0.0};
    cfg.q_weights = {0.0, 0.5, 0.2, 0.3};
    return cfg;
}

inline std::pair<DensityModel, DensityModel> gmm_pair(const GmmConfig& cfg) {
    if (cfg.d == 0) throw std::invalid_argument("gmm_pair: d must be >= 1");
    auto build = [&](const std::array<double, 4>& weights) {
        std::vector<DensityModel> comps;
        for (double center : cfg.centers) comps.push_back(isotropic_gaussian(std::vector<double>(cfg.d, center)));
        return mixture(std::move(comps), std::vector<double>(weights.begin(), weights.end()));
    };
    return {build(cfg.p_weights), build(cfg.q_weights)};
}

}  // namespace prdkit
