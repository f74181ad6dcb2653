#ifndef ASOS_METRICS_HPP
#define ASOS_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "asos/errors.hpp"

namespace asos::metrics {

// ---------------------------------------------------------------------------
// Scalar objectives: reproduction fit, Bollinger statistics, stabilization
// fit, breach counting and solution ranking.
// ---------------------------------------------------------------------------

struct ReproductionFitConfig {
    double w1 = 1.0;
    double w2 = 1.0;
};

/// w1 * mean absolute error + w2 * sum of |relative increment differences|
/// (the second term is un-normalized by design).
inline double reproduction_fitness(const std::vector<double>& real_series,
                                   const std::vector<double>& sim_series,
                                   const ReproductionFitConfig& cfg = {}) {
    if (real_series.size() != sim_series.size())
        throw ContractError("series length mismatch");
    std::size_t n = real_series.size();
    if (n < 2) throw ContractError("need at least two quarters");
    for (double p : real_series)
        if (p <= 0.0) throw ContractError("real prices must be strictly positive");
    double mae = 0.0;
    for (std::size_t i = 0; i < n; ++i) mae += std::fabs(real_series[i] - sim_series[i]);
    mae /= static_cast<double>(n);
    double inc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double r = (real_series[i + 1] - real_series[i]) / real_series[i];
        double s = (sim_series[i + 1] - sim_series[i]) / sim_series[i];
        inc += std::fabs(r - s);
    }
    return cfg.w1 * mae + cfg.w2 * inc;
}

struct BollingerConfig {
    int window = 4;     // N
    double k = 2.0;     // band multiple
};

struct BollingerResult {
    std::vector<double> ma;
    std::vector<double> sigma;
    std::vector<double> upper;
    std::vector<double> lower;
    double b_avg = 0.0; // mean band width over valid windows
};

/// N-term windows (j = i .. i+N-1) with a 1/N factor; sigma is the population
/// deviation of the window.
inline BollingerResult bollinger(const std::vector<double>& series, const BollingerConfig& cfg) {
    if (cfg.window < 2) throw ContractError("window must be >= 2");
    if (series.size() < static_cast<std::size_t>(cfg.window))
        throw ContractError("series shorter than window");
    BollingerResult r;
    std::size_t n_windows = series.size() - static_cast<std::size_t>(cfg.window) + 1;
    double width_sum = 0.0;
    for (std::size_t i = 0; i < n_windows; ++i) {
        double mean = 0.0;
        for (int j = 0; j < cfg.window; ++j) mean += series[i + static_cast<std::size_t>(j)];
        mean /= cfg.window;
        double var = 0.0;
        for (int j = 0; j < cfg.window; ++j) {
            double d = series[i + static_cast<std::size_t>(j)] - mean;
            var += d * d;
        }
        var /= cfg.window;
        double sd = std::sqrt(var);
        r.ma.push_back(mean);
        r.sigma.push_back(sd);
        r.upper.push_back(mean + cfg.k * sd);
        r.lower.push_back(mean - cfg.k * sd);
        width_sum += 2.0 * cfg.k * sd;
    }
    r.b_avg = width_sum / static_cast<double>(n_windows);
    return r;
}

struct StabilizationConfig {
    // the band-width term is weighted negative: fluctuation is suppressed
    // while traded quantity is encouraged, and the total is maximized
    double lambda1 = -1.0;
    double lambda2 = 1.0;
};

/// lambda1 * B_avg + lambda2 * mean per-step traded quantity; maximized.
inline double stabilization_fitness(const std::vector<double>& series,
                                    const std::vector<double>& volumes,
                                    const BollingerConfig& bcfg, const StabilizationConfig& scfg) {
    if (series.size() != volumes.size()) throw ContractError("series/volume length mismatch");
    double b_avg = bollinger(series, bcfg).b_avg;
    double vol_mean = 0.0;
    for (double v : volumes) vol_mean += v;
    if (!volumes.empty()) vol_mean /= static_cast<double>(volumes.size());
    return scfg.lambda1 * b_avg + scfg.lambda2 * vol_mean;
}

/// Counts trades at or beyond the fluctuation thresholds relative to the
/// opening price. The boundary is inclusive, mirroring LimUp/LimDown, and is
/// tested through the price ratio so integral tick prices land exactly.
inline int breach_count(const std::vector<double>& trade_prices, double p0, double lower_ratio,
                        double upper_ratio) {
    if (p0 <= 0.0) throw ContractError("opening price must be positive");
    int count = 0;
    for (double p : trade_prices) {
        double ratio = p / p0;
        if (ratio <= lower_ratio || ratio >= upper_ratio) ++count;
    }
    return count;
}

struct SolutionScore {
    int candidate_id = -1;
    double fitness = 0.0;    // stabilization fitness, higher is better
    double complexity = 0.0; // structural complexity, lower is better
    bool needs_expert_review = false;
};

/// Primary key: better stabilization fitness; secondary: lower structural
/// complexity. Candidates fully tied on both are flagged for expert review.
inline std::vector<SolutionScore> rank_solutions(std::vector<SolutionScore> candidates) {
    std::stable_sort(candidates.begin(), candidates.end(), [](const SolutionScore& a, const SolutionScore& b) {
        if (a.fitness != b.fitness) return a.fitness > b.fitness;
        if (a.complexity != b.complexity) return a.complexity < b.complexity;
        return a.candidate_id < b.candidate_id;
    });
    for (std::size_t i = 0; i + 1 < candidates.size(); ++i) {
        if (candidates[i].fitness == candidates[i + 1].fitness &&
            candidates[i].complexity == candidates[i + 1].complexity) {
            candidates[i].needs_expert_review = true;
            candidates[i + 1].needs_expert_review = true;
        }
    }
    return candidates;
}

} // namespace asos::metrics

#endif
