#ifndef ASOS_POLICY_HPP
#define ASOS_POLICY_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "asos/mlp.hpp"
#include "asos/rng.hpp"

namespace asos::rl {

// ---------------------------------------------------------------------------
// Beta-distributed continuous actions
// ---------------------------------------------------------------------------

/// Sample low + (high-low) * X with X ~ Beta(alpha, beta).
inline double sample_beta_action(double alpha, double beta, double low, double high,
                                 RandomStream& rng) {
    if (alpha <= 0.0 || beta <= 0.0) throw ContractError("beta shapes must be positive");
    if (!(low < high)) throw ContractError("action bounds must satisfy low < high");
    return low + (high - low) * rng.beta(alpha, beta);
}

/// Log density of a scaled Beta action; the unit-interval coordinate is
/// clamped away from the endpoints so densities stay finite.
inline double beta_log_pdf(double action, double alpha, double beta, double low, double high) {
    if (alpha <= 0.0 || beta <= 0.0) throw ContractError("beta shapes must be positive");
    double x = (action - low) / (high - low);
    x = std::clamp(x, 1e-9, 1.0 - 1e-9);
    return (alpha - 1.0) * std::log(x) + (beta - 1.0) * std::log1p(-x) + std::lgamma(alpha + beta) -
           std::lgamma(alpha) - std::lgamma(beta) - std::log(high - low);
}

// ---------------------------------------------------------------------------
// Observation normalization: static affine prescale to [-1, 1] from declared
// raw bounds, then running standardization, then clip to [-5, 5].
// ---------------------------------------------------------------------------

class RunningNormalizer {
public:
    RunningNormalizer() = default;
    RunningNormalizer(std::vector<double> raw_low, std::vector<double> raw_high, double clip = 5.0)
        : low_(std::move(raw_low)), high_(std::move(raw_high)), clip_(clip) {
        if (low_.size() != high_.size()) throw ContractError("bound vectors must align");
        std::size_t n = low_.size();
        count_ = 0.0;
        mean_.assign(n, 0.0);
        m2_.assign(n, 0.0);
    }

    std::size_t dims() const { return low_.size(); }
    double count() const { return count_; }
    const std::vector<double>& mean() const { return mean_; }
    std::vector<double> variance() const {
        std::vector<double> v(m2_.size(), 0.0);
        if (count_ > 0.0)
            for (std::size_t i = 0; i < m2_.size(); ++i) v[i] = m2_[i] / count_;
        return v;
    }

    std::vector<double> prescale(const std::vector<double>& raw) const {
        check(raw);
        std::vector<double> out(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) {
            double span = high_[i] - low_[i];
            out[i] = span == 0.0 ? 0.0 : 2.0 * (raw[i] - low_[i]) / span - 1.0;
        }
        return out;
    }

    /// Welford accumulation over prescaled samples.
    void update(const std::vector<double>& raw) {
        auto pre = prescale(raw);
        count_ += 1.0;
        for (std::size_t i = 0; i < pre.size(); ++i) {
            double d = pre[i] - mean_[i];
            mean_[i] += d / count_;
            m2_[i] += d * (pre[i] - mean_[i]);
        }
    }

    std::vector<double> apply(const std::vector<double>& raw) const {
        auto pre = prescale(raw);
        auto var = variance();
        for (std::size_t i = 0; i < pre.size(); ++i) {
            double z = count_ > 0.0 ? (pre[i] - mean_[i]) / std::sqrt(var[i] + 1e-8) : pre[i];
            pre[i] = std::clamp(z, -clip_, clip_);
        }
        return pre;
    }

private:
    void check(const std::vector<double>& raw) const {
        if (raw.size() != low_.size()) throw ContractError("observation dim mismatch");
    }
    std::vector<double> low_, high_;
    double clip_ = 5.0;
    double count_ = 0.0;
    std::vector<double> mean_, m2_;
};

// ---------------------------------------------------------------------------
// Neural policy: one net body with Beta action heads (alpha/beta raw pairs
// per action dimension) and a switch-gate head.
// ---------------------------------------------------------------------------

struct PolicyHeads {
    std::vector<double> alpha, beta; // per action dimension, both > 1
    double gate_logit = 0.0;
    double gate_prob = 0.5;
};

class NeuralPolicy {
public:
    NeuralPolicy() = default;
    NeuralPolicy(int obs_dim, int action_dim, std::vector<int> hidden, double action_low,
                 double action_high, Activation act = Activation::Tanh, int hidden_state_size = 0)
        : obs_dim_(obs_dim), action_dim_(action_dim), low_(action_low), high_(action_high),
          hidden_state_size_(hidden_state_size) {
        std::vector<int> widths = {obs_dim};
        for (int h : hidden) widths.push_back(h);
        widths.push_back(2 * action_dim + 1);
        net_ = Mlp(std::move(widths), act);
    }

    void init(RandomStream& rng) { net_.init(rng); }

    int obs_dim() const { return obs_dim_; }
    int action_dim() const { return action_dim_; }
    double action_low() const { return low_; }
    double action_high() const { return high_; }
    int hidden_state_size() const { return hidden_state_size_; }
    Mlp& net() { return net_; }
    const Mlp& net() const { return net_; }

    PolicyHeads heads(const std::vector<double>& obs, Mlp::Trace* trace = nullptr) const {
        auto out = net_.forward(obs, trace);
        PolicyHeads h;
        for (int d = 0; d < action_dim_; ++d) {
            h.alpha.push_back(softplus(out[static_cast<std::size_t>(2 * d)]) + 1.0);
            h.beta.push_back(softplus(out[static_cast<std::size_t>(2 * d + 1)]) + 1.0);
        }
        h.gate_logit = out[static_cast<std::size_t>(2 * action_dim_)];
        h.gate_prob = sigmoid(h.gate_logit);
        return h;
    }

    /// Mean action per dimension (used for deterministic evaluation).
    std::vector<double> mean_action(const std::vector<double>& obs) const {
        auto h = heads(obs);
        std::vector<double> a(static_cast<std::size_t>(action_dim_));
        for (int d = 0; d < action_dim_; ++d) {
            double m = h.alpha[static_cast<std::size_t>(d)] /
                       (h.alpha[static_cast<std::size_t>(d)] + h.beta[static_cast<std::size_t>(d)]);
            a[static_cast<std::size_t>(d)] = low_ + (high_ - low_) * m;
        }
        return a;
    }

private:
    int obs_dim_ = 0;
    int action_dim_ = 0;
    double low_ = 0.0, high_ = 1.0;
    int hidden_state_size_ = 0; // recurrent interfaces carried; 0 at desk scale
    Mlp net_;
};

// ---------------------------------------------------------------------------
// Gated policy: u(s) = g(s) * pi(s) + (1 - g(s)) * pi_cd(s)
// ---------------------------------------------------------------------------

using ExpertFn = std::function<std::vector<double>(const std::vector<double>&)>;

struct GatedPolicy {
    ExpertFn expert; // pi_cd
    NeuralPolicy net;
};

struct GatedAction {
    std::vector<double> u;        // executed action
    std::vector<double> net_action;
    std::vector<double> expert_action;
    double gate = 0.0;            // sampled {0,1} or continuous [0,1]
    double log_prob = 0.0;        // joint log-prob of (net action, discrete gate)
};

/// The Eq.-style blend, exposed separately so the identities are testable
/// arithmetic: g = 0 and g = 1 reproduce one side bit-exactly.
inline std::vector<double> gate_blend(double g, const std::vector<double>& net_action,
                                      const std::vector<double>& expert_action) {
    if (net_action.size() != expert_action.size())
        throw ContractError("expert and net action dims differ");
    std::vector<double> u(net_action.size());
    if (g == 0.0) u = expert_action;
    else if (g == 1.0) u = net_action;
    else
        for (std::size_t i = 0; i < u.size(); ++i)
            u[i] = g * net_action[i] + (1.0 - g) * expert_action[i];
    return u;
}

/// Samples the Beta action heads and the Bernoulli gate, blends with the
/// expert rule, and reports the joint log-probability used by training.
inline GatedAction gated_act(const GatedPolicy& policy, const std::vector<double>& obs,
                             RandomStream& rng, bool continuous_gate = false) {
    const NeuralPolicy& np = policy.net;
    auto h = np.heads(obs);
    GatedAction out;
    out.net_action.resize(static_cast<std::size_t>(np.action_dim()));
    for (int d = 0; d < np.action_dim(); ++d) {
        double a = sample_beta_action(h.alpha[static_cast<std::size_t>(d)],
                                      h.beta[static_cast<std::size_t>(d)], np.action_low(),
                                      np.action_high(), rng);
        out.net_action[static_cast<std::size_t>(d)] = a;
        out.log_prob += beta_log_pdf(a, h.alpha[static_cast<std::size_t>(d)],
                                     h.beta[static_cast<std::size_t>(d)], np.action_low(),
                                     np.action_high());
    }
    try {
        out.expert_action = policy.expert(obs);
    } catch (const std::exception& e) {
        throw Error(std::string("policy error: expert rule failed: ") + e.what());
    }
    if (continuous_gate) {
        out.gate = h.gate_prob;
    } else {
        bool g = rng.bernoulli(h.gate_prob);
        out.gate = g ? 1.0 : 0.0;
        out.log_prob += g ? std::log(std::max(h.gate_prob, 1e-12))
                          : std::log(std::max(1.0 - h.gate_prob, 1e-12));
    }
    out.u = gate_blend(out.gate, out.net_action, out.expert_action);
    return out;
}

/// Same path with the gate forced; used by evaluation and the gate-identity
/// checks.
inline GatedAction gated_act_forced(const GatedPolicy& policy, const std::vector<double>& obs,
                                    double gate, RandomStream& rng) {
    const NeuralPolicy& np = policy.net;
    auto h = np.heads(obs);
    GatedAction out;
    out.gate = gate;
    for (int d = 0; d < np.action_dim(); ++d)
        out.net_action.push_back(sample_beta_action(h.alpha[static_cast<std::size_t>(d)],
                                                    h.beta[static_cast<std::size_t>(d)],
                                                    np.action_low(), np.action_high(), rng));
    out.expert_action = policy.expert(obs);
    out.u = gate_blend(gate, out.net_action, out.expert_action);
    return out;
}

} // namespace asos::rl

#endif
