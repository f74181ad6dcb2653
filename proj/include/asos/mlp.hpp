#ifndef ASOS_MLP_HPP
#define ASOS_MLP_HPP

#include <cmath>
#include <string>
#include <vector>

#include "asos/errors.hpp"
#include "asos/rng.hpp"

namespace asos::rl {

enum class Activation { Tanh, Relu };

inline double softplus(double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); }
inline double sigmoid(double x) {
    return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

/// Digamma via the shift recurrence plus the asymptotic series; enough
/// precision for Beta-policy gradients.
inline double digamma(double x) {
    if (x <= 0.0) throw ContractError("digamma defined here for x > 0 only");
    double acc = 0.0;
    while (x < 6.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    double inv = 1.0 / x, inv2 = inv * inv;
    return acc + std::log(x) - 0.5 * inv -
           inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 / 252.0));
}

// ---------------------------------------------------------------------------
// Fully connected net with explicit forward/backward passes over a flat
// parameter vector. Hidden layers share one activation; the output layer is
// linear. Small enough that plain loops beat any library at desk scale, and
// the backward pass is what the finite-difference check certifies.
// ---------------------------------------------------------------------------

class Mlp {
public:
    Mlp() = default;
    Mlp(std::vector<int> widths, Activation act = Activation::Tanh)
        : widths_(std::move(widths)), act_(act) {
        if (widths_.size() < 2) throw ContractError("net needs at least input and output widths");
        std::size_t n = 0;
        for (std::size_t l = 0; l + 1 < widths_.size(); ++l)
            n += static_cast<std::size_t>(widths_[l] * widths_[l + 1] + widths_[l + 1]);
        params_.assign(n, 0.0);
    }

    void init(RandomStream& rng) {
        std::size_t at = 0;
        for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
            int fan_in = widths_[l], fan_out = widths_[l + 1];
            double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
            for (int i = 0; i < fan_in * fan_out; ++i) params_[at++] = rng.uniform(-scale, scale);
            for (int i = 0; i < fan_out; ++i) params_[at++] = 0.0;
        }
    }

    const std::vector<int>& widths() const { return widths_; }
    Activation activation() const { return act_; }
    int input_dim() const { return widths_.front(); }
    int output_dim() const { return widths_.back(); }
    std::size_t param_count() const { return params_.size(); }
    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }

    struct Trace {
        std::vector<std::vector<double>> post; // post[l]: activations entering layer l; post.back() = output
    };

    std::vector<double> forward(const std::vector<double>& in, Trace* trace = nullptr) const {
        if (static_cast<int>(in.size()) != input_dim())
            throw ContractError("net expects input dim " + std::to_string(input_dim()));
        std::vector<double> cur = in;
        if (trace) trace->post.assign(1, cur);
        std::size_t at = 0;
        for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
            int fan_in = widths_[l], fan_out = widths_[l + 1];
            std::vector<double> next(static_cast<std::size_t>(fan_out), 0.0);
            for (int o = 0; o < fan_out; ++o) {
                double z = 0.0;
                for (int i = 0; i < fan_in; ++i)
                    z += params_[at + static_cast<std::size_t>(o * fan_in + i)] * cur[static_cast<std::size_t>(i)];
                z += params_[at + static_cast<std::size_t>(fan_in * fan_out + o)];
                bool last = l + 2 == widths_.size();
                next[static_cast<std::size_t>(o)] =
                    last ? z : (act_ == Activation::Tanh ? std::tanh(z) : std::max(z, 0.0));
            }
            at += static_cast<std::size_t>(fan_in * fan_out + fan_out);
            cur = std::move(next);
            if (trace) trace->post.push_back(cur);
        }
        return cur;
    }

    /// Accumulates dLoss/dparams into `grad` given dLoss/doutput; returns
    /// dLoss/dinput. `grad` must already have param_count() entries.
    std::vector<double> backward(const Trace& trace, const std::vector<double>& dout,
                                 std::vector<double>& grad) const {
        std::vector<double> delta = dout;
        // walk layers backwards; recompute flat offsets per layer
        std::vector<std::size_t> offsets(widths_.size() - 1);
        std::size_t at = 0;
        for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
            offsets[l] = at;
            at += static_cast<std::size_t>(widths_[l] * widths_[l + 1] + widths_[l + 1]);
        }
        for (std::size_t l = widths_.size() - 1; l-- > 0;) {
            int fan_in = widths_[l], fan_out = widths_[l + 1];
            const auto& input = trace.post[l];
            const auto& output = trace.post[l + 1];
            bool last = l + 2 == widths_.size();
            std::vector<double> dz(static_cast<std::size_t>(fan_out));
            for (int o = 0; o < fan_out; ++o) {
                double d = delta[static_cast<std::size_t>(o)];
                if (!last) {
                    double y = output[static_cast<std::size_t>(o)];
                    d *= act_ == Activation::Tanh ? (1.0 - y * y) : (y > 0.0 ? 1.0 : 0.0);
                }
                dz[static_cast<std::size_t>(o)] = d;
            }
            std::vector<double> din(static_cast<std::size_t>(fan_in), 0.0);
            std::size_t base = offsets[l];
            for (int o = 0; o < fan_out; ++o) {
                for (int i = 0; i < fan_in; ++i) {
                    std::size_t wi = base + static_cast<std::size_t>(o * fan_in + i);
                    grad[wi] += dz[static_cast<std::size_t>(o)] * input[static_cast<std::size_t>(i)];
                    din[static_cast<std::size_t>(i)] += dz[static_cast<std::size_t>(o)] * params_[wi];
                }
                grad[base + static_cast<std::size_t>(fan_in * fan_out + o)] += dz[static_cast<std::size_t>(o)];
            }
            delta = std::move(din);
        }
        return delta;
    }

private:
    std::vector<int> widths_;
    Activation act_ = Activation::Tanh;
    std::vector<double> params_;
};

/// Plain stochastic gradient descent with momentum.
class SgdMomentum {
public:
    SgdMomentum(double lr = 1e-2, double momentum = 0.9) : lr_(lr), momentum_(momentum) {}

    void step(std::vector<double>& params, const std::vector<double>& grad) {
        if (velocity_.size() != params.size()) velocity_.assign(params.size(), 0.0);
        for (std::size_t i = 0; i < params.size(); ++i) {
            velocity_[i] = momentum_ * velocity_[i] + grad[i];
            params[i] -= lr_ * velocity_[i];
        }
    }

    double learning_rate() const { return lr_; }
    void set_learning_rate(double lr) { lr_ = lr; }

private:
    double lr_;
    double momentum_;
    std::vector<double> velocity_;
};

} // namespace asos::rl

#endif
