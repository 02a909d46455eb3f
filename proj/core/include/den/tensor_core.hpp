#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace den {

/// Reverse-mode tape over complex matrices. Complex data is a pair of real
/// planes; gradients follow the real-pair convention
///   g(X) = dL/dRe(X) + i dL/dIm(X)
/// for a real-valued loss L, so all parameters optimize as real vectors.
class Tape {
public:
    struct Var {
        int index = -1;
        bool valid() const { return index >= 0; }
    };

    Var constant(Eigen::MatrixXcd value);
    Var param(Eigen::MatrixXcd value);

    Var add(Var a, Var b);
    Var sub(Var a, Var b);
    /// Multiply by a fixed scalar.
    Var scale(Var a, std::complex<double> c);
    /// Add a fixed real scalar to a 1x1 node.
    Var add_scalar(Var a, double c);
    Var matmul(Var a, Var b);
    Var adjoint(Var a);
    /// Elementwise product with a fixed real 0/1 (or weight) mask.
    Var hadamard_mask(Var a, const Eigen::MatrixXd& mask);
    /// GeLU (erf form) applied to the real and imaginary planes independently.
    Var gelu(Var a);
    /// Broadcast a 1 x d row vector over all rows of an N x d node.
    Var add_rowvec(Var a, Var row);
    /// Per-mode channel mix: row m of `coeffs` (K x d_in) is multiplied by
    /// block m of `blocks` ((K d_in) x d_out).
    Var mode_channel_mix(Var blocks, Var coeffs);
    /// (H + eps I)^{-1} X with H expected Hermitian positive semidefinite;
    /// solved by partial-pivot LU so the adjoint is exact for any H.
    Var hermitian_solve(Var h, Var x, double eps);
    /// Sum of squared moduli as a real 1x1 node.
    Var frobenius_sq(Var a);
    /// Re(trace(X)) as a real 1x1 node.
    Var trace_real(Var a);

    const Eigen::MatrixXcd& value(Var v) const { return nodes_[static_cast<std::size_t>(v.index)].value; }
    const Eigen::MatrixXcd& grad(Var v) const { return nodes_[static_cast<std::size_t>(v.index)].grad; }

    /// Reverse sweep from a 1x1 node, seeding dL/d(node) = seed.
    void backward(Var loss, double seed = 1.0);

    std::size_t size() const { return nodes_.size(); }

private:
    struct Node {
        Eigen::MatrixXcd value;
        Eigen::MatrixXcd grad;
        bool needs_grad = false;
        std::function<void(Tape&)> backprop;  // empty for leaves/constants
    };

    Var emplace(Eigen::MatrixXcd value, bool needs_grad, std::function<void(Tape&)> backprop);
    Node& node(Var v) { return nodes_[static_cast<std::size_t>(v.index)]; }
    void accumulate(Var v, const Eigen::MatrixXcd& g);

    std::vector<Node> nodes_;
};

using TapeVar = Tape::Var;

/// Loss closure: evaluates the loss at `params`; when `grads` is non-null it
/// must also fill the parameter gradients (same shapes as params).
using LossFn =
    std::function<double(const std::vector<Eigen::MatrixXcd>&, std::vector<Eigen::MatrixXcd>*)>;

/// Central finite differences (step 1e-5) on `probe_count` randomly chosen
/// real parameter coordinates; returns the maximum relative error
/// |analytic - fd| / max(1e-8, |fd|). Deterministic for a fixed probe seed.
double grad_check(const LossFn& f, const std::vector<Eigen::MatrixXcd>& params, int probe_count,
                  std::uint64_t probe_seed = 7, double step = 1e-5);

struct AdamConfig {
    double lr = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 1e-6;
};

/// Adam with bias correction and decoupled weight decay; complex parameters
/// update as independent real/imaginary planes.
class AdamState {
public:
    AdamState(AdamConfig cfg, const std::vector<Eigen::MatrixXcd>& params);

    /// One update step; `lr_override` < 0 keeps the configured rate.
    void step(std::vector<Eigen::MatrixXcd>& params, const std::vector<Eigen::MatrixXcd>& grads,
              double lr_override = -1.0);

    std::int64_t step_count() const { return step_; }
    const AdamConfig& config() const { return cfg_; }

private:
    AdamConfig cfg_;
    std::int64_t step_ = 0;
    std::vector<Eigen::MatrixXd> m_re_, m_im_, v_re_, v_im_;
};

}  // namespace den
