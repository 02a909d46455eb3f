#include "den/tensor_core.hpp"

#include <cmath>
#include <numbers>

#include "den/errors.hpp"
#include "den/rng.hpp"

namespace den {

namespace {

double gelu_scalar(double x) { return 0.5 * x * (1.0 + std::erf(x / std::numbers::sqrt2)); }

double gelu_derivative(double x) {
    const double phi_cdf = 0.5 * (1.0 + std::erf(x / std::numbers::sqrt2));
    const double phi_pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    return phi_cdf + x * phi_pdf;
}

}  // namespace

Tape::Var Tape::emplace(Eigen::MatrixXcd value, bool needs_grad, std::function<void(Tape&)> backprop) {
    Node n;
    n.value = std::move(value);
    n.needs_grad = needs_grad;
    n.backprop = std::move(backprop);
    nodes_.push_back(std::move(n));
    return {static_cast<int>(nodes_.size()) - 1};
}

void Tape::accumulate(Var v, const Eigen::MatrixXcd& g) {
    Node& n = node(v);
    if (!n.needs_grad) return;
    if (n.grad.size() == 0) {
        n.grad = g;
    } else {
        n.grad += g;
    }
}

Tape::Var Tape::constant(Eigen::MatrixXcd value) { return emplace(std::move(value), false, {}); }

Tape::Var Tape::param(Eigen::MatrixXcd value) { return emplace(std::move(value), true, {}); }

Tape::Var Tape::add(Var a, Var b) {
    if (value(a).rows() != value(b).rows() || value(a).cols() != value(b).cols())
        throw ShapeMismatch("add: shape mismatch");
    const bool ng = node(a).needs_grad || node(b).needs_grad;
    Var out = emplace(value(a) + value(b), ng, {});
    if (ng)
        node(out).backprop = [a, b, out](Tape& t) {
            const auto& g = t.grad(out);
            t.accumulate(a, g);
            t.accumulate(b, g);
        };
    return out;
}

Tape::Var Tape::sub(Var a, Var b) {
    if (value(a).rows() != value(b).rows() || value(a).cols() != value(b).cols())
        throw ShapeMismatch("sub: shape mismatch");
    const bool ng = node(a).needs_grad || node(b).needs_grad;
    Var out = emplace(value(a) - value(b), ng, {});
    if (ng)
        node(out).backprop = [a, b, out](Tape& t) {
            const auto& g = t.grad(out);
            t.accumulate(a, g);
            t.accumulate(b, -g);
        };
    return out;
}

Tape::Var Tape::scale(Var a, std::complex<double> c) {
    const bool ng = node(a).needs_grad;
    Var out = emplace(c * value(a), ng, {});
    if (ng)
        node(out).backprop = [a, c, out](Tape& t) { t.accumulate(a, std::conj(c) * t.grad(out)); };
    return out;
}

Tape::Var Tape::add_scalar(Var a, double c) {
    if (value(a).size() != 1) throw ShapeMismatch("add_scalar expects a 1x1 node");
    const bool ng = node(a).needs_grad;
    Var out = emplace(value(a).array() + c, ng, {});
    if (ng)
        node(out).backprop = [a, out](Tape& t) { t.accumulate(a, t.grad(out)); };
    return out;
}

Tape::Var Tape::matmul(Var a, Var b) {
    if (value(a).cols() != value(b).rows()) throw ShapeMismatch("matmul: inner dimensions differ");
    const bool ng = node(a).needs_grad || node(b).needs_grad;
    Var out = emplace(value(a) * value(b), ng, {});
    if (ng)
        node(out).backprop = [a, b, out](Tape& t) {
            const auto& g = t.grad(out);
            if (t.node(a).needs_grad) t.accumulate(a, g * t.value(b).adjoint());
            if (t.node(b).needs_grad) t.accumulate(b, t.value(a).adjoint() * g);
        };
    return out;
}

Tape::Var Tape::adjoint(Var a) {
    const bool ng = node(a).needs_grad;
    Var out = emplace(value(a).adjoint(), ng, {});
    if (ng)
        node(out).backprop = [a, out](Tape& t) { t.accumulate(a, t.grad(out).adjoint()); };
    return out;
}

Tape::Var Tape::hadamard_mask(Var a, const Eigen::MatrixXd& mask) {
    if (value(a).rows() != mask.rows() || value(a).cols() != mask.cols())
        throw ShapeMismatch("hadamard_mask: shape mismatch");
    const bool ng = node(a).needs_grad;
    Var out = emplace(value(a).cwiseProduct(mask.cast<std::complex<double>>()), ng, {});
    if (ng)
        node(out).backprop = [a, mask, out](Tape& t) {
            t.accumulate(a, t.grad(out).cwiseProduct(mask.cast<std::complex<double>>()));
        };
    return out;
}

Tape::Var Tape::gelu(Var a) {
    const auto& x = value(a);
    Eigen::MatrixXcd y(x.rows(), x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j)
        for (Eigen::Index i = 0; i < x.rows(); ++i)
            y(i, j) = {gelu_scalar(x(i, j).real()), gelu_scalar(x(i, j).imag())};
    const bool ng = node(a).needs_grad;
    Var out = emplace(std::move(y), ng, {});
    if (ng)
        node(out).backprop = [a, out](Tape& t) {
            const auto& x2 = t.value(a);
            const auto& g = t.grad(out);
            Eigen::MatrixXcd gx(x2.rows(), x2.cols());
            for (Eigen::Index j = 0; j < x2.cols(); ++j)
                for (Eigen::Index i = 0; i < x2.rows(); ++i)
                    gx(i, j) = {g(i, j).real() * gelu_derivative(x2(i, j).real()),
                                g(i, j).imag() * gelu_derivative(x2(i, j).imag())};
            t.accumulate(a, gx);
        };
    return out;
}

Tape::Var Tape::add_rowvec(Var a, Var row) {
    if (value(row).rows() != 1 || value(row).cols() != value(a).cols())
        throw ShapeMismatch("add_rowvec: row vector shape mismatch");
    const bool ng = node(a).needs_grad || node(row).needs_grad;
    Eigen::MatrixXcd y = value(a);
    y.rowwise() += value(row).row(0);
    Var out = emplace(std::move(y), ng, {});
    if (ng)
        node(out).backprop = [a, row, out](Tape& t) {
            const auto& g = t.grad(out);
            t.accumulate(a, g);
            if (t.node(row).needs_grad) t.accumulate(row, g.colwise().sum());
        };
    return out;
}

Tape::Var Tape::mode_channel_mix(Var blocks, Var coeffs) {
    const auto& r = value(blocks);
    const auto& c = value(coeffs);
    const Eigen::Index k = c.rows();
    const Eigen::Index d_in = c.cols();
    if (r.rows() != k * d_in) throw ShapeMismatch("mode_channel_mix: block stack height mismatch");
    const Eigen::Index d_out = r.cols();
    Eigen::MatrixXcd y(k, d_out);
    for (Eigen::Index m = 0; m < k; ++m) y.row(m) = c.row(m) * r.middleRows(m * d_in, d_in);
    const bool ng = node(blocks).needs_grad || node(coeffs).needs_grad;
    Var out = emplace(std::move(y), ng, {});
    if (ng)
        node(out).backprop = [blocks, coeffs, out, k, d_in](Tape& t) {
            const auto& r2 = t.value(blocks);
            const auto& c2 = t.value(coeffs);
            const auto& g = t.grad(out);
            if (t.node(coeffs).needs_grad) {
                Eigen::MatrixXcd gc(k, d_in);
                for (Eigen::Index m = 0; m < k; ++m)
                    gc.row(m) = g.row(m) * r2.middleRows(m * d_in, d_in).adjoint();
                t.accumulate(coeffs, gc);
            }
            if (t.node(blocks).needs_grad) {
                Eigen::MatrixXcd gr = Eigen::MatrixXcd::Zero(r2.rows(), r2.cols());
                for (Eigen::Index m = 0; m < k; ++m)
                    gr.middleRows(m * d_in, d_in) = c2.row(m).adjoint() * g.row(m);
                t.accumulate(blocks, gr);
            }
        };
    return out;
}

Tape::Var Tape::hermitian_solve(Var h, Var x, double eps) {
    const auto& hv = value(h);
    const auto& xv = value(x);
    if (hv.rows() != hv.cols() || hv.rows() != xv.rows())
        throw ShapeMismatch("hermitian_solve: shape mismatch");
    Eigen::MatrixXcd reg = hv + eps * Eigen::MatrixXcd::Identity(hv.rows(), hv.cols());
    auto lu = std::make_shared<Eigen::PartialPivLU<Eigen::MatrixXcd>>(reg);
    Eigen::MatrixXcd y = lu->solve(xv);
    if (!y.allFinite()) throw SolveFailed("regularized Gram solve produced non-finite values");
    const double resid = (reg * y - xv).norm();
    if (resid > 1e-6 * (reg.norm() * y.norm() + xv.norm()) + 1e-12)
        throw SolveFailed("regularized Gram solve residual too large");
    const bool ng = node(h).needs_grad || node(x).needs_grad;
    Var out = emplace(std::move(y), ng, {});
    if (ng)
        node(out).backprop = [h, x, out, lu](Tape& t) {
            const auto& g = t.grad(out);
            Eigen::MatrixXcd gx = lu->adjoint().solve(g);
            if (t.node(x).needs_grad) t.accumulate(x, gx);
            if (t.node(h).needs_grad) t.accumulate(h, -gx * t.value(out).adjoint());
        };
    return out;
}

Tape::Var Tape::frobenius_sq(Var a) {
    Eigen::MatrixXcd y(1, 1);
    y(0, 0) = value(a).squaredNorm();
    const bool ng = node(a).needs_grad;
    Var out = emplace(std::move(y), ng, {});
    if (ng)
        node(out).backprop = [a, out](Tape& t) {
            const double gy = t.grad(out)(0, 0).real();
            t.accumulate(a, 2.0 * gy * t.value(a));
        };
    return out;
}

Tape::Var Tape::trace_real(Var a) {
    if (value(a).rows() != value(a).cols()) throw ShapeMismatch("trace_real expects a square node");
    Eigen::MatrixXcd y(1, 1);
    y(0, 0) = value(a).trace().real();
    const bool ng = node(a).needs_grad;
    Var out = emplace(std::move(y), ng, {});
    if (ng)
        node(out).backprop = [a, out](Tape& t) {
            const double gy = t.grad(out)(0, 0).real();
            const Eigen::Index n = t.value(a).rows();
            Eigen::MatrixXcd gi = Eigen::MatrixXcd::Zero(n, n);
            gi.diagonal().setConstant(gy);
            t.accumulate(a, gi);
        };
    return out;
}

void Tape::backward(Var loss, double seed) {
    if (value(loss).size() != 1) throw ShapeMismatch("backward expects a 1x1 loss node");
    for (auto& n : nodes_) n.grad.resize(0, 0);
    Node& l = node(loss);
    l.grad = Eigen::MatrixXcd::Constant(1, 1, seed);
    for (int i = loss.index; i >= 0; --i) {
        Node& n = nodes_[static_cast<std::size_t>(i)];
        if (n.backprop && n.needs_grad && n.grad.size() != 0) n.backprop(*this);
    }
    // Leaves that never received a contribution expose zero gradients.
    for (auto& n : nodes_)
        if (n.needs_grad && n.grad.size() == 0) n.grad = Eigen::MatrixXcd::Zero(n.value.rows(), n.value.cols());
}

double grad_check(const LossFn& f, const std::vector<Eigen::MatrixXcd>& params, int probe_count,
                  std::uint64_t probe_seed, double step) {
    std::vector<Eigen::MatrixXcd> grads;
    f(params, &grads);
    if (grads.size() != params.size()) throw ShapeMismatch("grad_check: gradient count mismatch");

    std::int64_t total_coords = 0;
    for (const auto& p : params) total_coords += 2 * p.size();
    if (total_coords == 0) return 0.0;

    Pcg64Stream rng(probe_seed);
    double worst = 0.0;
    std::vector<Eigen::MatrixXcd> work = params;
    for (int probe = 0; probe < probe_count; ++probe) {
        const auto coord = static_cast<std::int64_t>(rng.next_u64() % static_cast<std::uint64_t>(total_coords));
        std::int64_t rem = coord;
        std::size_t pi = 0;
        while (rem >= 2 * params[pi].size()) {
            rem -= 2 * params[pi].size();
            ++pi;
        }
        const Eigen::Index flat = static_cast<Eigen::Index>(rem / 2);
        const bool imag_plane = (rem % 2) != 0;
        const Eigen::Index r = flat % params[pi].rows();
        const Eigen::Index c = flat / params[pi].rows();

        auto nudge = [&](double delta) {
            std::complex<double> v = params[pi](r, c);
            if (imag_plane)
                v.imag(v.imag() + delta);
            else
                v.real(v.real() + delta);
            work[pi](r, c) = v;
        };
        nudge(step);
        const double lp = f(work, nullptr);
        nudge(-step);
        const double lm = f(work, nullptr);
        work[pi](r, c) = params[pi](r, c);

        const double fd = (lp - lm) / (2.0 * step);
        const double analytic = imag_plane ? grads[pi](r, c).imag() : grads[pi](r, c).real();
        const double rel = std::abs(analytic - fd) / std::max(1e-8, std::abs(fd));
        worst = std::max(worst, rel);
    }
    return worst;
}

AdamState::AdamState(AdamConfig cfg, const std::vector<Eigen::MatrixXcd>& params) : cfg_(cfg) {
    for (const auto& p : params) {
        m_re_.emplace_back(Eigen::MatrixXd::Zero(p.rows(), p.cols()));
        m_im_.emplace_back(Eigen::MatrixXd::Zero(p.rows(), p.cols()));
        v_re_.emplace_back(Eigen::MatrixXd::Zero(p.rows(), p.cols()));
        v_im_.emplace_back(Eigen::MatrixXd::Zero(p.rows(), p.cols()));
    }
}

void AdamState::step(std::vector<Eigen::MatrixXcd>& params, const std::vector<Eigen::MatrixXcd>& grads,
                     double lr_override) {
    if (params.size() != m_re_.size() || grads.size() != params.size())
        throw ShapeMismatch("adam_step: parameter/gradient count mismatch");
    const double lr = lr_override >= 0.0 ? lr_override : cfg_.lr;
    ++step_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));
    for (std::size_t k = 0; k < params.size(); ++k) {
        Eigen::MatrixXd pr = params[k].real();
        Eigen::MatrixXd pi = params[k].imag();
        const Eigen::MatrixXd gr = grads[k].real();
        const Eigen::MatrixXd gi = grads[k].imag();
        if (cfg_.weight_decay != 0.0) {
            pr *= (1.0 - lr * cfg_.weight_decay);
            pi *= (1.0 - lr * cfg_.weight_decay);
        }
        auto update_plane = [&](Eigen::MatrixXd& m, Eigen::MatrixXd& v, const Eigen::MatrixXd& g,
                                Eigen::MatrixXd& p) {
            m = cfg_.beta1 * m + (1.0 - cfg_.beta1) * g;
            v = cfg_.beta2 * v + (1.0 - cfg_.beta2) * g.cwiseProduct(g);
            const Eigen::MatrixXd m_hat = m / bc1;
            const Eigen::MatrixXd v_hat = v / bc2;
            p -= lr * (m_hat.array() / (v_hat.array().sqrt() + cfg_.eps)).matrix();
        };
        update_plane(m_re_[k], v_re_[k], gr, pr);
        update_plane(m_im_[k], v_im_[k], gi, pi);
        params[k].real() = pr;
        params[k].imag() = pi;
    }
}

}  // namespace den
