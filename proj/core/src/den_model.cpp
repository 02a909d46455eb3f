#include "den/den_model.hpp"

#include "den/sparse.hpp"

#include <cmath>

#include "den/errors.hpp"
#include "den/linalg.hpp"
#include "den/rng.hpp"

namespace den {

const char* to_string(MixingKind k) {
    switch (k) {
        case MixingKind::blr: return "blr";
        case MixingKind::banded_full: return "banded_full";
        case MixingKind::dense: return "dense";
        case MixingKind::none: return "none";
    }
    return "?";
}

MixingKind mixing_kind_from_string(const std::string& s) {
    if (s == "blr") return MixingKind::blr;
    if (s == "banded_full") return MixingKind::banded_full;
    if (s == "dense") return MixingKind::dense;
    if (s == "none") return MixingKind::none;
    throw ValidationError("unknown mixing kind: " + s);
}

void DenConfig::validate() const {
    if (layers < 1) throw ValidationError("config: layers must be >= 1");
    if (channels < 1) throw ValidationError("config: channels must be >= 1");
    if (k_pod < 1) throw ValidationError("config: k_pod must be >= 1");
    if (mix_rank < 1 || mix_rank > k_pod) throw ValidationError("config: mix_rank must lie in [1, k_pod]");
    if (bandwidth < 0) throw ValidationError("config: bandwidth must be >= 0");
    if (k_out < 1) throw ValidationError("config: k_out must be >= 1");
}

Eigen::MatrixXd BandMask::materialize() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = std::max<Eigen::Index>(0, i - bandwidth);
             j <= std::min(dim - 1, i + bandwidth); ++j)
            m(i, j) = 1.0;
    return m;
}

std::vector<Eigen::MatrixXcd*> DenParameters::flat() {
    std::vector<Eigen::MatrixXcd*> out{&lift_w, &lift_b};
    for (auto& l : layers) {
        out.push_back(&l.r_blocks);
        if (l.mix_u.size() != 0) out.push_back(&l.mix_u);
        if (l.mix_w.size() != 0) out.push_back(&l.mix_w);
        out.push_back(&l.pointwise);
        out.push_back(&l.bias);
    }
    out.push_back(&proj_w);
    out.push_back(&proj_b);
    return out;
}

std::vector<const Eigen::MatrixXcd*> DenParameters::flat() const {
    auto mut = const_cast<DenParameters*>(this)->flat();
    return {mut.begin(), mut.end()};
}

std::vector<std::string> DenParameters::flat_names() const {
    std::vector<std::string> out{"lift.w", "lift.b"};
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const std::string p = "layer" + std::to_string(l) + ".";
        out.push_back(p + "R");
        if (layers[l].mix_u.size() != 0) out.push_back(p + "mixU");
        if (layers[l].mix_w.size() != 0) out.push_back(p + "mixW");
        out.push_back(p + "pw");
        out.push_back(p + "bias");
    }
    out.push_back("proj.w");
    out.push_back("proj.b");
    return out;
}

namespace {

Eigen::MatrixXcd uniform_complex(Pcg64Stream& rng, Eigen::Index rows, Eigen::Index cols, double scale) {
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) {
            const double re = (2.0 * rng.uniform() - 1.0) * scale;
            const double im = (2.0 * rng.uniform() - 1.0) * scale;
            m(i, j) = {re, im};
        }
    return m;
}

}  // namespace

DenParameters init_parameters(const DenConfig& config) {
    config.validate();
    Pcg64Stream rng(mix_seed(config.seed, 0xd2f1ULL, 0));
    DenParameters p;
    p.config = config;
    const Eigen::Index d = config.channels, k = config.k_pod;
    p.lift_w = uniform_complex(rng, 4, d, 1.0 / 2.0);
    p.lift_b = Eigen::MatrixXcd::Zero(1, d);
    const double r_scale = 1.0 / (static_cast<double>(d) * std::sqrt(static_cast<double>(k)));
    const double factor_scale =
        1.0 / std::sqrt(static_cast<double>(config.mix_rank) * static_cast<double>(2 * config.bandwidth + 1));
    for (int l = 0; l < config.layers; ++l) {
        LayerParameters layer;
        layer.r_blocks = uniform_complex(rng, k * d, d, r_scale);
        switch (config.mixing_kind) {
            case MixingKind::blr:
                layer.mix_u = uniform_complex(rng, k, config.mix_rank, factor_scale);
                layer.mix_w = uniform_complex(rng, k, config.mix_rank, factor_scale);
                break;
            case MixingKind::banded_full:
                layer.mix_u = uniform_complex(rng, k, k, 1.0 / std::sqrt(static_cast<double>(2 * config.bandwidth + 1)));
                break;
            case MixingKind::dense:
                layer.mix_u = uniform_complex(rng, k, k, 1.0 / std::sqrt(static_cast<double>(k)));
                break;
            case MixingKind::none:
                break;
        }
        layer.pointwise = Eigen::MatrixXcd::Identity(d, d) + uniform_complex(rng, d, d, 0.01);
        layer.bias = Eigen::MatrixXcd::Zero(1, d);
        p.layers.push_back(std::move(layer));
    }
    p.proj_w = uniform_complex(rng, d, config.k_out, 1.0 / std::sqrt(static_cast<double>(d)));
    p.proj_b = Eigen::MatrixXcd::Zero(1, config.k_out);
    return p;
}

std::int64_t count_params(const DenConfig& config) {
    config.validate();
    const std::int64_t d = config.channels, k = config.k_pod, r = config.mix_rank;
    std::int64_t per_layer = 2 * d * d * k;  // R
    switch (config.mixing_kind) {
        case MixingKind::blr: per_layer += 2 * (2 * k * r); break;
        case MixingKind::banded_full:
        case MixingKind::dense: per_layer += 2 * k * k; break;
        case MixingKind::none: break;
    }
    per_layer += 2 * (d * d + d);  // pointwise + bias
    std::int64_t total = 2 * (4 * d + d);  // lift
    total += config.layers * per_layer;
    total += 2 * (d * config.k_out + config.k_out);  // projection
    return total;
}

Eigen::MatrixXcd apply_mixing(const DenConfig& config, const LayerParameters& layer,
                              const Eigen::MatrixXcd& c) {
    if (c.rows() != config.k_pod) throw ShapeMismatch("apply_mixing: coefficient rows != k_pod");
    switch (config.mixing_kind) {
        case MixingKind::none:
            return c;
        case MixingKind::dense:
            return layer.mix_u * c;
        case MixingKind::banded_full: {
            BandMask mask{config.bandwidth, config.k_pod};
            return layer.mix_u.cwiseProduct(mask.materialize().cast<Complex>()) * c;
        }
        case MixingKind::blr: {
            // Banded low-rank product: only band entries of U W^H are formed.
            Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(c.rows(), c.cols());
            const Eigen::Index k = config.k_pod;
            for (Eigen::Index i = 0; i < k; ++i) {
                const Eigen::Index j0 = std::max<Eigen::Index>(0, i - config.bandwidth);
                const Eigen::Index j1 = std::min(k - 1, i + config.bandwidth);
                for (Eigen::Index j = j0; j <= j1; ++j) {
                    // M_ij = sum_r U_ir conj(W_jr); Eigen's dot conjugates its
                    // first argument.
                    const Complex m_ij = layer.mix_w.row(j).dot(layer.mix_u.row(i));
                    out.row(i) += m_ij * c.row(j);
                }
            }
            return out;
        }
    }
    throw ValidationError("unreachable mixing kind");
}

namespace graph {

TapeVar mixing_graph(Tape& tape, const DenConfig& config, const DenGraphVars::LayerVars& layer,
                     TapeVar c) {
    switch (config.mixing_kind) {
        case MixingKind::none:
            return c;
        case MixingKind::dense:
            return tape.matmul(layer.mix_u, c);
        case MixingKind::banded_full: {
            BandMask mask{config.bandwidth, config.k_pod};
            return tape.matmul(tape.hadamard_mask(layer.mix_u, mask.materialize()), c);
        }
        case MixingKind::blr: {
            BandMask mask{config.bandwidth, config.k_pod};
            TapeVar m = tape.matmul(layer.mix_u, tape.adjoint(layer.mix_w));
            return tape.matmul(tape.hadamard_mask(m, mask.materialize()), c);
        }
    }
    throw ValidationError("unreachable mixing kind");
}

TapeVar spectral_layer_graph(Tape& tape, const DenConfig& config, const DenGraphVars::LayerVars& layer,
                             TapeVar psi, TapeVar psi_h, TapeVar z) {
    TapeVar c = tape.matmul(psi_h, z);                       // K x d
    TapeVar c_mode = tape.mode_channel_mix(layer.r_blocks, c);
    TapeVar c_mix = mixing_graph(tape, config, layer, c_mode);
    TapeVar spatial = tape.matmul(psi, c_mix);               // N x d
    TapeVar local = tape.matmul(z, layer.pointwise);
    TapeVar pre = tape.add_rowvec(tape.add(spatial, local), layer.bias);
    return tape.gelu(pre);
}

}  // namespace graph

Eigen::MatrixXcd spectral_layer(const DenConfig& config, const LayerParameters& layer,
                                const SpectralBasis& basis, const Eigen::MatrixXcd& z) {
    if (z.rows() != config.channels || z.cols() != basis.dim())
        throw ShapeMismatch("spectral_layer: latent state must be d x N");
    Tape tape;
    DenGraphVars::LayerVars lv;
    lv.r_blocks = tape.constant(layer.r_blocks);
    if (layer.mix_u.size() != 0) lv.mix_u = tape.constant(layer.mix_u);
    if (layer.mix_w.size() != 0) lv.mix_w = tape.constant(layer.mix_w);
    lv.pointwise = tape.constant(layer.pointwise);
    lv.bias = tape.constant(layer.bias);
    TapeVar zin = tape.constant(z.transpose());  // N x d internally
    TapeVar psi = tape.constant(basis.psi);
    TapeVar psi_h = tape.constant(basis.psi.adjoint());
    TapeVar out = graph::spectral_layer_graph(tape, config, lv, psi, psi_h, zin);
    return tape.value(out).transpose();
}

std::vector<TapeVar> DenGraphVars::flat() const {
    std::vector<TapeVar> out{lift_w, lift_b};
    for (const auto& l : layers) {
        out.push_back(l.r_blocks);
        if (l.mix_u.valid()) out.push_back(l.mix_u);
        if (l.mix_w.valid()) out.push_back(l.mix_w);
        out.push_back(l.pointwise);
        out.push_back(l.bias);
    }
    out.push_back(proj_w);
    out.push_back(proj_b);
    return out;
}

DenGraphVars push_parameters(Tape& tape, const DenParameters& params, bool trainable) {
    auto push = [&](const Eigen::MatrixXcd& m) { return trainable ? tape.param(m) : tape.constant(m); };
    DenGraphVars vars;
    vars.lift_w = push(params.lift_w);
    vars.lift_b = push(params.lift_b);
    for (const auto& l : params.layers) {
        DenGraphVars::LayerVars lv;
        lv.r_blocks = push(l.r_blocks);
        if (l.mix_u.size() != 0) lv.mix_u = push(l.mix_u);
        if (l.mix_w.size() != 0) lv.mix_w = push(l.mix_w);
        lv.pointwise = push(l.pointwise);
        lv.bias = push(l.bias);
        vars.layers.push_back(lv);
    }
    vars.proj_w = push(params.proj_w);
    vars.proj_b = push(params.proj_b);
    return vars;
}

Eigen::MatrixXd input_channels(const Eigen::VectorXcd& n_values, const Eigen::MatrixXd& coords) {
    if (n_values.size() != coords.rows()) throw ShapeMismatch("input_channels: size mismatch");
    Eigen::MatrixXd x(4, n_values.size());
    x.row(0) = n_values.real().transpose();
    x.row(1) = n_values.imag().transpose();
    x.row(2) = coords.col(0).transpose();
    x.row(3) = coords.col(1).transpose();
    return x;
}

Eigen::MatrixXcd standardized_input(const InputStats& stats, const Eigen::MatrixXd& input) {
    if (input.rows() != 4) throw ShapeMismatch("network input must have 4 channels");
    Eigen::MatrixXcd x(input.cols(), 4);
    for (int c = 0; c < 4; ++c) {
        const double s = stats.std(c) > 0.0 ? stats.std(c) : 1.0;
        x.col(c) = ((input.row(c).transpose().array() - stats.mean(c)) / s).cast<Complex>();
    }
    return x;
}

TapeVar forward_graph(Tape& tape, const DenConfig& config, const DenGraphVars& vars,
                      const SpectralBasis& basis, const InputStats& stats,
                      const Eigen::MatrixXd& input) {
    config.validate();
    if (basis.modes() != config.k_pod) throw ShapeMismatch("basis mode count != config.k_pod");
    if (basis.dim() != input.cols()) throw ShapeMismatch("basis dimension != input node count");
    TapeVar x = tape.constant(standardized_input(stats, input));  // N x 4
    TapeVar psi = tape.constant(basis.psi);
    TapeVar psi_h = tape.constant(basis.psi.adjoint());
    TapeVar z = tape.add_rowvec(tape.matmul(x, vars.lift_w), vars.lift_b);
    for (int l = 0; l < config.layers; ++l)
        z = graph::spectral_layer_graph(tape, config, vars.layers[static_cast<std::size_t>(l)], psi, psi_h, z);
    return tape.add_rowvec(tape.matmul(z, vars.proj_w), vars.proj_b);  // N x k_out
}

ForwardResult forward(const DenParameters& params, const SpectralBasis& basis, const InputStats& stats,
                      const Eigen::MatrixXd& input) {
    Tape tape;
    DenGraphVars vars = push_parameters(tape, params, /*trainable=*/false);
    TapeVar u = forward_graph(tape, params.config, vars, basis, stats, input);
    ForwardResult out;
    out.u_raw = tape.value(u);
    out.q_u = orthonormalize(out.u_raw);
    return out;
}

}  // namespace den
