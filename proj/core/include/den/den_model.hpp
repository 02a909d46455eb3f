#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "den/pod_basis.hpp"
#include "den/tensor_core.hpp"

namespace den {

enum class MixingKind { blr, banded_full, dense, none };

const char* to_string(MixingKind k);
MixingKind mixing_kind_from_string(const std::string& s);

struct DenConfig {
    int layers = 4;
    int channels = 32;          // latent width d
    Eigen::Index k_pod = 240;   // spectral modes
    int mix_rank = 32;          // r
    int bandwidth = 5;          // b
    int k_out = 12;             // predicted subspace dimension
    BasisKind basis_kind = BasisKind::pod_y;
    MixingKind mixing_kind = MixingKind::blr;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Band mask B_ij = 1 iff |i - j| <= b; materialized lazily, never stored
/// into the factors.
struct BandMask {
    int bandwidth = 0;
    Eigen::Index dim = 0;
    Eigen::MatrixXd materialize() const;
};

struct LayerParameters {
    Eigen::MatrixXcd r_blocks;   // (K d) x d; block m is the mode-m channel map
    Eigen::MatrixXcd mix_u;      // K x r for blr; K x K for banded_full/dense
    Eigen::MatrixXcd mix_w;      // K x r for blr; empty otherwise
    Eigen::MatrixXcd pointwise;  // d x d, applied from the right
    Eigen::MatrixXcd bias;       // 1 x d
};

struct DenParameters {
    DenConfig config;
    Eigen::MatrixXcd lift_w;  // 4 x d
    Eigen::MatrixXcd lift_b;  // 1 x d
    std::vector<LayerParameters> layers;
    Eigen::MatrixXcd proj_w;  // d x k_out
    Eigen::MatrixXcd proj_b;  // 1 x k_out

    /// Canonical flattening order (stable across runs; used by the optimizer
    /// and the checkpoint format).
    std::vector<Eigen::MatrixXcd*> flat();
    std::vector<const Eigen::MatrixXcd*> flat() const;
    std::vector<std::string> flat_names() const;
};

/// Per-channel affine input normalization; statistics estimated on the
/// training split and stored in the checkpoint.
struct InputStats {
    Eigen::Vector4d mean = Eigen::Vector4d::Zero();
    Eigen::Vector4d std = Eigen::Vector4d::Ones();
};

DenParameters init_parameters(const DenConfig& config);

std::int64_t count_params(const DenConfig& config);

/// Cross-mode mixing applied to spectral coefficients (K x d). Pass-through
/// for `none`; (B o (U W^H)) c for `blr`; masked or full matrix otherwise.
Eigen::MatrixXcd apply_mixing(const DenConfig& config, const LayerParameters& layer,
                              const Eigen::MatrixXcd& coefficients);

/// One generalized spectral convolution layer on a d x N latent state.
Eigen::MatrixXcd spectral_layer(const DenConfig& config, const LayerParameters& layer,
                                const SpectralBasis& basis, const Eigen::MatrixXcd& z);

struct ForwardResult {
    Eigen::MatrixXcd u_raw;  // N x k_out
    Eigen::MatrixXcd q_u;    // N x k_out, orthonormal
};

/// Full forward pass on a real 4 x N input (Re n, Im n, x, y); Q_U is the
/// thin-QR orthonormalization with the R diagonal rotated real positive.
ForwardResult forward(const DenParameters& params, const SpectralBasis& basis,
                      const InputStats& stats, const Eigen::MatrixXd& input);

/// Tape handles for one forward graph; used by the trainer to differentiate
/// the loss with respect to every parameter.
struct DenGraphVars {
    TapeVar lift_w, lift_b;
    struct LayerVars {
        TapeVar r_blocks, mix_u, mix_w, pointwise, bias;
    };
    std::vector<LayerVars> layers;
    TapeVar proj_w, proj_b;

    std::vector<TapeVar> flat() const;
};

/// Push all parameters onto the tape (as tracked params or frozen constants).
DenGraphVars push_parameters(Tape& tape, const DenParameters& params, bool trainable);

/// Build the forward graph up to U_raw (N x k_out).
TapeVar forward_graph(Tape& tape, const DenConfig& config, const DenGraphVars& vars,
                      const SpectralBasis& basis, const InputStats& stats,
                      const Eigen::MatrixXd& input);

/// Normalized complex N x 4 network input from the raw real channels.
Eigen::MatrixXcd standardized_input(const InputStats& stats, const Eigen::MatrixXd& input);

/// Assemble the raw 4 x N input channels (Re n, Im n, x, y) for one sample.
Eigen::MatrixXd input_channels(const Eigen::VectorXcd& n_values, const Eigen::MatrixXd& node_coords);

}  // namespace den
