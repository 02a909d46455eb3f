#pragma once

#include <string>
#include <vector>

#include "den/dataset.hpp"
#include "den/den_model.hpp"
#include "den/metrics.hpp"

namespace den {

struct TrainConfig {
    int batch_size = 32;
    int epochs = 201;
    double lr = 0.01;
    int lr_decay_step = 20;
    double lr_decay_rate = 0.8;
    double weight_decay = 1e-6;
    std::int64_t k_v = 12;      // target subspace dimension (<= model k_out)
    double gram_epsilon = 1e-10;
    std::uint64_t seed = 0;
    int threads = 0;  // 0 = hardware concurrency

    void validate(const DenConfig& model) const;
};

struct EpochStats {
    int epoch = 0;
    double train_loss = 0.0;
    double test_loss = 0.0;
    double lr = 0.0;
};

struct TrainReport {
    std::vector<EpochStats> epochs;
    double wall_seconds = 0.0;
    int best_epoch = -1;
    double best_test_loss = 0.0;
    std::string final_checkpoint;
    std::string best_checkpoint;
};

/// Everything needed for inference, serialized as one container.
struct Checkpoint {
    DenParameters params;
    InputStats stats;
    SpectralBasis basis;
};

void save_checkpoint(const std::string& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::string& path);

/// The L1 subspace loss k_V - tr(G (U^H U + eps I)^{-1} G^H), G = Q_V^H U,
/// as a differentiable graph node. Identical in value to the QR form since
/// Q_U Q_U^H = U (U^H U)^{-1} U^H.
TapeVar subspace_loss_graph(Tape& tape, TapeVar u_raw, const Eigen::MatrixXcd& q_v, double epsilon);

/// Value-only convenience overload.
double subspace_loss(const Eigen::MatrixXcd& u_raw, const Eigen::MatrixXcd& q_v, double epsilon);

/// Per-channel statistics of the raw inputs over the training split.
InputStats compute_input_stats(const Dataset& dataset);

/// Mini-batch Adam training with step decay; seeds fix the shuffle and the
/// parameter init, so reruns are byte-identical. Saves the final checkpoint
/// at `checkpoint_path` and the best-test-loss one at
/// `checkpoint_path + ".best"` (when a path is given).
TrainReport fit(Checkpoint& model, const Dataset& dataset, const TrainConfig& config,
                const std::string& checkpoint_path = "");

struct EvalSummary {
    double mean_l1 = 0.0;
    std::vector<SubspaceMetrics> per_sample;
};

/// Subspace metrics of the model predictions against the frozen targets.
EvalSummary evaluate(const Checkpoint& model, const Dataset& dataset, bool test_split = true,
                     int threads = 0);

}  // namespace den
