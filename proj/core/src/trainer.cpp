#include "den/trainer.hpp"

#include <chrono>
#include <cmath>
#include <iostream>

#include "den/container.hpp"
#include "den/errors.hpp"
#include "den/threading.hpp"

namespace den {

void TrainConfig::validate(const DenConfig& model) const {
    if (batch_size < 1) throw ValidationError("train config: batch_size must be >= 1");
    if (epochs < 0) throw ValidationError("train config: epochs must be >= 0");
    if (lr_decay_step < 1) throw ValidationError("train config: lr_decay_step must be >= 1");
    if (k_v < 1 || k_v > model.k_out)
        throw ValidationError("train config: k_v must lie in [1, model k_out]");
    if (!(gram_epsilon >= 0.0)) throw ValidationError("train config: gram_epsilon must be >= 0");
}

TapeVar subspace_loss_graph(Tape& tape, TapeVar u_raw, const Eigen::MatrixXcd& q_v, double epsilon) {
    const auto k_v = static_cast<double>(q_v.cols());
    TapeVar qvh = tape.constant(q_v.adjoint());
    TapeVar g = tape.matmul(qvh, u_raw);                       // k_V x k_U
    TapeVar gram = tape.matmul(tape.adjoint(u_raw), u_raw);    // k_U x k_U
    TapeVar solved = tape.hermitian_solve(gram, tape.adjoint(g), epsilon);  // k_U x k_V
    TapeVar trace = tape.trace_real(tape.matmul(g, solved));
    return tape.add_scalar(tape.scale(trace, -1.0), k_v);
}

double subspace_loss(const Eigen::MatrixXcd& u_raw, const Eigen::MatrixXcd& q_v, double epsilon) {
    Tape tape;
    TapeVar u = tape.constant(u_raw);
    TapeVar loss = subspace_loss_graph(tape, u, q_v, epsilon);
    return tape.value(loss)(0, 0).real();
}

InputStats compute_input_stats(const Dataset& dataset) {
    if (dataset.train_count < 1) throw ValidationError("input stats need at least one training sample");
    InputStats st;
    Eigen::Vector4d sum = Eigen::Vector4d::Zero();
    Eigen::Vector4d sum_sq = Eigen::Vector4d::Zero();
    std::int64_t count = 0;
    for (std::int64_t i = 0; i < dataset.train_count; ++i) {
        const auto& s = dataset.samples[static_cast<std::size_t>(i)];
        Eigen::MatrixXd x = input_channels(s.n, dataset.mesh.nodes);
        for (int c = 0; c < 4; ++c) {
            sum(c) += x.row(c).sum();
            sum_sq(c) += x.row(c).squaredNorm();
        }
        count += x.cols();
    }
    st.mean = sum / static_cast<double>(count);
    for (int c = 0; c < 4; ++c) {
        const double var = sum_sq(c) / static_cast<double>(count) - st.mean(c) * st.mean(c);
        st.std(c) = var > 1e-24 ? std::sqrt(var) : 1.0;
    }
    return st;
}

namespace {

struct SampleWork {
    double loss = 0.0;
    std::vector<Eigen::MatrixXcd> grads;
};

SampleWork sample_loss_and_grads(const Checkpoint& model, const Dataset& dataset, std::int64_t index,
                                 const TrainConfig& cfg, bool with_grads) {
    const auto& s = dataset.samples[static_cast<std::size_t>(index)];
    Tape tape;
    DenGraphVars vars = push_parameters(tape, model.params, with_grads);
    Eigen::MatrixXd input = input_channels(s.n, dataset.mesh.nodes);
    TapeVar u_raw = forward_graph(tape, model.params.config, vars, model.basis, model.stats, input);
    const Eigen::MatrixXcd q_v = s.q_v.leftCols(cfg.k_v);
    TapeVar loss = subspace_loss_graph(tape, u_raw, q_v, cfg.gram_epsilon);
    SampleWork out;
    out.loss = tape.value(loss)(0, 0).real();
    if (with_grads) {
        tape.backward(loss);
        for (TapeVar v : vars.flat()) out.grads.push_back(tape.grad(v));
    }
    return out;
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ck) {
    Container c;
    const DenConfig& cfg = ck.params.config;
    c.put_scalar_i64("config.layers", cfg.layers);
    c.put_scalar_i64("config.channels", cfg.channels);
    c.put_scalar_i64("config.k_pod", cfg.k_pod);
    c.put_scalar_i64("config.mix_rank", cfg.mix_rank);
    c.put_scalar_i64("config.bandwidth", cfg.bandwidth);
    c.put_scalar_i64("config.k_out", cfg.k_out);
    c.put_scalar_i64("config.basis_kind", static_cast<std::int64_t>(cfg.basis_kind));
    c.put_scalar_i64("config.mixing_kind", static_cast<std::int64_t>(cfg.mixing_kind));
    c.put_scalar_i64("config.seed", static_cast<std::int64_t>(cfg.seed));
    c.put_f64("norm.mean", ck.stats.mean);
    c.put_f64("norm.std", ck.stats.std);
    c.put_c128("Psi", ck.basis.psi);
    c.put_f64("sigma", ck.basis.singular_values.size() ? Eigen::MatrixXd(ck.basis.singular_values)
                                                       : Eigen::MatrixXd(0, 1));
    c.put_scalar_i64("basis.kind", static_cast<std::int64_t>(ck.basis.kind));
    auto mats = ck.params.flat();
    auto names = ck.params.flat_names();
    for (std::size_t i = 0; i < mats.size(); ++i) c.put_c128(names[i], *mats[i]);
    write_container(path, c);
}

Checkpoint load_checkpoint(const std::string& path) {
    Container c = read_container(path);
    DenConfig cfg;
    cfg.layers = static_cast<int>(c.get_scalar_i64("config.layers"));
    cfg.channels = static_cast<int>(c.get_scalar_i64("config.channels"));
    cfg.k_pod = c.get_scalar_i64("config.k_pod");
    cfg.mix_rank = static_cast<int>(c.get_scalar_i64("config.mix_rank"));
    cfg.bandwidth = static_cast<int>(c.get_scalar_i64("config.bandwidth"));
    cfg.k_out = static_cast<int>(c.get_scalar_i64("config.k_out"));
    cfg.basis_kind = static_cast<BasisKind>(c.get_scalar_i64("config.basis_kind"));
    cfg.mixing_kind = static_cast<MixingKind>(c.get_scalar_i64("config.mixing_kind"));
    cfg.seed = static_cast<std::uint64_t>(c.get_scalar_i64("config.seed"));
    Checkpoint ck;
    ck.params = init_parameters(cfg);  // correct shapes, then overwrite
    ck.stats.mean = c.get_f64("norm.mean");
    ck.stats.std = c.get_f64("norm.std");
    ck.basis.psi = c.get_c128("Psi");
    Eigen::MatrixXd sig = c.get_f64("sigma");
    ck.basis.singular_values = sig.size() ? Eigen::VectorXd(sig.col(0)) : Eigen::VectorXd();
    ck.basis.kind = static_cast<BasisKind>(c.get_scalar_i64("basis.kind"));
    auto mats = ck.params.flat();
    auto names = ck.params.flat_names();
    for (std::size_t i = 0; i < mats.size(); ++i) {
        Eigen::MatrixXcd loaded = c.get_c128(names[i]);
        if (loaded.rows() != mats[i]->rows() || loaded.cols() != mats[i]->cols())
            throw CorruptContainer("checkpoint shape mismatch for " + names[i]);
        *mats[i] = loaded;
    }
    return ck;
}

TrainReport fit(Checkpoint& model, const Dataset& dataset, const TrainConfig& cfg,
                const std::string& checkpoint_path) {
    cfg.validate(model.params.config);
    if (cfg.k_v > dataset.k_v)
        throw ValidationError("train config k_v exceeds the dataset target dimension");
    if (dataset.train_count < 1) throw ValidationError("dataset has no training samples");
    const auto t_start = std::chrono::steady_clock::now();

    model.stats = compute_input_stats(dataset);

    auto param_ptrs = model.params.flat();
    std::vector<Eigen::MatrixXcd> params;
    params.reserve(param_ptrs.size());
    for (auto* p : param_ptrs) params.push_back(*p);

    AdamConfig adam_cfg;
    adam_cfg.lr = cfg.lr;
    adam_cfg.weight_decay = cfg.weight_decay;
    AdamState adam(adam_cfg, params);

    std::vector<std::int64_t> order(static_cast<std::size_t>(dataset.train_count));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::int64_t>(i);
    Pcg64Stream shuffle_rng(mix_seed(cfg.seed, 0x5f1eULL, 1));

    TrainReport report;
    auto write_back = [&] {
        for (std::size_t i = 0; i < param_ptrs.size(); ++i) *param_ptrs[i] = params[i];
    };

    auto mean_split_loss = [&](bool test) {
        const std::int64_t begin = test ? dataset.train_count : 0;
        const std::int64_t end = test ? static_cast<std::int64_t>(dataset.samples.size()) : dataset.train_count;
        if (end <= begin) return 0.0;
        std::vector<double> losses(static_cast<std::size_t>(end - begin));
        parallel_for(end - begin, cfg.threads, [&](std::int64_t i) {
            losses[static_cast<std::size_t>(i)] =
                sample_loss_and_grads(model, dataset, begin + i, cfg, false).loss;
        });
        double acc = 0.0;
        for (double l : losses) acc += l;
        return acc / static_cast<double>(end - begin);
    };

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double lr_now = cfg.lr * std::pow(cfg.lr_decay_rate, epoch / cfg.lr_decay_step);
        // Fisher-Yates with the dedicated stream.
        for (std::size_t i = order.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(shuffle_rng.next_u64() % i);
            std::swap(order[i - 1], order[j]);
        }
        double epoch_loss = 0.0;
        std::int64_t seen = 0;
        for (std::size_t batch_start = 0; batch_start < order.size();
             batch_start += static_cast<std::size_t>(cfg.batch_size)) {
            const auto batch_end = std::min(order.size(), batch_start + static_cast<std::size_t>(cfg.batch_size));
            const auto bsz = static_cast<std::int64_t>(batch_end - batch_start);
            std::vector<SampleWork> work(static_cast<std::size_t>(bsz));
            write_back();
            parallel_for(bsz, cfg.threads, [&](std::int64_t i) {
                work[static_cast<std::size_t>(i)] = sample_loss_and_grads(
                    model, dataset, order[batch_start + static_cast<std::size_t>(i)], cfg, true);
            });
            // Deterministic accumulation in batch order.
            double batch_loss = 0.0;
            std::vector<Eigen::MatrixXcd> grads;
            for (std::size_t i = 0; i < work.size(); ++i) {
                batch_loss += work[i].loss;
                if (i == 0) {
                    grads = std::move(work[i].grads);
                } else {
                    for (std::size_t g = 0; g < grads.size(); ++g) grads[g] += work[i].grads[g];
                }
            }
            batch_loss /= static_cast<double>(bsz);
            for (auto& g : grads) g /= static_cast<double>(bsz);
            if (!std::isfinite(batch_loss))
                throw NonFiniteLoss("non-finite batch loss at epoch " + std::to_string(epoch));
            for (const auto& g : grads)
                if (!g.allFinite()) {
                    double pnorm = 0.0;
                    for (const auto& p : params) pnorm += p.squaredNorm();
                    throw NonFiniteLoss("non-finite gradient at epoch " + std::to_string(epoch) +
                                        ", parameter norm " + std::to_string(std::sqrt(pnorm)));
                }
            adam.step(params, grads, lr_now);
            epoch_loss += batch_loss * static_cast<double>(bsz);
            seen += bsz;
        }
        write_back();
        EpochStats es;
        es.epoch = epoch;
        es.lr = lr_now;
        es.train_loss = epoch_loss / static_cast<double>(seen);
        es.test_loss = mean_split_loss(true);
        report.epochs.push_back(es);
        if (report.best_epoch < 0 || es.test_loss < report.best_test_loss) {
            report.best_epoch = epoch;
            report.best_test_loss = es.test_loss;
            if (!checkpoint_path.empty()) {
                save_checkpoint(checkpoint_path + ".best", model);
                report.best_checkpoint = checkpoint_path + ".best";
            }
        }
    }
    write_back();
    if (!checkpoint_path.empty()) {
        save_checkpoint(checkpoint_path, model);
        report.final_checkpoint = checkpoint_path;
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

EvalSummary evaluate(const Checkpoint& model, const Dataset& dataset, bool test_split, int threads) {
    const std::int64_t begin = test_split ? dataset.train_count : 0;
    const std::int64_t end =
        test_split ? static_cast<std::int64_t>(dataset.samples.size()) : dataset.train_count;
    if (end <= begin) throw ValidationError("evaluate: selected split is empty");
    EvalSummary out;
    out.per_sample.resize(static_cast<std::size_t>(end - begin));
    std::vector<double> l1(static_cast<std::size_t>(end - begin));
    parallel_for(end - begin, threads, [&](std::int64_t i) {
        const auto& s = dataset.samples[static_cast<std::size_t>(begin + i)];
        ForwardResult fr =
            forward(model.params, model.basis, model.stats, input_channels(s.n, dataset.mesh.nodes));
        out.per_sample[static_cast<std::size_t>(i)] = subspace_metrics(fr.q_u, s.q_v);
        l1[static_cast<std::size_t>(i)] = out.per_sample[static_cast<std::size_t>(i)].l1;
    });
    double acc = 0.0;
    for (double v : l1) acc += v;
    out.mean_l1 = acc / static_cast<double>(l1.size());
    return out;
}

}  // namespace den
