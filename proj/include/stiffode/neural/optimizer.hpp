#pragma once

#include "stiffode/neural/mlp.hpp"

#include <cstdint>
#include <vector>

namespace stiffode::neural {

struct AdamWConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 1e-2;
};

/// Decoupled-weight-decay Adam over the flat parameter blocks of one
/// network. Steps with non-finite gradients are skipped and counted.
class AdamW {
public:
    AdamW(std::vector<std::pair<double*, std::size_t>> params, AdamWConfig cfg);

    /// Gradients in block order (e.g. collect_gradients output). Returns
    /// false when the step was skipped because a gradient was non-finite.
    bool step(const std::vector<Mat>& grads);

    AdamWConfig& config() { return cfg_; }
    std::int64_t steps_taken() const { return t_; }
    std::int64_t steps_skipped() const { return skipped_; }

private:
    std::vector<std::pair<double*, std::size_t>> params_;
    std::vector<std::vector<double>> m_, v_;
    AdamWConfig cfg_;
    std::int64_t t_ = 0;
    std::int64_t skipped_ = 0;
};

/// Reduce-on-plateau: halves the learning rate after `patience` consecutive
/// epochs without validation improvement.
class PlateauScheduler {
public:
    PlateauScheduler(double initial_lr, int patience = 20, double factor = 0.5);

    /// Once per epoch; returns true when the rate was reduced.
    bool update(double validation_loss);

    double lr() const { return lr_; }

private:
    double lr_;
    int patience_;
    double factor_;
    double best_;
    int counter_ = 0;
};

/// Tracks the best validation loss and keeps a snapshot of the parameters
/// that achieved it. The stop signal fires at the epoch cap.
class EarlyStopping {
public:
    explicit EarlyStopping(int max_epochs);

    /// Once per epoch. Snapshots `params` when the loss improves.
    void update(double validation_loss, const std::vector<Mat>& w,
                const std::vector<Vec>& b);
    bool should_stop(int epochs_run) const { return epochs_run >= max_epochs_; }

    bool has_best() const { return has_best_; }
    double best_loss() const { return best_; }
    int best_epoch() const { return best_epoch_; }
    const std::vector<Mat>& best_weights() const { return best_w_; }
    const std::vector<Vec>& best_biases() const { return best_b_; }

    /// Pre-load a baseline so later phases never regress below it.
    void seed(double loss, const std::vector<Mat>& w, const std::vector<Vec>& b);

private:
    int max_epochs_;
    bool has_best_ = false;
    double best_ = 0.0;
    int best_epoch_ = -1;
    int epoch_ = 0;
    std::vector<Mat> best_w_;
    std::vector<Vec> best_b_;
};

}  // namespace stiffode::neural
