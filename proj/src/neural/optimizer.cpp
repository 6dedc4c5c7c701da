#include "stiffode/neural/optimizer.hpp"

#include "stiffode/kernels/kernels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace stiffode::neural {

AdamW::AdamW(std::vector<std::pair<double*, std::size_t>> params,
             AdamWConfig cfg)
    : params_(std::move(params)), cfg_(cfg) {
    for (const auto& [ptr, size] : params_) {
        (void)ptr;
        m_.emplace_back(size, 0.0);
        v_.emplace_back(size, 0.0);
    }
}

bool AdamW::step(const std::vector<Mat>& grads) {
    if (grads.size() != params_.size())
        throw std::invalid_argument("adamw: gradient block count mismatch");
    for (const auto& g : grads)
        if (!g.allFinite()) {
            ++skipped_;
            return false;
        }
    ++t_;
    const double bias_c1 = 1.0 / (1.0 - std::pow(cfg_.beta1, t_));
    const double bias_c2 = 1.0 / (1.0 - std::pow(cfg_.beta2, t_));
    const auto& k = kernels::active();
    for (std::size_t i = 0; i < params_.size(); ++i) {
        auto [ptr, size] = params_[i];
        if (static_cast<std::size_t>(grads[i].size()) != size)
            throw std::invalid_argument("adamw: gradient block size mismatch");
        k.adamw_update(size, ptr, grads[i].data(), m_[i].data(), v_[i].data(),
                       cfg_.lr, cfg_.beta1, cfg_.beta2, cfg_.eps,
                       cfg_.weight_decay, bias_c1, bias_c2);
    }
    return true;
}

PlateauScheduler::PlateauScheduler(double initial_lr, int patience,
                                   double factor)
    : lr_(initial_lr),
      patience_(patience),
      factor_(factor),
      best_(std::numeric_limits<double>::infinity()) {}

bool PlateauScheduler::update(double validation_loss) {
    if (validation_loss < best_) {
        best_ = validation_loss;
        counter_ = 0;
        return false;
    }
    if (++counter_ >= patience_) {
        lr_ *= factor_;
        counter_ = 0;
        return true;
    }
    return false;
}

EarlyStopping::EarlyStopping(int max_epochs) : max_epochs_(max_epochs) {}

void EarlyStopping::update(double validation_loss, const std::vector<Mat>& w,
                           const std::vector<Vec>& b) {
    ++epoch_;
    if (!has_best_ || validation_loss < best_) {
        has_best_ = true;
        best_ = validation_loss;
        best_epoch_ = epoch_;
        best_w_ = w;
        best_b_ = b;
    }
}

void EarlyStopping::seed(double loss, const std::vector<Mat>& w,
                         const std::vector<Vec>& b) {
    has_best_ = true;
    best_ = loss;
    best_epoch_ = 0;
    best_w_ = w;
    best_b_ = b;
}

}  // namespace stiffode::neural
