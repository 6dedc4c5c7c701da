#include "stiffode/dataset/training_data.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stiffode::dataset {

namespace {

std::vector<int> sample_indices(int available, int want, std::mt19937_64& rng) {
    std::vector<int> idx(available);
    for (int i = 0; i < available; ++i) idx[i] = i;
    if (want >= available) return idx;
    // Partial Fisher-Yates, then sort for cache-friendly reads.
    for (int i = 0; i < want; ++i) {
        std::uniform_int_distribution<int> dist(i, available - 1);
        std::swap(idx[i], idx[dist(rng)]);
    }
    idx.resize(want);
    std::sort(idx.begin(), idx.end());
    return idx;
}

TrainingSet pool_rows(const std::vector<ReparamSeries>& series,
                      const problems::ParametricProblem& prob,
                      int per_series_target, std::mt19937_64& rng,
                      const std::string& split) {
    std::vector<std::pair<const ReparamSeries*, std::vector<int>>> picks;
    Eigen::Index total = 0;
    for (const auto& s : series) {
        if (!s.has_derivatives())
            throw std::invalid_argument(
                "build_supervised: series lacks derivative estimates");
        auto idx = sample_indices(static_cast<int>(s.ts.size()),
                                  per_series_target, rng);
        total += static_cast<Eigen::Index>(idx.size());
        picks.emplace_back(&s, std::move(idx));
    }
    TrainingSet set;
    set.split = split;
    const int n_u = prob.n_state;
    const int n_mu = prob.n_param;
    set.inputs.resize(n_u + n_mu, total);
    set.targets.resize(n_u + 1, total);
    Eigen::Index col = 0;
    for (const auto& [s, idx] : picks) {
        const Vec mu_hat = prob.norm.param_fwd(s->mu);
        for (int i : idx) {
            set.inputs.col(col).head(n_u) = s->states.row(i).transpose();
            set.inputs.col(col).tail(n_mu) = mu_hat;
            set.targets.col(col).head(n_u) = s->fs.row(i).transpose();
            set.targets(n_u, col) = std::log(s->tdot[i]);
            ++col;
        }
    }
    return set;
}

}  // namespace

std::pair<TrainingSet, TrainingSet> build_supervised(
    const std::vector<ReparamSeries>& train_series,
    const std::vector<ReparamSeries>& validation_series,
    const problems::ParametricProblem& prob, int per_series_target,
    std::uint64_t seed) {
    if (per_series_target <= 0)
        throw std::invalid_argument(
            "build_supervised: subsample target must be positive");
    std::mt19937_64 rng(seed);
    auto train = pool_rows(train_series, prob, per_series_target, rng, "train");
    auto val =
        pool_rows(validation_series, prob, per_series_target, rng, "validation");
    return {std::move(train), std::move(val)};
}

UnrollBatchStream::UnrollBatchStream(const std::vector<ReparamSeries>& series,
                                     const problems::ParametricProblem& prob,
                                     int unroll_len, int batch_size,
                                     std::uint64_t seed,
                                     int max_batches_per_epoch)
    : series_(&series),
      unroll_len_(unroll_len),
      batch_size_(batch_size),
      max_batches_(max_batches_per_epoch),
      rng_(seed) {
    if (series.empty())
        throw std::invalid_argument("unroll stream: no series");
    if (unroll_len < 1) throw std::invalid_argument("unroll stream: K < 1");
    dts_ = 1.0 / series.front().n();
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        if (std::abs(1.0 / s.n() - dts_) > 1e-12)
            throw std::invalid_argument(
                "unroll stream: series must share one resampled grid");
        const int max_start = s.n() - unroll_len;
        if (max_start < 0)
            throw std::invalid_argument(
                "unroll stream: unroll length exceeds the grid");
        for (int i = 0; i <= max_start; ++i)
            pool_.emplace_back(static_cast<int>(si), i);
        mu_hat_.push_back(prob.norm.param_fwd(s.mu));
    }
    if (static_cast<int>(pool_.size()) < batch_size_)
        throw std::invalid_argument("unroll stream: fewer starts than one batch");
}

int UnrollBatchStream::batches_per_epoch() const {
    const int full = static_cast<int>(pool_.size()) / batch_size_;
    return max_batches_ > 0 ? std::min(max_batches_, full) : full;
}

std::vector<UnrollBatch> UnrollBatchStream::epoch() {
    std::vector<std::pair<int, int>> order = pool_;
    for (std::size_t i = order.size(); i > 1; --i) {
        std::uniform_int_distribution<std::size_t> dist(0, i - 1);
        std::swap(order[i - 1], order[dist(rng_)]);
    }
    const auto& series = *series_;
    const int n_u = static_cast<int>(series.front().states.cols());
    const int n_mu = static_cast<int>(mu_hat_.front().size());
    std::vector<UnrollBatch> batches;
    const int nb = batches_per_epoch();
    batches.reserve(nb);
    for (int b = 0; b < nb; ++b) {
        UnrollBatch batch;
        batch.dts = dts_;
        batch.start_states.resize(n_u, batch_size_);
        batch.mu_hat.resize(n_mu, batch_size_);
        batch.targets.assign(unroll_len_, Mat(n_u, batch_size_));
        for (int e = 0; e < batch_size_; ++e) {
            const auto [si, start] = order[b * batch_size_ + e];
            const auto& s = series[si];
            batch.start_states.col(e) = s.states.row(start).transpose();
            batch.mu_hat.col(e) = mu_hat_[si];
            for (int k = 0; k < unroll_len_; ++k)
                batch.targets[k].col(e) =
                    s.states.row(start + k + 1).transpose();
        }
        batches.push_back(std::move(batch));
    }
    return batches;
}

}  // namespace stiffode::dataset
