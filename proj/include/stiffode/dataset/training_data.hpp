#pragma once

#include "stiffode/dataset/reparam.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace stiffode::dataset {

/// Pooled supervised rows. Columns are samples: inputs stack the normalized
/// state over the normalized parameters; targets stack the normalized
/// dynamics over the log of the normalized time derivative.
struct TrainingSet {
    Mat inputs;   // (N_u + N_mu) x N
    Mat targets;  // (N_u + 1) x N
    std::string split;

    Eigen::Index size() const { return inputs.cols(); }
};

/// Random subsample of each series to about `per_series_target` rows,
/// pooled across series. Deterministic in `seed`.
std::pair<TrainingSet, TrainingSet> build_supervised(
    const std::vector<ReparamSeries>& train_series,
    const std::vector<ReparamSeries>& validation_series,
    const problems::ParametricProblem& prob, int per_series_target,
    std::uint64_t seed);

/// One mini-batch of unroll starts: every element is rolled K steps of size
/// dts and compared against the stored targets.
struct UnrollBatch {
    Mat start_states;          // N_u x B
    Mat mu_hat;                // N_mu x B
    std::vector<Mat> targets;  // K entries of N_u x B
    double dts = 0.0;
};

/// Deterministic shuffled stream of unroll batches over resampled series
/// sharing one grid. Start indices are drawn so that K further steps stay
/// inside the grid.
class UnrollBatchStream {
public:
    UnrollBatchStream(const std::vector<ReparamSeries>& series,
                      const problems::ParametricProblem& prob, int unroll_len,
                      int batch_size, std::uint64_t seed,
                      int max_batches_per_epoch = 0);

    /// Batches for one epoch, reshuffled; deterministic in (seed, epoch).
    std::vector<UnrollBatch> epoch();

    int batches_per_epoch() const;

private:
    const std::vector<ReparamSeries>* series_;
    std::vector<Mat> mu_hat_;  // per series
    std::vector<std::pair<int, int>> pool_;  // (series, start index)
    int unroll_len_;
    int batch_size_;
    int max_batches_;
    double dts_;
    std::mt19937_64 rng_;
};

}  // namespace stiffode::dataset
