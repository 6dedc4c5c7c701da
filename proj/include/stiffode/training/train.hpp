#pragma once

#include "stiffode/dataset/training_data.hpp"
#include "stiffode/neural/mlp.hpp"
#include "stiffode/neural/optimizer.hpp"
#include "stiffode/problems/problems.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace stiffode::training {

using dataset::ReparamSeries;
using dataset::TrainingSet;
using neural::Mat;
using neural::Mlp;
using neural::Vec;

struct TrainConfig {
    std::string phase = "supervised";
    int max_epochs = 400;
    int batch_size = 32;
    double lr = 1e-3;
    /// Fine-tune stages: (unroll length K, learning rate). K must be
    /// non-decreasing and K*dts stays at or below half of the horizon.
    std::vector<std::pair<int, double>> unroll_schedule;
    double dts = 1.0 / 160.0;
    int p = 2;
    std::uint64_t seed = 0;
    double weight_decay = 1e-2;
    int scheduler_patience = 20;
    double scheduler_factor = 0.5;
    /// 0 = one full pass over all starts per epoch.
    int batches_per_epoch = 0;
    /// Tolerance of the adaptive validation integrator.
    double validation_tol = 2e-4;
    bool force_phase_order = false;

    void validate() const;
};

struct TrainReport {
    std::vector<double> train_loss;
    std::vector<double> val_loss;
    std::vector<double> lr_trace;
    int best_epoch = -1;
    double best_val = 0.0;
    double wall_time_s = 0.0;
    bool aborted = false;
    std::string message;

    std::string to_json() const;
    void write_csv(const std::string& path) const;
    void write_json(const std::string& path) const;
};

/// Trajectory loss of the surrogate on one validation series: adaptive
/// fourth-order rollout over the series window, p=2 discrepancy on the
/// series grid. `solver_fev` (optional) accumulates the evaluation count.
double node_validation_loss(const Mlp& dynamics,
                            const problems::ParametricProblem& prob,
                            const std::vector<ReparamSeries>& val_series,
                            double tol, std::int64_t* solver_fev = nullptr);

/// Phase 1: supervised regression of the normalized ts-dynamics targets,
/// validated with the trajectory loss each epoch.
TrainReport train_supervised_dynamics(Mlp& net, const TrainingSet& train,
                                      const std::vector<ReparamSeries>& val_series,
                                      const problems::ParametricProblem& prob,
                                      const TrainConfig& cfg);

/// Phase 2: differentiable-solver fine-tune over the unroll schedule.
/// Refuses a network without supervised provenance unless forced.
TrainReport train_node_finetune(Mlp& net,
                                const std::vector<ReparamSeries>& train_resampled,
                                const std::vector<ReparamSeries>& val_series,
                                const problems::ParametricProblem& prob,
                                const TrainConfig& cfg);

/// Phase 3: supervised regression of the log time-map targets; validation
/// is the time-recovery accuracy along rollouts of the frozen dynamics.
TrainReport train_timemap_supervised(Mlp& time_net, const Mlp& dynamics,
                                     const TrainingSet& train,
                                     const std::vector<ReparamSeries>& val_series,
                                     const problems::ParametricProblem& prob,
                                     const TrainConfig& cfg);

/// Phase 4: p=1 discrepancy between true time and the cumulative Simpson
/// integral of the time map along frozen-dynamics rollouts, with gradients
/// through the quadrature.
TrainReport train_timemap_finetune(Mlp& time_net, const Mlp& dynamics,
                                   const std::vector<ReparamSeries>& train_resampled,
                                   const std::vector<ReparamSeries>& val_series,
                                   const problems::ParametricProblem& prob,
                                   const TrainConfig& cfg);

struct HyperParams {
    std::string activation;
    int depth = 5;
    int width = 32;
    double lr = 1e-3;
    std::uint64_t seed = 0;
};

struct TrialResult {
    HyperParams params;
    double best_val = 0.0;
    int trial_index = 0;
};

/// Random hyperparameter search over the supervised dynamics phase:
/// activation from the five supported choices, depth 3..10, width 5..100,
/// learning rate log-uniform in [1e-4, 2e-3]. Ranked by best validation
/// loss, ascending.
std::vector<TrialResult> random_search(const TrainingSet& train,
                                       const std::vector<ReparamSeries>& val_series,
                                       const problems::ParametricProblem& prob,
                                       int budget, std::uint64_t master_seed,
                                       const TrainConfig& base_cfg);

}  // namespace stiffode::training
