#pragma once

#include "stiffode/dataset/reparam.hpp"
#include "stiffode/rom/rom.hpp"

#include <vector>

namespace stiffode::rom {

/// Mean squared error of the rollout against the reference on the
/// reference's uniform ts grid restricted to [0, 1], in normalized state
/// space.
double metric_mse_ts(const InferResult& rollout,
                     const dataset::ReparamSeries& reference);

/// Mean squared error in the t parametrization: the rollout is interpolated
/// onto the reference time grid over the overlap, normalized states.
double metric_mse_t(const std::vector<double>& rom_t, const Mat& rom_states,
                    const std::vector<double>& ref_t, const Mat& ref_states);

/// Relative integral error sqrt(int sum_c (u-u_ref)^2 dt / int sum_c
/// u_ref^2 dt), composite Simpson on a uniform grid over the overlapping
/// horizon. Empty `components` means all components.
double metric_l2(const std::vector<double>& rom_t, const Mat& rom_states,
                 const std::vector<double>& ref_t, const Mat& ref_states,
                 const std::vector<int>& components = {});

/// Raised when a peak-based metric is requested for a signal with no peaks.
struct UndefinedMetric : std::runtime_error {
    explicit UndefinedMetric(const std::string& what);
};

/// Local maxima (strictly larger than both direct neighbors) of one
/// component; returns their times.
std::vector<double> detect_peaks(const std::vector<double>& t,
                                 const std::vector<double>& values);

/// Mean |t_peak - t_peak_ref| over index-paired peaks (truncated to the
/// shorter list). Throws UndefinedMetric when either signal has no peaks.
double metric_dpeak(const std::vector<double>& rom_t,
                    const std::vector<double>& rom_component,
                    const std::vector<double>& ref_t,
                    const std::vector<double>& ref_component);

}  // namespace stiffode::rom
