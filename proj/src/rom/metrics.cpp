#include "stiffode/rom/metrics.hpp"

#include "stiffode/util/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stiffode::rom {

namespace {

ode::Trajectory as_trajectory(const std::vector<double>& t, const Mat& states) {
    ode::Trajectory tr;
    tr.times = t;
    tr.states.reserve(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        tr.states.push_back(states.col(i));
    return tr;
}

}  // namespace

double metric_mse_ts(const InferResult& rollout,
                     const dataset::ReparamSeries& reference) {
    if (rollout.ts.size() < 2)
        throw std::invalid_argument("metric_mse_ts: rollout too short");
    const double ts_max = std::min(1.0, rollout.ts.back());
    auto traj = as_trajectory(rollout.ts, rollout.states_hat);
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < reference.ts.size(); ++i) {
        const double ts = reference.ts[i];
        if (ts > ts_max) break;
        const Vec u = ode::interpolate(traj, {ts})[0];
        const Vec d = u - reference.states.row(i).transpose();
        acc += d.squaredNorm();
        count += static_cast<std::size_t>(d.size());
    }
    if (count == 0)
        throw std::invalid_argument("metric_mse_ts: no overlapping grid points");
    return acc / static_cast<double>(count);
}

double metric_mse_t(const std::vector<double>& rom_t, const Mat& rom_states,
                    const std::vector<double>& ref_t, const Mat& ref_states) {
    if (rom_t.size() < 2 || ref_t.size() < 2)
        throw std::invalid_argument("metric_mse_t: series too short");
    const double t_end = std::min(rom_t.back(), ref_t.back());
    const double t_begin = std::max(rom_t.front(), ref_t.front());
    if (!(t_end > t_begin))
        throw std::invalid_argument("metric_mse_t: empty overlap");
    auto traj = as_trajectory(rom_t, rom_states);
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < ref_t.size(); ++i) {
        const double t = ref_t[i];
        if (t < t_begin || t > t_end) continue;
        const Vec u = ode::interpolate(traj, {t})[0];
        const Vec d = u - ref_states.col(i);
        acc += d.squaredNorm();
        count += static_cast<std::size_t>(d.size());
    }
    if (count == 0)
        throw std::invalid_argument("metric_mse_t: no reference samples in overlap");
    return acc / static_cast<double>(count);
}

double metric_l2(const std::vector<double>& rom_t, const Mat& rom_states,
                 const std::vector<double>& ref_t, const Mat& ref_states,
                 const std::vector<int>& components) {
    if (rom_t.size() < 2 || ref_t.size() < 2)
        throw std::invalid_argument("metric_l2: series too short");
    const double t_end = std::min(rom_t.back(), ref_t.back());
    const double t_begin = std::max(rom_t.front(), ref_t.front());
    if (!(t_end > t_begin))
        throw std::invalid_argument("metric_l2: empty overlap");

    std::vector<int> comps = components;
    if (comps.empty())
        for (int c = 0; c < ref_states.rows(); ++c) comps.push_back(c);

    constexpr int kGrid = 4096;
    const double h = (t_end - t_begin) / kGrid;
    std::vector<double> grid(kGrid + 1);
    for (int i = 0; i <= kGrid; ++i) grid[i] = t_begin + i * h;
    grid.back() = t_end;

    auto rom_traj = as_trajectory(rom_t, rom_states);
    auto ref_traj = as_trajectory(ref_t, ref_states);
    const auto rom_u = ode::interpolate(rom_traj, grid);
    const auto ref_u = ode::interpolate(ref_traj, grid);

    std::vector<double> num(kGrid + 1), den(kGrid + 1);
    for (int i = 0; i <= kGrid; ++i) {
        double n = 0.0, d = 0.0;
        for (int c : comps) {
            const double diff = rom_u[i](c) - ref_u[i](c);
            n += diff * diff;
            d += ref_u[i](c) * ref_u[i](c);
        }
        num[i] = n;
        den[i] = d;
    }
    const double ni = util::simpson_integral(num, h);
    const double di = util::simpson_integral(den, h);
    if (!(di > 0.0))
        throw std::invalid_argument("metric_l2: reference has zero norm");
    return std::sqrt(ni / di);
}

UndefinedMetric::UndefinedMetric(const std::string& what)
    : std::runtime_error(what) {}

std::vector<double> detect_peaks(const std::vector<double>& t,
                                 const std::vector<double>& values) {
    std::vector<double> peaks;
    for (std::size_t i = 1; i + 1 < values.size(); ++i)
        if (values[i] > values[i - 1] && values[i] > values[i + 1])
            peaks.push_back(t[i]);
    return peaks;
}

double metric_dpeak(const std::vector<double>& rom_t,
                    const std::vector<double>& rom_component,
                    const std::vector<double>& ref_t,
                    const std::vector<double>& ref_component) {
    const auto rom_peaks = detect_peaks(rom_t, rom_component);
    const auto ref_peaks = detect_peaks(ref_t, ref_component);
    if (rom_peaks.empty() || ref_peaks.empty())
        throw UndefinedMetric("metric_dpeak: no peaks detected");
    const std::size_t n = std::min(rom_peaks.size(), ref_peaks.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += std::abs(rom_peaks[i] - ref_peaks[i]);
    return acc / static_cast<double>(n);
}

}  // namespace stiffode::rom
