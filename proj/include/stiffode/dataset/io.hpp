#pragma once

#include "stiffode/dataset/reparam.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace stiffode::dataset {

/// CSV with header ts,t,u_1..u_N,fs_1..fs_N,tdot; 17 significant digits.
/// The series must carry derivative estimates.
void write_series_csv(const ReparamSeries& series, const std::string& path);
ReparamSeries read_series_csv(const std::string& path, const Vec& mu);

struct ManifestEntry {
    std::string file;
    std::string role;  // train | validation
    std::vector<double> mu;
    int n = 0;
};

struct Manifest {
    std::string problem;
    std::uint64_t seed = 0;
    int window = 7;
    int order = 2;
    double atol = 0.0;
    double rtol = 0.0;
    double dts = 0.0;
    std::vector<ManifestEntry> series;
};

void write_manifest(const Manifest& m, const problems::ParametricProblem& prob,
                    const std::string& path);
Manifest read_manifest(const std::string& path);

/// Load every series listed in a manifest with the given role.
std::vector<ReparamSeries> load_series(const Manifest& m,
                                       const std::string& dir,
                                       const std::string& role);

}  // namespace stiffode::dataset
