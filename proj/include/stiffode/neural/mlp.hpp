#pragma once

#include "stiffode/kernels/kernels.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace stiffode::neural {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

using kernels::Activation;

Activation activation_from_name(const std::string& name);
std::string activation_name(Activation act);

/// Dense feed-forward network: depth L affine layers, hidden width Z, one
/// activation for all layers except the final linear one.
struct Mlp {
    int depth = 0;
    int width = 0;
    int input_dim = 0;
    int output_dim = 0;
    Activation activation = Activation::gelu;
    std::vector<Mat> weights;  // L entries
    std::vector<Vec> biases;
    std::uint64_t seed = 0;
    std::string provenance = "random-init";
    std::string normalizer_ref;

    /// Batch evaluation; columns are samples.
    Mat forward(const Mat& x) const;
    Vec forward(const Vec& x) const;

    /// Flat views over all trainable blocks (weights then biases per layer).
    std::vector<std::pair<double*, std::size_t>> parameter_blocks();
    std::size_t parameter_count() const;
};

/// Fan-in-scaled uniform initialization, fully determined by the seed.
Mlp init_mlp(int input_dim, int output_dim, int depth, int width,
             Activation act, std::uint64_t seed);

/// JSON serialization; parameter round-trip is bit-exact.
void save_mlp_json(const Mlp& net, const std::string& path);
Mlp load_mlp_json(const std::string& path);
std::string mlp_to_json(const Mlp& net);
Mlp mlp_from_json(const std::string& text);

}  // namespace stiffode::neural
