#include "stiffode/neural/mlp.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

namespace stiffode::neural {

Activation activation_from_name(const std::string& name) {
    if (name == "relu") return Activation::relu;
    if (name == "leaky_relu") return Activation::leaky_relu;
    if (name == "gelu") return Activation::gelu;
    if (name == "silu") return Activation::silu;
    if (name == "hard_swish") return Activation::hard_swish;
    throw std::invalid_argument("unknown activation '" + name + "'");
}

std::string activation_name(Activation act) {
    switch (act) {
        case Activation::relu: return "relu";
        case Activation::leaky_relu: return "leaky_relu";
        case Activation::gelu: return "gelu";
        case Activation::silu: return "silu";
        case Activation::hard_swish: return "hard_swish";
    }
    return "unknown";
}

Mat Mlp::forward(const Mat& x) const {
    if (x.rows() != input_dim)
        throw std::invalid_argument("mlp forward: input dimension mismatch");
    const auto& k = kernels::active();
    Mat cur = x;
    for (int l = 0; l < depth; ++l) {
        const Mat& w = weights[l];
        Mat next(w.rows(), cur.cols());
        k.gemm_nn(w.rows(), cur.cols(), w.cols(), w.data(), cur.data(), 0.0,
                  next.data());
        k.bias_add(next.rows(), next.cols(), biases[l].data(), next.data());
        if (l + 1 < depth)
            k.act_forward(activation, next.size(), next.data(), next.data());
        cur = std::move(next);
    }
    return cur;
}

Vec Mlp::forward(const Vec& x) const { return Vec(forward(Mat(x))); }

std::vector<std::pair<double*, std::size_t>> Mlp::parameter_blocks() {
    std::vector<std::pair<double*, std::size_t>> out;
    for (int l = 0; l < depth; ++l) {
        out.emplace_back(weights[l].data(), weights[l].size());
        out.emplace_back(biases[l].data(), biases[l].size());
    }
    return out;
}

std::size_t Mlp::parameter_count() const {
    std::size_t n = 0;
    for (const auto& w : weights) n += w.size();
    for (const auto& b : biases) n += b.size();
    return n;
}

Mlp init_mlp(int input_dim, int output_dim, int depth, int width,
             Activation act, std::uint64_t seed) {
    if (depth < 1 || width < 1 || input_dim < 1 || output_dim < 1)
        throw std::invalid_argument("init_mlp: invalid shape");
    Mlp net;
    net.depth = depth;
    net.width = width;
    net.input_dim = input_dim;
    net.output_dim = output_dim;
    net.activation = act;
    net.seed = seed;
    std::mt19937_64 rng(seed);
    for (int l = 0; l < depth; ++l) {
        const int fan_in = l == 0 ? input_dim : width;
        const int fan_out = l == depth - 1 ? output_dim : width;
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        std::uniform_real_distribution<double> dist(-bound, bound);
        Mat w(fan_out, fan_in);
        for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = dist(rng);
        Vec b(fan_out);
        for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = dist(rng);
        net.weights.push_back(std::move(w));
        net.biases.push_back(std::move(b));
    }
    return net;
}

std::string mlp_to_json(const Mlp& net) {
    nlohmann::json j;
    j["depth"] = net.depth;
    j["width"] = net.width;
    j["activation"] = activation_name(net.activation);
    j["input_dim"] = net.input_dim;
    j["output_dim"] = net.output_dim;
    j["seed"] = net.seed;
    j["provenance"] = net.provenance;
    j["normalizer_refs"] = net.normalizer_ref;
    auto weights = nlohmann::json::array();
    auto biases = nlohmann::json::array();
    for (const auto& w : net.weights) {
        // Row-major flattening.
        std::vector<double> flat;
        flat.reserve(w.size());
        for (Eigen::Index r = 0; r < w.rows(); ++r)
            for (Eigen::Index c = 0; c < w.cols(); ++c) flat.push_back(w(r, c));
        weights.push_back({{"rows", w.rows()}, {"cols", w.cols()}, {"data", flat}});
    }
    for (const auto& b : net.biases) {
        std::vector<double> flat(b.data(), b.data() + b.size());
        biases.push_back(flat);
    }
    j["weights"] = weights;
    j["biases"] = biases;
    return j.dump(2);
}

Mlp mlp_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Mlp net;
    net.depth = j.at("depth").get<int>();
    net.width = j.at("width").get<int>();
    net.activation = activation_from_name(j.at("activation").get<std::string>());
    net.input_dim = j.at("input_dim").get<int>();
    net.output_dim = j.at("output_dim").get<int>();
    net.seed = j.at("seed").get<std::uint64_t>();
    net.provenance = j.value("provenance", "unknown");
    net.normalizer_ref = j.value("normalizer_refs", "");
    for (const auto& wj : j.at("weights")) {
        const auto rows = wj.at("rows").get<Eigen::Index>();
        const auto cols = wj.at("cols").get<Eigen::Index>();
        const auto flat = wj.at("data").get<std::vector<double>>();
        if (static_cast<Eigen::Index>(flat.size()) != rows * cols)
            throw std::runtime_error("mlp json: weight size mismatch");
        Mat w(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r)
            for (Eigen::Index c = 0; c < cols; ++c) w(r, c) = flat[r * cols + c];
        net.weights.push_back(std::move(w));
    }
    for (const auto& bj : j.at("biases")) {
        const auto flat = bj.get<std::vector<double>>();
        Vec b(flat.size());
        for (std::size_t i = 0; i < flat.size(); ++i) b(i) = flat[i];
        net.biases.push_back(std::move(b));
    }
    if (static_cast<int>(net.weights.size()) != net.depth ||
        static_cast<int>(net.biases.size()) != net.depth)
        throw std::runtime_error("mlp json: layer count mismatch");
    return net;
}

void save_mlp_json(const Mlp& net, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << mlp_to_json(net) << "\n";
}

Mlp load_mlp_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(is)),
                     std::istreambuf_iterator<char>());
    return mlp_from_json(text);
}

}  // namespace stiffode::neural
