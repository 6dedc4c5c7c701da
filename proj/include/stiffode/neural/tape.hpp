#pragma once

#include "stiffode/neural/mlp.hpp"

#include <vector>

namespace stiffode::neural {

/// Reverse-mode tape over matrix-valued operations. Supported primitives:
/// dense affine layers, the five activations, elementwise exp scaling,
/// linear combinations (for explicit Runge-Kutta unrolls), row
/// concatenation, cumulative Simpson sums, and discrete p-norm losses with
/// p in {1, 2, 4}. Anything else is a build-time contract violation.
class Tape {
public:
    using NodeId = int;

    NodeId constant(Mat value);
    NodeId parameter(Mat value);

    /// W*X + b broadcast over columns.
    NodeId affine(NodeId w, NodeId x, NodeId b);
    NodeId activation(Activation act, NodeId x);
    NodeId add(NodeId a, NodeId b);
    NodeId sub(NodeId a, NodeId b);
    NodeId scale(NodeId a, double alpha);
    /// alpha*x + y
    NodeId axpy(double alpha, NodeId x, NodeId y);
    NodeId concat_rows(NodeId top, NodeId bottom);
    /// s * exp(x) elementwise.
    NodeId exp_scale(NodeId x, double s);
    /// Elementwise product with a constant matrix (broadcasting none).
    NodeId mul_const(NodeId x, Mat factor);
    /// Inverse symmetric-log map: y for |y| < 2, sign(y)*(exp(|y|-2)+1)
    /// otherwise. Matches the piecewise dynamics normalization.
    NodeId symexp(NodeId x);
    /// Cumulative Simpson integral of a 1 x n row sampled with spacing h;
    /// odd prefixes close with the three-point half-panel rule, so the
    /// cumulative values are exact for quadratic integrands everywhere.
    NodeId simpson_cumulative(NodeId row, double h);
    /// (1/n_cols) * sum_j ||x_col_j - target_col_j||_p  (p in {1,2,4}).
    NodeId pnorm_loss(NodeId x, Mat target, int p);

    const Mat& value(NodeId id) const { return nodes_[id].value; }
    const Mat& grad(NodeId id) const { return nodes_[id].grad; }

    /// Reverse sweep from a scalar (1x1) root.
    void backward(NodeId root);

    std::size_t size() const { return nodes_.size(); }

private:
    enum class Op {
        constant,
        parameter,
        affine,
        activation,
        add,
        sub,
        scale,
        axpy,
        concat_rows,
        exp_scale,
        mul_const,
        symexp,
        simpson,
        pnorm,
    };

    struct Node {
        Op op;
        Mat value;
        Mat grad;
        int a = -1, b = -1, c = -1;
        double alpha = 0.0;
        int p = 2;
        Activation act = Activation::relu;
        Mat aux;  // pnorm target
        bool needs_grad = false;
    };

    NodeId push(Node n);
    void ensure_grad(Node& n);

    std::vector<Node> nodes_;
};

/// Parameter nodes of a network registered on a tape.
struct MlpNodes {
    std::vector<Tape::NodeId> weights;
    std::vector<Tape::NodeId> biases;
};

MlpNodes register_parameters(Tape& tape, const Mlp& net);

/// Forward graph of the network on `input` (columns are samples).
Tape::NodeId mlp_forward(Tape& tape, const MlpNodes& nodes, const Mlp& net,
                         Tape::NodeId input);

/// Classic fourth-order fixed-step unroll of du/dt = field(u), K steps of
/// size dts. `field` maps a state node to its derivative node. Returns the
/// K intermediate state nodes.
template <typename Field>
std::vector<Tape::NodeId> rk4_unroll(Tape& tape, Field&& field,
                                     Tape::NodeId state0, double dts, int k) {
    std::vector<Tape::NodeId> states;
    states.reserve(k);
    Tape::NodeId u = state0;
    for (int step = 0; step < k; ++step) {
        const auto k1 = field(u);
        const auto k2 = field(tape.axpy(0.5 * dts, k1, u));
        const auto k3 = field(tape.axpy(0.5 * dts, k2, u));
        const auto k4 = field(tape.axpy(dts, k3, u));
        // u + dts/6 * (k1 + 2 k2 + 2 k3 + k4)
        auto acc = tape.add(k1, k4);
        acc = tape.axpy(2.0, k2, acc);
        acc = tape.axpy(2.0, k3, acc);
        u = tape.axpy(dts / 6.0, acc, u);
        states.push_back(u);
    }
    return states;
}

/// Apply AdamW-accumulated gradients: copies tape gradients of the
/// registered parameter nodes into a flat gradient buffer matching
/// Mlp::parameter_blocks() order.
std::vector<Mat> collect_gradients(const Tape& tape, const MlpNodes& nodes);

}  // namespace stiffode::neural
