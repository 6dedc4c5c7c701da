#include "stiffode/neural/tape.hpp"

#include "stiffode/util/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace stiffode::neural {

Tape::NodeId Tape::push(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<NodeId>(nodes_.size()) - 1;
}

void Tape::ensure_grad(Node& n) {
    if (n.grad.size() == 0) n.grad = Mat::Zero(n.value.rows(), n.value.cols());
}

Tape::NodeId Tape::constant(Mat value) {
    Node n;
    n.op = Op::constant;
    n.value = std::move(value);
    n.needs_grad = false;
    return push(std::move(n));
}

Tape::NodeId Tape::parameter(Mat value) {
    Node n;
    n.op = Op::parameter;
    n.value = std::move(value);
    n.needs_grad = true;
    return push(std::move(n));
}

Tape::NodeId Tape::affine(NodeId w, NodeId x, NodeId b) {
    const auto& kk = kernels::active();
    const Mat& wv = nodes_[w].value;
    const Mat& xv = nodes_[x].value;
    const Mat& bv = nodes_[b].value;
    if (wv.cols() != xv.rows() || bv.rows() != wv.rows() || bv.cols() != 1)
        throw std::invalid_argument("tape affine: shape mismatch");
    Node n;
    n.op = Op::affine;
    n.a = w;
    n.b = x;
    n.c = b;
    n.value.resize(wv.rows(), xv.cols());
    kk.gemm_nn(wv.rows(), xv.cols(), wv.cols(), wv.data(), xv.data(), 0.0,
               n.value.data());
    kk.bias_add(n.value.rows(), n.value.cols(), bv.data(), n.value.data());
    n.needs_grad =
        nodes_[w].needs_grad || nodes_[x].needs_grad || nodes_[b].needs_grad;
    return push(std::move(n));
}

Tape::NodeId Tape::activation(Activation act, NodeId x) {
    const auto& kk = kernels::active();
    Node n;
    n.op = Op::activation;
    n.a = x;
    n.act = act;
    const Mat& xv = nodes_[x].value;
    n.value.resize(xv.rows(), xv.cols());
    kk.act_forward(act, xv.size(), xv.data(), n.value.data());
    n.needs_grad = nodes_[x].needs_grad;
    return push(std::move(n));
}

Tape::NodeId Tape::add(NodeId a, NodeId b) {
    Node n;
    n.op = Op::add;
    n.a = a;
    n.b = b;
    n.value = nodes_[a].value + nodes_[b].value;
    n.needs_grad = nodes_[a].needs_grad || nodes_[b].needs_grad;
    return push(std::move(n));
}

Tape::NodeId Tape::sub(NodeId a, NodeId b) {
    Node n;
    n.op = Op::sub;
    n.a = a;
    n.b = b;
    n.value = nodes_[a].value - nodes_[b].value;
    n.needs_grad = nodes_[a].needs_grad || nodes_[b].needs_grad;
    return push(std::move(n));
}

Tape::NodeId Tape::scale(NodeId a, double alpha) {
    Node n;
    n.op = Op::scale;
    n.a = a;
    n.alpha = alpha;
    n.value = alpha * nodes_[a].value;
    n.needs_grad = nodes_[a].needs_grad;
    return push(std::move(n));
}

Tape::NodeId Tape::axpy(double alpha, NodeId x, NodeId y) {
    Node n;
    n.op = Op::axpy;
    n.a = x;
    n.b = y;
    n.alpha = alpha;
    n.value = alpha * nodes_[x].value + nodes_[y].value;
    n.needs_grad = nodes_[x].needs_grad || nodes_[y].needs_grad;
    return push(std::move(n));
}

Tape::NodeId Tape::concat_rows(NodeId top, NodeId bottom) {
    const Mat& tv = nodes_[top].value;
    const Mat& bv = nodes_[bottom].value;
    if (tv.cols() != bv.cols())
        throw std::invalid_argument("tape concat_rows: column mismatch");
    Node n;
    n.op = Op::concat_rows;
    n.a = top;
    n.b = bottom;
    n.value.resize(tv.rows() + bv.rows(), tv.cols());
    n.value.topRows(tv.rows()) = tv;
    n.value.bottomRows(bv.rows()) = bv;
    n.needs_grad = nodes_[top].needs_grad || nodes_[bottom].needs_grad;
    return push(std::move(n));
}

Tape::NodeId Tape::exp_scale(NodeId x, double s) {
    Node n;
    n.op = Op::exp_scale;
    n.a = x;
    n.alpha = s;
    n.value = s * nodes_[x].value.array().exp();
    n.needs_grad = nodes_[x].needs_grad;
    return push(std::move(n));
}

Tape::NodeId Tape::mul_const(NodeId x, Mat factor) {
    const Mat& xv = nodes_[x].value;
    if (xv.rows() != factor.rows() || xv.cols() != factor.cols())
        throw std::invalid_argument("tape mul_const: shape mismatch");
    Node n;
    n.op = Op::mul_const;
    n.a = x;
    n.aux = std::move(factor);
    n.value = xv.cwiseProduct(n.aux);
    n.needs_grad = nodes_[x].needs_grad;
    return push(std::move(n));
}

Tape::NodeId Tape::symexp(NodeId x) {
    const Mat& xv = nodes_[x].value;
    Node n;
    n.op = Op::symexp;
    n.a = x;
    n.value.resize(xv.rows(), xv.cols());
    for (Eigen::Index i = 0; i < xv.size(); ++i) {
        const double y = xv.data()[i];
        n.value.data()[i] =
            std::abs(y) < 2.0
                ? y
                : (y > 0 ? 1.0 : -1.0) * (std::exp(std::abs(y) - 2.0) + 1.0);
    }
    n.needs_grad = nodes_[x].needs_grad;
    return push(std::move(n));
}

Tape::NodeId Tape::simpson_cumulative(NodeId row, double h) {
    const Mat& g = nodes_[row].value;
    if (g.rows() != 1)
        throw std::invalid_argument("tape simpson: expects a 1 x n row");
    Node n;
    n.op = Op::simpson;
    n.a = row;
    n.alpha = h;
    n.value.resize(1, g.cols());
    util::cumulative_simpson(g.data(), static_cast<int>(g.cols()), h,
                             n.value.data());
    n.needs_grad = nodes_[row].needs_grad;
    return push(std::move(n));
}

Tape::NodeId Tape::pnorm_loss(NodeId x, Mat target, int p) {
    if (p != 1 && p != 2 && p != 4)
        throw std::invalid_argument("tape pnorm: p must be 1, 2 or 4");
    const Mat& xv = nodes_[x].value;
    if (xv.rows() != target.rows() || xv.cols() != target.cols())
        throw std::invalid_argument("tape pnorm: target shape mismatch");
    Node n;
    n.op = Op::pnorm;
    n.a = x;
    n.p = p;
    n.aux = std::move(target);
    double acc = 0.0;
    for (Eigen::Index j = 0; j < xv.cols(); ++j) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < xv.rows(); ++i) {
            const double d = std::abs(xv(i, j) - n.aux(i, j));
            s += p == 1 ? d : (p == 2 ? d * d : d * d * d * d);
        }
        acc += p == 1 ? s : (p == 2 ? std::sqrt(s) : std::pow(s, 0.25));
    }
    n.value = Mat::Constant(1, 1, acc / static_cast<double>(xv.cols()));
    n.needs_grad = nodes_[x].needs_grad;
    return push(std::move(n));
}

void Tape::backward(NodeId root) {
    if (nodes_[root].value.size() != 1)
        throw std::invalid_argument("tape backward: root must be scalar");
    for (auto& n : nodes_)
        if (n.grad.size() != 0) n.grad.setZero();
    ensure_grad(nodes_[root]);
    nodes_[root].grad(0, 0) = 1.0;

    const auto& kk = kernels::active();
    for (NodeId id = root; id >= 0; --id) {
        Node& n = nodes_[id];
        if (!n.needs_grad || n.grad.size() == 0) continue;
        const Mat& gy = n.grad;
        switch (n.op) {
            case Op::constant:
            case Op::parameter:
                break;
            case Op::affine: {
                Node& w = nodes_[n.a];
                Node& x = nodes_[n.b];
                Node& b = nodes_[n.c];
                if (w.needs_grad) {
                    ensure_grad(w);
                    kk.gemm_nt(w.value.rows(), w.value.cols(), gy.cols(),
                               gy.data(), x.value.data(), 1.0, w.grad.data());
                }
                if (x.needs_grad) {
                    ensure_grad(x);
                    kk.gemm_tn(x.value.rows(), x.value.cols(), w.value.rows(),
                               w.value.data(), gy.data(), 1.0, x.grad.data());
                }
                if (b.needs_grad) {
                    ensure_grad(b);
                    b.grad.col(0) += gy.rowwise().sum();
                }
                break;
            }
            case Op::activation: {
                Node& x = nodes_[n.a];
                if (x.needs_grad) {
                    ensure_grad(x);
                    Mat tmp(gy.rows(), gy.cols());
                    kk.act_backward(n.act, gy.size(), x.value.data(), gy.data(),
                                    tmp.data());
                    x.grad += tmp;
                }
                break;
            }
            case Op::add: {
                Node& a = nodes_[n.a];
                Node& b = nodes_[n.b];
                if (a.needs_grad) {
                    ensure_grad(a);
                    a.grad += gy;
                }
                if (b.needs_grad) {
                    ensure_grad(b);
                    b.grad += gy;
                }
                break;
            }
            case Op::sub: {
                Node& a = nodes_[n.a];
                Node& b = nodes_[n.b];
                if (a.needs_grad) {
                    ensure_grad(a);
                    a.grad += gy;
                }
                if (b.needs_grad) {
                    ensure_grad(b);
                    b.grad -= gy;
                }
                break;
            }
            case Op::scale: {
                Node& a = nodes_[n.a];
                if (a.needs_grad) {
                    ensure_grad(a);
                    a.grad += n.alpha * gy;
                }
                break;
            }
            case Op::axpy: {
                Node& x = nodes_[n.a];
                Node& y = nodes_[n.b];
                if (x.needs_grad) {
                    ensure_grad(x);
                    x.grad += n.alpha * gy;
                }
                if (y.needs_grad) {
                    ensure_grad(y);
                    y.grad += gy;
                }
                break;
            }
            case Op::concat_rows: {
                Node& top = nodes_[n.a];
                Node& bottom = nodes_[n.b];
                if (top.needs_grad) {
                    ensure_grad(top);
                    top.grad += gy.topRows(top.value.rows());
                }
                if (bottom.needs_grad) {
                    ensure_grad(bottom);
                    bottom.grad += gy.bottomRows(bottom.value.rows());
                }
                break;
            }
            case Op::exp_scale: {
                Node& x = nodes_[n.a];
                if (x.needs_grad) {
                    ensure_grad(x);
                    x.grad.array() += gy.array() * n.value.array();
                }
                break;
            }
            case Op::mul_const: {
                Node& x = nodes_[n.a];
                if (x.needs_grad) {
                    ensure_grad(x);
                    x.grad += gy.cwiseProduct(n.aux);
                }
                break;
            }
            case Op::symexp: {
                Node& x = nodes_[n.a];
                if (x.needs_grad) {
                    ensure_grad(x);
                    for (Eigen::Index i = 0; i < gy.size(); ++i) {
                        const double y = x.value.data()[i];
                        const double d =
                            std::abs(y) < 2.0 ? 1.0 : std::exp(std::abs(y) - 2.0);
                        x.grad.data()[i] += gy.data()[i] * d;
                    }
                }
                break;
            }
            case Op::simpson: {
                Node& x = nodes_[n.a];
                if (x.needs_grad) {
                    ensure_grad(x);
                    util::cumulative_simpson_adjoint(gy.data(),
                                                     static_cast<int>(gy.cols()),
                                                     n.alpha, x.grad.data());
                }
                break;
            }
            case Op::pnorm: {
                Node& x = nodes_[n.a];
                if (!x.needs_grad) break;
                ensure_grad(x);
                const double g0 = gy(0, 0) / static_cast<double>(x.value.cols());
                for (Eigen::Index j = 0; j < x.value.cols(); ++j) {
                    double s = 0.0;
                    for (Eigen::Index i = 0; i < x.value.rows(); ++i) {
                        const double d = std::abs(x.value(i, j) - n.aux(i, j));
                        s += n.p == 1 ? d : (n.p == 2 ? d * d : d * d * d * d);
                    }
                    if (n.p == 1) {
                        for (Eigen::Index i = 0; i < x.value.rows(); ++i) {
                            const double d = x.value(i, j) - n.aux(i, j);
                            // Subgradient 0 at the kink.
                            x.grad(i, j) += g0 * (d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0));
                        }
                    } else if (s > 0.0) {
                        const double norm = n.p == 2 ? std::sqrt(s) : std::pow(s, 0.25);
                        for (Eigen::Index i = 0; i < x.value.rows(); ++i) {
                            const double d = x.value(i, j) - n.aux(i, j);
                            const double num = n.p == 2 ? d : d * d * d;
                            const double den = n.p == 2 ? norm : norm * norm * norm;
                            x.grad(i, j) += g0 * num / den;
                        }
                    }
                }
                break;
            }
        }
    }
}

MlpNodes register_parameters(Tape& tape, const Mlp& net) {
    MlpNodes nodes;
    for (int l = 0; l < net.depth; ++l) {
        nodes.weights.push_back(tape.parameter(net.weights[l]));
        nodes.biases.push_back(tape.parameter(Mat(net.biases[l])));
    }
    return nodes;
}

Tape::NodeId mlp_forward(Tape& tape, const MlpNodes& nodes, const Mlp& net,
                         Tape::NodeId input) {
    Tape::NodeId cur = input;
    for (int l = 0; l < net.depth; ++l) {
        cur = tape.affine(nodes.weights[l], cur, nodes.biases[l]);
        if (l + 1 < net.depth) cur = tape.activation(net.activation, cur);
    }
    return cur;
}

std::vector<Mat> collect_gradients(const Tape& tape, const MlpNodes& nodes) {
    std::vector<Mat> grads;
    auto grad_or_zero = [&tape](Tape::NodeId id) {
        const Mat& g = tape.grad(id);
        if (g.size() != 0) return g;
        const Mat& v = tape.value(id);
        return Mat(Mat::Zero(v.rows(), v.cols()));
    };
    for (std::size_t l = 0; l < nodes.weights.size(); ++l) {
        grads.push_back(grad_or_zero(nodes.weights[l]));
        grads.push_back(grad_or_zero(nodes.biases[l]));
    }
    return grads;
}

}  // namespace stiffode::neural
