#pragma once

#include "perconv/ndarray.hpp"

#include <cmath>
#include <functional>
#include <utility>

namespace perconv::ad {

using perconv::Array;
using perconv::Shape;

// Handle into a Tape. Valid only for the tape that produced it.
struct Ref {
    int idx = -1;
};

enum class BnMode { Train, Eval };

// Dynamically recorded computation graph. One forward pass records nodes
// in execution order; backward() visits them in exact reverse and is
// usable once per recording.
template <class T>
class Tape {
public:
    struct Node {
        Array<T> value;
        Array<T> grad;
        bool requires_grad = false;
        std::function<void(Tape&, int)> backprop; // null for leaves
    };

    Ref leaf(Array<T> v, bool requires_grad) {
        nodes_.push_back(Node{std::move(v), {}, requires_grad, nullptr});
        return Ref{static_cast<int>(nodes_.size()) - 1};
    }

    const Array<T>& value(Ref r) const { return nodes_[r.idx].value; }
    const Array<T>& grad(Ref r) const {
        if (nodes_[r.idx].grad.size() == 0)
            throw ShapeError("gradient not computed; call backward first");
        return nodes_[r.idx].grad;
    }
    bool requires_grad(Ref r) const { return nodes_[r.idx].requires_grad; }

    Ref emit(Array<T> value, bool requires_grad, std::function<void(Tape&, int)> backprop) {
        nodes_.push_back(Node{std::move(value), {}, requires_grad, std::move(backprop)});
        return Ref{static_cast<int>(nodes_.size()) - 1};
    }

    // Seeds d(loss)/d(loss) = 1 and propagates to every recorded node.
    // Gradients accumulate additively across fan-out.
    void backward(Ref loss) {
        if (consumed_) throw ShapeError("graph already consumed by a previous backward");
        if (nodes_[loss.idx].value.size() != 1)
            throw ShapeError("backward requires a scalar loss");
        for (Node& n : nodes_) n.grad = Array<T>::zeros(n.value.shape);
        nodes_[loss.idx].grad.data[0] = T(1);
        for (int i = loss.idx; i >= 0; --i) {
            Node& n = nodes_[i];
            if (n.backprop && n.requires_grad) n.backprop(*this, i);
        }
        consumed_ = true;
    }

    Array<T>& mutable_grad(int idx) { return nodes_[idx].grad; }
    const Array<T>& node_value(int idx) const { return nodes_[idx].value; }
    const Array<T>& node_grad(int idx) const { return nodes_[idx].grad; }

private:
    std::vector<Node> nodes_;
    bool consumed_ = false;
};

namespace detail {

template <class T>
void accumulate(Tape<T>& tape, Ref parent, const Array<T>& contribution) {
    if (!tape.requires_grad(parent)) return;
    Array<T>& g = tape.mutable_grad(parent.idx);
    for (std::size_t i = 0; i < g.size(); ++i) g.data[i] += contribution.data[i];
}

// Unpads and gathers conv patches: col[(c*kh+i)*kw+j, oh*wo+ow].
template <class T>
void im2col(const T* x, std::size_t c_in, std::size_t h, std::size_t w,
            std::size_t kh, std::size_t kw, std::size_t sh, std::size_t sw,
            std::size_t ph, std::size_t pw, std::size_t ho, std::size_t wo, T* col) {
    const std::size_t l = ho * wo;
    for (std::size_t c = 0; c < c_in; ++c) {
        for (std::size_t i = 0; i < kh; ++i) {
            for (std::size_t j = 0; j < kw; ++j) {
                T* row = col + ((c * kh + i) * kw + j) * l;
                for (std::size_t oh = 0; oh < ho; ++oh) {
                    std::ptrdiff_t ih = static_cast<std::ptrdiff_t>(oh * sh + i) -
                                        static_cast<std::ptrdiff_t>(ph);
                    if (ih < 0 || ih >= static_cast<std::ptrdiff_t>(h)) {
                        for (std::size_t ow = 0; ow < wo; ++ow) row[oh * wo + ow] = T(0);
                        continue;
                    }
                    const T* src = x + (c * h + ih) * w;
                    for (std::size_t ow = 0; ow < wo; ++ow) {
                        std::ptrdiff_t iw = static_cast<std::ptrdiff_t>(ow * sw + j) -
                                            static_cast<std::ptrdiff_t>(pw);
                        row[oh * wo + ow] =
                            (iw < 0 || iw >= static_cast<std::ptrdiff_t>(w)) ? T(0) : src[iw];
                    }
                }
            }
        }
    }
}

template <class T>
void col2im_acc(const T* col, std::size_t c_in, std::size_t h, std::size_t w,
                std::size_t kh, std::size_t kw, std::size_t sh, std::size_t sw,
                std::size_t ph, std::size_t pw, std::size_t ho, std::size_t wo, T* x) {
    const std::size_t l = ho * wo;
    for (std::size_t c = 0; c < c_in; ++c) {
        for (std::size_t i = 0; i < kh; ++i) {
            for (std::size_t j = 0; j < kw; ++j) {
                const T* row = col + ((c * kh + i) * kw + j) * l;
                for (std::size_t oh = 0; oh < ho; ++oh) {
                    std::ptrdiff_t ih = static_cast<std::ptrdiff_t>(oh * sh + i) -
                                        static_cast<std::ptrdiff_t>(ph);
                    if (ih < 0 || ih >= static_cast<std::ptrdiff_t>(h)) continue;
                    T* dst = x + (c * h + ih) * w;
                    for (std::size_t ow = 0; ow < wo; ++ow) {
                        std::ptrdiff_t iw = static_cast<std::ptrdiff_t>(ow * sw + j) -
                                            static_cast<std::ptrdiff_t>(pw);
                        if (iw < 0 || iw >= static_cast<std::ptrdiff_t>(w)) continue;
                        dst[iw] += row[oh * wo + ow];
                    }
                }
            }
        }
    }
}

} // namespace detail

// Cross-correlation (no kernel flip) with zero padding.
// x: [N,Cin,H,W], w: [Cout,Cin,kh,kw], b: [Cout].
template <class T>
Ref conv2d(Tape<T>& tape, Ref x, Ref w, Ref b,
           std::size_t sh, std::size_t sw, std::size_t ph, std::size_t pw) {
    const Array<T>& xv = tape.value(x);
    const Array<T>& wv = tape.value(w);
    const Array<T>& bv = tape.value(b);
    if (xv.shape.size() != 4 || wv.shape.size() != 4)
        throw ShapeError("conv2d expects 4-d input and weight");
    const std::size_t n = xv.shape[0], c_in = xv.shape[1], h = xv.shape[2], wd = xv.shape[3];
    const std::size_t c_out = wv.shape[0], kh = wv.shape[2], kw = wv.shape[3];
    if (wv.shape[1] != c_in) throw ShapeError("conv2d channel mismatch");
    if (bv.shape != Shape{c_out}) throw ShapeError("conv2d bias shape mismatch");
    if (h + 2 * ph < kh || wd + 2 * pw < kw) throw ShapeError("conv2d kernel larger than padded input");
    const std::size_t ho = (h + 2 * ph - kh) / sh + 1;
    const std::size_t wo = (wd + 2 * pw - kw) / sw + 1;
    const std::size_t k = c_in * kh * kw, l = ho * wo;

    Array<T> out(Shape{n, c_out, ho, wo});
    std::vector<T> col(k * l);
    for (std::size_t s = 0; s < n; ++s) {
        detail::im2col(xv.ptr() + s * c_in * h * wd, c_in, h, wd, kh, kw, sh, sw, ph, pw, ho, wo,
                       col.data());
        T* o = out.ptr() + s * c_out * l;
        for (std::size_t co = 0; co < c_out; ++co)
            for (std::size_t p = 0; p < l; ++p) o[co * l + p] = bv.data[co];
        matmul_acc(wv.ptr(), col.data(), o, c_out, k, l);
    }

    bool rg = tape.requires_grad(x) || tape.requires_grad(w) || tape.requires_grad(b);
    auto back = [x, w, b, sh, sw, ph, pw, n, c_in, h, wd, c_out, kh, kw, ho, wo, k,
                 l](Tape<T>& t, int self) {
        const Array<T>& dy = t.node_grad(self);
        const Array<T>& xval = t.value(x);
        const Array<T>& wval = t.value(w);
        std::vector<T> col(k * l);
        const bool need_dx = t.requires_grad(x);
        const bool need_dw = t.requires_grad(w);
        const bool need_db = t.requires_grad(b);
        std::vector<T> dcol(need_dx ? k * l : 0);
        for (std::size_t s = 0; s < n; ++s) {
            const T* dys = dy.ptr() + s * c_out * l;
            if (need_dw || need_dx)
                detail::im2col(xval.ptr() + s * c_in * h * wd, c_in, h, wd, kh, kw, sh, sw, ph, pw,
                               ho, wo, col.data());
            if (need_dw)
                matmul_nt_acc(dys, col.data(), t.mutable_grad(w.idx).ptr(), c_out, l, k);
            if (need_db) {
                T* db = t.mutable_grad(b.idx).ptr();
                for (std::size_t co = 0; co < c_out; ++co)
                    for (std::size_t p = 0; p < l; ++p) db[co] += dys[co * l + p];
            }
            if (need_dx) {
                std::fill(dcol.begin(), dcol.end(), T(0));
                matmul_tn_acc(wval.ptr(), dys, dcol.data(), c_out, k, l);
                detail::col2im_acc(dcol.data(), c_in, h, wd, kh, kw, sh, sw, ph, pw, ho, wo,
                                   t.mutable_grad(x.idx).ptr() + s * c_in * h * wd);
            }
        }
    };
    return tape.emit(std::move(out), rg, rg ? std::function<void(Tape<T>&, int)>(back) : nullptr);
}

// Wraps the width axis: output columns = [last p] ++ input ++ [first p].
template <class T>
Ref circular_pad_width(Tape<T>& tape, Ref x, std::size_t p) {
    const Array<T>& xv = tape.value(x);
    if (xv.shape.size() != 4) throw ShapeError("circular_pad_width expects 4-d input");
    const std::size_t w = xv.shape[3];
    if (p > w) throw ShapeError("circular pad wider than input");
    const std::size_t rows = xv.size() / w, wo = w + 2 * p;
    Array<T> out(Shape{xv.shape[0], xv.shape[1], xv.shape[2], wo});
    for (std::size_t r = 0; r < rows; ++r) {
        const T* src = xv.ptr() + r * w;
        T* dst = out.ptr() + r * wo;
        for (std::size_t j = 0; j < p; ++j) dst[j] = src[w - p + j];
        for (std::size_t j = 0; j < w; ++j) dst[p + j] = src[j];
        for (std::size_t j = 0; j < p; ++j) dst[p + w + j] = src[j];
    }
    bool rg = tape.requires_grad(x);
    auto back = [x, p, w, rows, wo](Tape<T>& t, int self) {
        const Array<T>& dy = t.node_grad(self);
        T* dx = t.mutable_grad(x.idx).ptr();
        for (std::size_t r = 0; r < rows; ++r) {
            const T* g = dy.ptr() + r * wo;
            T* d = dx + r * w;
            for (std::size_t j = 0; j < p; ++j) d[w - p + j] += g[j];
            for (std::size_t j = 0; j < w; ++j) d[j] += g[p + j];
            for (std::size_t j = 0; j < p; ++j) d[j] += g[p + w + j];
        }
    };
    return tape.emit(std::move(out), rg, rg ? std::function<void(Tape<T>&, int)>(back) : nullptr);
}

// Per-channel normalization over (N,H,W). Train mode uses batch statistics
// (biased variance) and updates the running stats in place with `momentum`;
// Eval mode normalizes by the running stats.
template <class T>
Ref batch_norm(Tape<T>& tape, Ref x, Ref gamma, Ref beta, Array<T>& running_mean,
               Array<T>& running_var, BnMode mode, T eps = T(1e-5), T momentum = T(0.1)) {
    const Array<T>& xv = tape.value(x);
    if (xv.shape.size() != 4) throw ShapeError("batch_norm expects 4-d input");
    const std::size_t n = xv.shape[0], c = xv.shape[1], h = xv.shape[2], w = xv.shape[3];
    if (tape.value(gamma).shape != Shape{c} || tape.value(beta).shape != Shape{c})
        throw ShapeError("batch_norm parameter shape mismatch");
    const std::size_t m = n * h * w, hw = h * w;
    if (mode == BnMode::Train && m < 2) throw ShapeError("batch_norm: degenerate batch");

    Array<T> mean(Shape{c}), inv_std(Shape{c});
    if (mode == BnMode::Train) {
        for (std::size_t ch = 0; ch < c; ++ch) {
            T mu = T(0);
            for (std::size_t s = 0; s < n; ++s) {
                const T* p = xv.ptr() + (s * c + ch) * hw;
                for (std::size_t i = 0; i < hw; ++i) mu += p[i];
            }
            mu /= static_cast<T>(m);
            T var = T(0);
            for (std::size_t s = 0; s < n; ++s) {
                const T* p = xv.ptr() + (s * c + ch) * hw;
                for (std::size_t i = 0; i < hw; ++i) {
                    T d = p[i] - mu;
                    var += d * d;
                }
            }
            var /= static_cast<T>(m);
            mean.data[ch] = mu;
            inv_std.data[ch] = T(1) / std::sqrt(var + eps);
            running_mean.data[ch] = (T(1) - momentum) * running_mean.data[ch] + momentum * mu;
            running_var.data[ch] = (T(1) - momentum) * running_var.data[ch] + momentum * var;
        }
    } else {
        for (std::size_t ch = 0; ch < c; ++ch) {
            mean.data[ch] = running_mean.data[ch];
            inv_std.data[ch] = T(1) / std::sqrt(running_var.data[ch] + eps);
        }
    }

    const Array<T>& gv = tape.value(gamma);
    const Array<T>& bv = tape.value(beta);
    Array<T> xhat(xv.shape), out(xv.shape);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t ch = 0; ch < c; ++ch) {
            const T* p = xv.ptr() + (s * c + ch) * hw;
            T* xh = xhat.ptr() + (s * c + ch) * hw;
            T* o = out.ptr() + (s * c + ch) * hw;
            const T mu = mean.data[ch], is = inv_std.data[ch];
            const T g = gv.data[ch], bb = bv.data[ch];
            for (std::size_t i = 0; i < hw; ++i) {
                xh[i] = (p[i] - mu) * is;
                o[i] = g * xh[i] + bb;
            }
        }
    }

    bool rg = tape.requires_grad(x) || tape.requires_grad(gamma) || tape.requires_grad(beta);
    auto back = [x, gamma, beta, mode, n, c, hw, m, xhat = std::move(xhat),
                 inv_std = std::move(inv_std)](Tape<T>& t, int self) {
        const Array<T>& dy = t.node_grad(self);
        const Array<T>& gv = t.value(gamma);
        for (std::size_t ch = 0; ch < c; ++ch) {
            T sum_dy = T(0), sum_dy_xhat = T(0);
            for (std::size_t s = 0; s < n; ++s) {
                const T* g = dy.ptr() + (s * c + ch) * hw;
                const T* xh = xhat.ptr() + (s * c + ch) * hw;
                for (std::size_t i = 0; i < hw; ++i) {
                    sum_dy += g[i];
                    sum_dy_xhat += g[i] * xh[i];
                }
            }
            if (t.requires_grad(gamma)) t.mutable_grad(gamma.idx).data[ch] += sum_dy_xhat;
            if (t.requires_grad(beta)) t.mutable_grad(beta.idx).data[ch] += sum_dy;
            if (t.requires_grad(x)) {
                const T is = inv_std.data[ch], gch = gv.data[ch];
                const T inv_m = T(1) / static_cast<T>(m);
                for (std::size_t s = 0; s < n; ++s) {
                    const T* g = dy.ptr() + (s * c + ch) * hw;
                    const T* xh = xhat.ptr() + (s * c + ch) * hw;
                    T* dx = t.mutable_grad(x.idx).ptr() + (s * c + ch) * hw;
                    if (mode == BnMode::Train) {
                        for (std::size_t i = 0; i < hw; ++i)
                            dx[i] += gch * is *
                                     (g[i] - sum_dy * inv_m - xh[i] * sum_dy_xhat * inv_m);
                    } else {
                        for (std::size_t i = 0; i < hw; ++i) dx[i] += gch * is * g[i];
                    }
                }
            }
        }
    };
    return tape.emit(std::move(out), rg, rg ? std::function<void(Tape<T>&, int)>(back) : nullptr);
}

template <class T>
Ref relu(Tape<T>& tape, Ref x) {
    const Array<T>& xv = tape.value(x);
    Array<T> out(xv.shape);
    for (std::size_t i = 0; i < xv.size(); ++i) out.data[i] = xv.data[i] > T(0) ? xv.data[i] : T(0);
    bool rg = tape.requires_grad(x);
    auto back = [x](Tape<T>& t, int self) {
        const Array<T>& dy = t.node_grad(self);
        const Array<T>& xv = t.value(x);
        T* dx = t.mutable_grad(x.idx).ptr();
        for (std::size_t i = 0; i < xv.size(); ++i)
            if (xv.data[i] > T(0)) dx[i] += dy.data[i];
    };
    return tape.emit(std::move(out), rg, rg ? std::function<void(Tape<T>&, int)>(back) : nullptr);
}

template <class T>
Ref sigmoid(Tape<T>& tape, Ref x) {
    const Array<T>& xv = tape.value(x);
    Array<T> out(xv.shape);
    for (std::size_t i = 0; i < xv.size(); ++i) out.data[i] = T(1) / (T(1) + std::exp(-xv.data[i]));
    bool rg = tape.requires_grad(x);
    auto back = [x](Tape<T>& t, int self) {
        const Array<T>& dy = t.node_grad(self);
        const Array<T>& s = t.node_value(self);
        T* dx = t.mutable_grad(x.idx).ptr();
        for (std::size_t i = 0; i < s.size(); ++i)
            dx[i] += dy.data[i] * s.data[i] * (T(1) - s.data[i]);
    };
    return tape.emit(std::move(out), rg, rg ? std::function<void(Tape<T>&, int)>(back) : nullptr);
}

template <class T>
Ref add(Tape<T>& tape, Ref a, Ref b) {
    const Array<T>& av = tape.value(a);
    const Array<T>& bv = tape.value(b);
    if (av.shape != bv.shape) throw ShapeError("add shape mismatch");
    Array<T> out(av.shape);
    for (std::size_t i = 0; i < av.size(); ++i) out.data[i] = av.data[i] + bv.data[i];
    bool rg = tape.requires_grad(a) || tape.requires_grad(b);
    auto back = [a, b](Tape<T>& t, int self) {
        const Array<T>& dy = t.node_grad(self);
        detail::accumulate(t, a, dy);
        detail::accumulate(t, b, dy);
    };
    return tape.emit(std::move(out), rg, rg ? std::function<void(Tape<T>&, int)>(back) : nullptr);
}

template <class T>
Ref scale(Tape<T>& tape, Ref x, T factor) {
    const Array<T>& xv = tape.value(x);
    Array<T> out(xv.shape);
    for (std::size_t i = 0; i < xv.size(); ++i) out.data[i] = factor * xv.data[i];
    bool rg = tape.requires_grad(x);
    auto back = [x, factor](Tape<T>& t, int self) {
        const Array<T>& dy = t.node_grad(self);
        T* dx = t.mutable_grad(x.idx).ptr();
        for (std::size_t i = 0; i < dy.size(); ++i) dx[i] += factor * dy.data[i];
    };
    return tape.emit(std::move(out), rg, rg ? std::function<void(Tape<T>&, int)>(back) : nullptr);
}

// [N,C,H,W] -> [N, C*H*W]
template <class T>
Ref flatten(Tape<T>& tape, Ref x) {
    const Array<T>& xv = tape.value(x);
    if (xv.shape.size() != 4) throw ShapeError("flatten expects 4-d input");
    Array<T> out(Shape{xv.shape[0], xv.size() / xv.shape[0]}, xv.data);
    bool rg = tape.requires_grad(x);
    auto back = [x](Tape<T>& t, int self) {
        const Array<T>& dy = t.node_grad(self);
        T* dx = t.mutable_grad(x.idx).ptr();
        for (std::size_t i = 0; i < dy.size(); ++i) dx[i] += dy.data[i];
    };
    return tape.emit(std::move(out), rg, rg ? std::function<void(Tape<T>&, int)>(back) : nullptr);
}

// x: [N,F], w: [O,F], b: [O] -> [N,O]
template <class T>
Ref linear(Tape<T>& tape, Ref x, Ref w, Ref b) {
    const Array<T>& xv = tape.value(x);
    const Array<T>& wv = tape.value(w);
    const Array<T>& bv = tape.value(b);
    if (xv.shape.size() != 2 || wv.shape.size() != 2 || xv.shape[1] != wv.shape[1])
        throw ShapeError("linear shape mismatch");
    const std::size_t n = xv.shape[0], f = xv.shape[1], o = wv.shape[0];
    if (bv.shape != Shape{o}) throw ShapeError("linear bias shape mismatch");
    Array<T> out(Shape{n, o});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < o; ++j) out.data[i * o + j] = bv.data[j];
    matmul_nt_acc(xv.ptr(), wv.ptr(), out.ptr(), n, f, o);
    bool rg = tape.requires_grad(x) || tape.requires_grad(w) || tape.requires_grad(b);
    auto back = [x, w, b, n, f, o](Tape<T>& t, int self) {
        const Array<T>& dy = t.node_grad(self);
        if (t.requires_grad(x))
            matmul_acc(dy.ptr(), t.value(w).ptr(), t.mutable_grad(x.idx).ptr(), n, o, f);
        if (t.requires_grad(w))
            matmul_tn_acc(dy.ptr(), t.value(x).ptr(), t.mutable_grad(w.idx).ptr(), n, o, f);
        if (t.requires_grad(b)) {
            T* db = t.mutable_grad(b.idx).ptr();
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < o; ++j) db[j] += dy.data[i * o + j];
        }
    };
    return tape.emit(std::move(out), rg, rg ? std::function<void(Tape<T>&, int)>(back) : nullptr);
}

template <class T>
Ref sum(Tape<T>& tape, Ref x) {
    const Array<T>& xv = tape.value(x);
    T s = T(0);
    for (T v : xv.data) s += v;
    Array<T> out(Shape{1});
    out.data[0] = s;
    bool rg = tape.requires_grad(x);
    auto back = [x](Tape<T>& t, int self) {
        const T g = t.node_grad(self).data[0];
        T* dx = t.mutable_grad(x.idx).ptr();
        for (std::size_t i = 0; i < t.value(x).size(); ++i) dx[i] += g;
    };
    return tape.emit(std::move(out), rg, rg ? std::function<void(Tape<T>&, int)>(back) : nullptr);
}

template <class T>
Ref mul(Tape<T>& tape, Ref a, Ref b) {
    const Array<T>& av = tape.value(a);
    const Array<T>& bv = tape.value(b);
    if (av.shape != bv.shape) throw ShapeError("mul shape mismatch");
    Array<T> out(av.shape);
    for (std::size_t i = 0; i < av.size(); ++i) out.data[i] = av.data[i] * bv.data[i];
    bool rg = tape.requires_grad(a) || tape.requires_grad(b);
    auto back = [a, b](Tape<T>& t, int self) {
        const Array<T>& dy = t.node_grad(self);
        const Array<T>& av = t.value(a);
        const Array<T>& bv = t.value(b);
        if (t.requires_grad(a)) {
            T* da = t.mutable_grad(a.idx).ptr();
            for (std::size_t i = 0; i < dy.size(); ++i) da[i] += dy.data[i] * bv.data[i];
        }
        if (t.requires_grad(b)) {
            T* db = t.mutable_grad(b.idx).ptr();
            for (std::size_t i = 0; i < dy.size(); ++i) db[i] += dy.data[i] * av.data[i];
        }
    };
    return tape.emit(std::move(out), rg, rg ? std::function<void(Tape<T>&, int)>(back) : nullptr);
}

// Mean squared error; pred and target must have identical shapes.
template <class T>
Ref mse_loss(Tape<T>& tape, Ref pred, Ref target) {
    const Array<T>& pv = tape.value(pred);
    const Array<T>& tv = tape.value(target);
    if (pv.shape != tv.shape) throw ShapeError("mse_loss shape mismatch");
    const std::size_t n = pv.size();
    T acc = T(0);
    for (std::size_t i = 0; i < n; ++i) {
        T d = pv.data[i] - tv.data[i];
        acc += d * d;
    }
    Array<T> out(Shape{1});
    out.data[0] = acc / static_cast<T>(n);
    bool rg = tape.requires_grad(pred);
    auto back = [pred, target, n](Tape<T>& t, int self) {
        const T g = t.node_grad(self).data[0];
        const Array<T>& pv = t.value(pred);
        const Array<T>& tv = t.value(target);
        T* dp = t.mutable_grad(pred.idx).ptr();
        const T k = T(2) / static_cast<T>(n);
        for (std::size_t i = 0; i < n; ++i) dp[i] += g * k * (pv.data[i] - tv.data[i]);
    };
    return tape.emit(std::move(out), rg, rg ? std::function<void(Tape<T>&, int)>(back) : nullptr);
}

// Mean binary cross-entropy over sigmoid(logits), computed in the stable
// logit form: max(z,0) - z*y + log1p(exp(-|z|)).
template <class T>
Ref bce_with_logits_loss(Tape<T>& tape, Ref logits, Ref target) {
    const Array<T>& zv = tape.value(logits);
    const Array<T>& yv = tape.value(target);
    if (zv.shape != yv.shape) throw ShapeError("bce loss shape mismatch");
    const std::size_t n = zv.size();
    T acc = T(0);
    for (std::size_t i = 0; i < n; ++i) {
        T z = zv.data[i], y = yv.data[i];
        acc += std::max(z, T(0)) - z * y + std::log1p(std::exp(-std::abs(z)));
    }
    Array<T> out(Shape{1});
    out.data[0] = acc / static_cast<T>(n);
    bool rg = tape.requires_grad(logits);
    auto back = [logits, target, n](Tape<T>& t, int self) {
        const T g = t.node_grad(self).data[0];
        const Array<T>& zv = t.value(logits);
        const Array<T>& yv = t.value(target);
        T* dz = t.mutable_grad(logits.idx).ptr();
        const T inv_n = T(1) / static_cast<T>(n);
        for (std::size_t i = 0; i < n; ++i) {
            T s = T(1) / (T(1) + std::exp(-zv.data[i]));
            dz[i] += g * inv_n * (s - yv.data[i]);
        }
    };
    return tape.emit(std::move(out), rg, rg ? std::function<void(Tape<T>&, int)>(back) : nullptr);
}

} // namespace perconv::ad
