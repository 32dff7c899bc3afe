#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "outerface/errors.hpp"
#include "outerface/rng.hpp"

namespace outerface {

// Backbone topology: a stack of 3x3 stride-2 ReLU convolutions, global
// average pooling, and a linear projection to the embedding space. The
// embedding is L2-normalized by the caller (see normalize_feature).
struct ModelConfig {
    int input_size = 112;
    int embed_dim = 64;
    std::vector<int> conv_widths = {8, 16, 32, 64};
    int n_classes = 2;

    void validate() const {
        require(embed_dim >= 2, "InvalidConfig", "embed_dim must be >= 2");
        require(n_classes >= 2, "InvalidConfig", "n_classes must be >= 2");
        require(!conv_widths.empty(), "InvalidConfig", "conv_widths must be non-empty");
        int div = 1 << conv_widths.size();
        require(input_size % div == 0, "InvalidConfig",
                "input_size must be divisible by 2^#conv layers");
        for (int w : conv_widths)
            require(w >= 1, "InvalidConfig", "conv widths must be positive");
    }
};

struct TensorDesc {
    std::string name;
    std::vector<size_t> shape;
    size_t offset = 0;
    size_t size = 0;
};

// All trainable parameters in one flat buffer, in declaration order:
// conv1.w, conv1.b, ..., fc.w, fc.b, proj.w. Conv weights are stored as
// [ky][kx][ci][co] so the co loop is contiguous; fc as [ci][j]; proj as
// [class][d] (each class row is one projection column W_j).
template <typename T>
struct ParamBlock {
    std::vector<TensorDesc> descs;
    std::vector<T> data;

    static ParamBlock layout(const ModelConfig& cfg) {
        cfg.validate();
        ParamBlock p;
        size_t off = 0;
        auto add = [&](const std::string& name, std::vector<size_t> shape) {
            size_t sz = 1;
            for (size_t s : shape) sz *= s;
            p.descs.push_back({name, std::move(shape), off, sz});
            off += sz;
        };
        int ci = 3;
        for (size_t l = 0; l < cfg.conv_widths.size(); ++l) {
            int co = cfg.conv_widths[l];
            add("conv" + std::to_string(l + 1) + ".w",
                {3, 3, static_cast<size_t>(ci), static_cast<size_t>(co)});
            add("conv" + std::to_string(l + 1) + ".b", {static_cast<size_t>(co)});
            ci = co;
        }
        add("fc.w", {static_cast<size_t>(ci), static_cast<size_t>(cfg.embed_dim)});
        add("fc.b", {static_cast<size_t>(cfg.embed_dim)});
        add("proj.w", {static_cast<size_t>(cfg.n_classes), static_cast<size_t>(cfg.embed_dim)});
        p.data.assign(off, T(0));
        return p;
    }

    size_t size() const { return data.size(); }
    T* tensor(size_t idx) { return data.data() + descs[idx].offset; }
    const T* tensor(size_t idx) const { return data.data() + descs[idx].offset; }
    T* proj() { return data.data() + descs.back().offset; }
    const T* proj() const { return data.data() + descs.back().offset; }
    size_t proj_size() const { return descs.back().size; }

    // Kaiming-uniform fan-in for conv/linear weights, zero biases, unit
    // Gaussian projection rows normalized to length 1.
    void init(const ModelConfig& cfg, uint64_t seed) {
        Rng rng = Rng::derive(seed, {rngtag::kInit});
        size_t idx = 0;
        int ci = 3;
        for (size_t l = 0; l < cfg.conv_widths.size(); ++l) {
            double bound = std::sqrt(6.0 / (9.0 * ci));
            T* w = tensor(idx);
            for (size_t i = 0; i < descs[idx].size; ++i)
                w[i] = static_cast<T>(rng.uniform(-bound, bound));
            ++idx;  // bias stays zero
            ++idx;
            ci = cfg.conv_widths[l];
        }
        double bound = std::sqrt(6.0 / ci);
        T* fcw = tensor(idx);
        for (size_t i = 0; i < descs[idx].size; ++i)
            fcw[i] = static_cast<T>(rng.uniform(-bound, bound));
        idx += 2;  // fc.b stays zero
        T* pw = tensor(idx);
        int d = cfg.embed_dim;
        for (int j = 0; j < cfg.n_classes; ++j) {
            T* row = pw + static_cast<size_t>(j) * d;
            double nrm = 0.0;
            for (int k = 0; k < d; ++k) {
                row[k] = static_cast<T>(rng.normal());
                nrm += static_cast<double>(row[k]) * row[k];
            }
            nrm = std::sqrt(nrm);
            for (int k = 0; k < d; ++k) row[k] = static_cast<T>(row[k] / nrm);
        }
    }
};

// Per-sample activation buffers, reusable across forward/backward calls.
template <typename T>
struct NetWorkspace {
    std::vector<std::vector<T>> acts;   // acts[0] = normalized input, acts[l] = post-ReLU
    std::vector<std::vector<T>> dacts;  // gradient buffers, same shapes
    std::vector<T> pooled, dpooled;
    std::vector<T> feature;  // pre-normalization embedding

    void prepare(const ModelConfig& cfg) {
        size_t layers = cfg.conv_widths.size();
        acts.resize(layers + 1);
        dacts.resize(layers + 1);
        int sz = cfg.input_size, ch = 3;
        for (size_t l = 0; l <= layers; ++l) {
            acts[l].assign(static_cast<size_t>(sz) * sz * ch, T(0));
            dacts[l].assign(acts[l].size(), T(0));
            if (l < layers) {
                sz = (sz + 1) / 2;
                ch = cfg.conv_widths[l];
            }
        }
        pooled.assign(ch, T(0));
        dpooled.assign(ch, T(0));
        feature.assign(cfg.embed_dim, T(0));
    }
};

namespace netdetail {

// One 3x3 stride-2 pad-1 convolution + bias + optional ReLU.
// in: IH x IW x CI, out: OH x OW x CO with OH = (IH + 1) / 2.
template <typename T>
void conv_forward(const T* in, int ih, int iw, int ci, const T* w, const T* b, T* out, int co,
                  bool relu) {
    int oh = (ih + 1) / 2, ow = (iw + 1) / 2;
    std::vector<T> acc(static_cast<size_t>(co));
    for (int oy = 0; oy < oh; ++oy) {
        int iy0 = 2 * oy - 1;
        for (int ox = 0; ox < ow; ++ox) {
            int ix0 = 2 * ox - 1;
            for (int k = 0; k < co; ++k) acc[k] = b[k];
            for (int ky = 0; ky < 3; ++ky) {
                int iy = iy0 + ky;
                if (iy < 0 || iy >= ih) continue;
                for (int kx = 0; kx < 3; ++kx) {
                    int ix = ix0 + kx;
                    if (ix < 0 || ix >= iw) continue;
                    const T* px = in + (static_cast<size_t>(iy) * iw + ix) * ci;
                    const T* wb = w + (static_cast<size_t>(ky) * 3 + kx) * ci * co;
                    for (int c = 0; c < ci; ++c) {
                        T v = px[c];
                        const T* wr = wb + static_cast<size_t>(c) * co;
                        for (int k = 0; k < co; ++k) acc[k] += v * wr[k];
                    }
                }
            }
            T* dst = out + (static_cast<size_t>(oy) * ow + ox) * co;
            if (relu)
                for (int k = 0; k < co; ++k) dst[k] = acc[k] > T(0) ? acc[k] : T(0);
            else
                for (int k = 0; k < co; ++k) dst[k] = acc[k];
        }
    }
}

// Backward for the layer above. dout must already be masked by the ReLU
// derivative (done by the caller using the stored post-activation). Writes
// grad contributions into gw/gb and, when din != nullptr, accumulates the
// input gradient (din must be zeroed by the caller).
template <typename T>
void conv_backward(const T* in, int ih, int iw, int ci, const T* w, const T* dout, int co, T* gw,
                   T* gb, T* din) {
    int oh = (ih + 1) / 2, ow = (iw + 1) / 2;
    for (int oy = 0; oy < oh; ++oy) {
        int iy0 = 2 * oy - 1;
        for (int ox = 0; ox < ow; ++ox) {
            int ix0 = 2 * ox - 1;
            const T* g = dout + (static_cast<size_t>(oy) * ow + ox) * co;
            for (int k = 0; k < co; ++k) gb[k] += g[k];
            for (int ky = 0; ky < 3; ++ky) {
                int iy = iy0 + ky;
                if (iy < 0 || iy >= ih) continue;
                for (int kx = 0; kx < 3; ++kx) {
                    int ix = ix0 + kx;
                    if (ix < 0 || ix >= iw) continue;
                    size_t poff = (static_cast<size_t>(iy) * iw + ix) * ci;
                    const T* px = in + poff;
                    size_t woff = (static_cast<size_t>(ky) * 3 + kx) * ci * co;
                    T* gwb = gw + woff;
                    for (int c = 0; c < ci; ++c) {
                        T v = px[c];
                        T* gwr = gwb + static_cast<size_t>(c) * co;
                        for (int k = 0; k < co; ++k) gwr[k] += v * g[k];
                    }
                    if (din) {
                        const T* wb = w + woff;
                        T* dp = din + poff;
                        for (int c = 0; c < ci; ++c) {
                            const T* wr = wb + static_cast<size_t>(c) * co;
                            T sum = T(0);
                            for (int k = 0; k < co; ++k) sum += wr[k] * g[k];
                            dp[c] += sum;
                        }
                    }
                }
            }
        }
    }
}

}  // namespace netdetail

// Forward pass from a 0-255 HWC float image to the pre-normalization
// feature vector (stored in ws.feature). Activations are retained for a
// subsequent backward call.
template <typename T, typename Pixel>
void backbone_forward(const ModelConfig& cfg, const ParamBlock<T>& params, const Pixel* image,
                      NetWorkspace<T>& ws) {
    const size_t layers = cfg.conv_widths.size();
    size_t in_count = static_cast<size_t>(cfg.input_size) * cfg.input_size * 3;
    for (size_t i = 0; i < in_count; ++i)
        ws.acts[0][i] = static_cast<T>(image[i]) * T(1.0 / 127.5) - T(1);

    int sz = cfg.input_size, ci = 3;
    for (size_t l = 0; l < layers; ++l) {
        int co = cfg.conv_widths[l];
        netdetail::conv_forward(ws.acts[l].data(), sz, sz, ci, params.tensor(2 * l),
                                params.tensor(2 * l + 1), ws.acts[l + 1].data(), co, true);
        sz = (sz + 1) / 2;
        ci = co;
    }

    // Global average pooling.
    const T* last = ws.acts[layers].data();
    size_t cells = static_cast<size_t>(sz) * sz;
    for (int c = 0; c < ci; ++c) ws.pooled[c] = T(0);
    for (size_t i = 0; i < cells; ++i) {
        const T* px = last + i * ci;
        for (int c = 0; c < ci; ++c) ws.pooled[c] += px[c];
    }
    T inv = T(1) / static_cast<T>(cells);
    for (int c = 0; c < ci; ++c) ws.pooled[c] *= inv;

    const size_t fc_idx = 2 * layers;
    const T* fcw = params.tensor(fc_idx);
    const T* fcb = params.tensor(fc_idx + 1);
    int d = cfg.embed_dim;
    for (int j = 0; j < d; ++j) ws.feature[j] = fcb[j];
    for (int c = 0; c < ci; ++c) {
        T v = ws.pooled[c];
        const T* wr = fcw + static_cast<size_t>(c) * d;
        for (int j = 0; j < d; ++j) ws.feature[j] += v * wr[j];
    }
}

// Backward from d(loss)/d(pre-normalization feature); accumulates into
// grads (same layout as params). The input-image gradient is not produced.
template <typename T>
void backbone_backward(const ModelConfig& cfg, const ParamBlock<T>& params, NetWorkspace<T>& ws,
                       const T* dfeature, ParamBlock<T>& grads) {
    const size_t layers = cfg.conv_widths.size();
    int final_sz = cfg.input_size >> layers;
    size_t cells = static_cast<size_t>(final_sz) * final_sz;
    int ci = cfg.conv_widths.back();
    int d = cfg.embed_dim;

    const size_t fc_idx = 2 * layers;
    const T* fcw = params.tensor(fc_idx);
    T* gfcw = grads.tensor(fc_idx);
    T* gfcb = grads.tensor(fc_idx + 1);
    for (int j = 0; j < d; ++j) gfcb[j] += dfeature[j];
    for (int c = 0; c < ci; ++c) {
        T v = ws.pooled[c];
        T* gwr = gfcw + static_cast<size_t>(c) * d;
        const T* wr = fcw + static_cast<size_t>(c) * d;
        T sum = T(0);
        for (int j = 0; j < d; ++j) {
            gwr[j] += v * dfeature[j];
            sum += wr[j] * dfeature[j];
        }
        ws.dpooled[c] = sum;
    }

    // Spread the pooling gradient, masked by ReLU.
    T inv = T(1) / static_cast<T>(cells);
    std::vector<T>& dlast = ws.dacts[layers];
    const std::vector<T>& alast = ws.acts[layers];
    for (size_t i = 0; i < cells; ++i) {
        T* dp = dlast.data() + i * ci;
        const T* ap = alast.data() + i * ci;
        for (int c = 0; c < ci; ++c) dp[c] = ap[c] > T(0) ? ws.dpooled[c] * inv : T(0);
    }

    int sz = final_sz;
    for (size_t l = layers; l-- > 0;) {
        int in_sz = sz * 2;  // all spatial dims here are powers-of-two multiples
        int in_ch = l == 0 ? 3 : cfg.conv_widths[l - 1];
        int co = cfg.conv_widths[l];
        T* din = nullptr;
        if (l > 0) {
            std::fill(ws.dacts[l].begin(), ws.dacts[l].end(), T(0));
            din = ws.dacts[l].data();
        }
        netdetail::conv_backward(ws.acts[l].data(), in_sz, in_sz, in_ch, params.tensor(2 * l),
                                 ws.dacts[l + 1].data(), co, grads.tensor(2 * l),
                                 grads.tensor(2 * l + 1), din);
        if (l > 0) {
            // ReLU mask for the next (lower) layer's output gradient.
            std::vector<T>& dact = ws.dacts[l];
            const std::vector<T>& act = ws.acts[l];
            for (size_t i = 0; i < dact.size(); ++i)
                if (act[i] <= T(0)) dact[i] = T(0);
        }
        sz = in_sz;
    }
}

// L2 normalization with the degenerate-feature guard. Returns the norm.
template <typename T>
double normalize_feature(const T* f, size_t d, T* out) {
    double nrm = 0.0;
    for (size_t i = 0; i < d; ++i) {
        if (!std::isfinite(static_cast<double>(f[i])))
            raise("NonFiniteActivation", "non-finite value in embedding feature");
        nrm += static_cast<double>(f[i]) * static_cast<double>(f[i]);
    }
    nrm = std::sqrt(nrm);
    if (nrm < 1e-12)
        raise("NormalizationDegenerate", "feature norm below 1e-12, cannot normalize");
    for (size_t i = 0; i < d; ++i) out[i] = static_cast<T>(f[i] / nrm);
    return nrm;
}

}  // namespace outerface
