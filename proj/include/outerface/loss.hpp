#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "outerface/errors.hpp"

namespace outerface {

// Additive-angular-margin softmax configuration: every cosine logit is
// scaled by s, and the target-class angle gets +m before the cosine.
struct LossConfig {
    double scale = 64.0;
    double margin = 0.5;  // radians

    void validate() const {
        require(scale > 0.0, "InvalidConfig", "scale must be positive");
        require(margin >= 0.0 && margin < 1.5707963267948966, "InvalidConfig",
                "margin must be in [0, pi/2)");
    }
};

template <typename T>
struct ArcfaceResult {
    T loss = T(0);
    std::vector<T> logits;  // batch x n, row-major
};

namespace detail {
template <typename T>
inline T clamp_cos(T c) {
    const T lim = T(1) - T(1e-7);
    return c < -lim ? -lim : (c > lim ? lim : c);
}
}  // namespace detail

// Margin-softmax loss over a batch. features: batch x d row-major, each row
// unit-norm. weights: d x n with column j contiguous (weights[j*d + i]),
// each column unit-norm. labels: 0-based class ids. Returns the mean
// negative log-likelihood and the scaled logits.
template <typename T>
ArcfaceResult<T> arcface_loss(const std::vector<T>& features, const std::vector<int>& labels,
                              const std::vector<T>& weights, size_t d, size_t n,
                              const LossConfig& cfg) {
    cfg.validate();
    const size_t batch = labels.size();
    require(features.size() == batch * d, "DimMismatch", "feature buffer size mismatch");
    require(weights.size() == d * n, "DimMismatch", "weight buffer size mismatch");
    for (int y : labels)
        require(y >= 0 && static_cast<size_t>(y) < n, "LabelOutOfRange",
                "label " + std::to_string(y) + " outside [0, " + std::to_string(n) + ")");

    ArcfaceResult<T> out;
    out.logits.assign(batch * n, T(0));
    const T s = static_cast<T>(cfg.scale);
    const T m = static_cast<T>(cfg.margin);

    T total = T(0);
    for (size_t i = 0; i < batch; ++i) {
        const T* f = features.data() + i * d;
        T* logits = out.logits.data() + i * n;
        for (size_t j = 0; j < n; ++j) {
            const T* w = weights.data() + j * d;
            T dot = T(0);
            for (size_t k = 0; k < d; ++k) dot += f[k] * w[k];
            logits[j] = s * dot;
        }
        const size_t y = static_cast<size_t>(labels[i]);
        T cy = detail::clamp_cos(logits[y] / s);
        T theta = std::acos(cy);
        logits[y] = s * std::cos(theta + m);

        T mx = logits[0];
        for (size_t j = 1; j < n; ++j) mx = std::max(mx, logits[j]);
        T denom = T(0);
        for (size_t j = 0; j < n; ++j) denom += std::exp(logits[j] - mx);
        total += std::log(denom) - (logits[y] - mx);
    }
    out.loss = total / static_cast<T>(batch);
    return out;
}

template <typename T>
struct ArcfaceGrads {
    std::vector<T> features;  // batch x d
    std::vector<T> weights;   // d x n, column-major like the input
};

// Analytic gradient of arcface_loss with respect to the raw feature and
// weight vectors. Inputs are unit-norm; the returned gradients include the
// Jacobian of the unit normalization evaluated at that norm, i.e. they are
// tangent to the sphere: grad = (I - v v^T) grad_plain. A caller chaining
// through x / ||x|| for non-unit x divides by ||x|| afterwards.
template <typename T>
ArcfaceGrads<T> arcface_backward(const std::vector<T>& features, const std::vector<int>& labels,
                                 const std::vector<T>& weights, size_t d, size_t n,
                                 const LossConfig& cfg) {
    ArcfaceResult<T> fwd = arcface_loss(features, labels, weights, d, n, cfg);
    const size_t batch = labels.size();
    const T s = static_cast<T>(cfg.scale);
    const T m = static_cast<T>(cfg.margin);
    const T inv_batch = T(1) / static_cast<T>(batch);

    ArcfaceGrads<T> g;
    g.features.assign(batch * d, T(0));
    std::vector<T> gw_plain(d * n, T(0));

    std::vector<T> prob(n);
    for (size_t i = 0; i < batch; ++i) {
        const T* f = features.data() + i * d;
        const T* logits = fwd.logits.data() + i * n;
        const size_t y = static_cast<size_t>(labels[i]);

        T mx = logits[0];
        for (size_t j = 1; j < n; ++j) mx = std::max(mx, logits[j]);
        T denom = T(0);
        for (size_t j = 0; j < n; ++j) {
            prob[j] = std::exp(logits[j] - mx);
            denom += prob[j];
        }
        for (size_t j = 0; j < n; ++j) prob[j] /= denom;

        // d logit_y / d cos(theta_y) via theta = acos(cos); the clamp region
        // has zero derivative but is never reached by valid inputs.
        const T* wy = weights.data() + y * d;
        T cy = T(0);
        for (size_t k = 0; k < d; ++k) cy += f[k] * wy[k];
        cy = detail::clamp_cos(cy);
        T theta = std::acos(cy);
        T sin_theta = std::sqrt(T(1) - cy * cy);
        T kappa = std::sin(theta + m) / sin_theta;

        T* gf = g.features.data() + i * d;
        for (size_t j = 0; j < n; ++j) {
            T coeff = inv_batch * s * (prob[j] - (j == y ? T(1) : T(0)));
            if (j == y) coeff *= kappa;
            const T* w = weights.data() + j * d;
            T* gw = gw_plain.data() + j * d;
            for (size_t k = 0; k < d; ++k) {
                gf[k] += coeff * w[k];
                gw[k] += coeff * f[k];
            }
        }
    }

    // Project onto the tangent space of each unit vector.
    for (size_t i = 0; i < batch; ++i) {
        const T* f = features.data() + i * d;
        T* gf = g.features.data() + i * d;
        T dot = T(0);
        for (size_t k = 0; k < d; ++k) dot += gf[k] * f[k];
        for (size_t k = 0; k < d; ++k) gf[k] -= dot * f[k];
    }
    g.weights.assign(d * n, T(0));
    for (size_t j = 0; j < n; ++j) {
        const T* w = weights.data() + j * d;
        const T* gw = gw_plain.data() + j * d;
        T* out = g.weights.data() + j * d;
        T dot = T(0);
        for (size_t k = 0; k < d; ++k) dot += gw[k] * w[k];
        for (size_t k = 0; k < d; ++k) out[k] = gw[k] - dot * w[k];
    }
    return g;
}

}  // namespace outerface
