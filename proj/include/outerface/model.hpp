#pragma once

#include <filesystem>
#include <vector>

#include "outerface/geometry.hpp"
#include "outerface/image.hpp"
#include "outerface/landmarks.hpp"
#include "outerface/loss.hpp"
#include "outerface/net.hpp"

namespace outerface {

// Unit-norm identity embedding.
using Embedding = std::vector<float>;

// A trained embedding model together with the preprocessing contract it was
// trained under. Verification must preprocess suspects and references with
// exactly these specs; preprocess_hash() is compared to enforce that.
struct EmbeddingModel {
    ModelConfig cfg;
    MaskSpec mask;
    CropSpec crop;
    LossConfig loss;
    ParamBlock<float> params;

    // Align + crop + mask a raw frame into the network input.
    FaceImage preprocess(const Image& raw, const LandmarkSet& lm) const;

    // Forward pass on an already-preprocessed crop; returns a unit-norm
    // embedding. Thread-safe on a frozen model (callers supply their own
    // workspace via the two-argument overload to avoid reallocation).
    Embedding embed(const FaceImage& input) const;
    Embedding embed(const FaceImage& input, NetWorkspace<float>& ws) const;

    // Full pipeline: preprocess then embed.
    Embedding embed_raw(const Image& raw, const LandmarkSet& lm) const;

    uint64_t preprocess_hash() const;
};

// Checkpoint: magic "OFK1", a versioned config block, then the parameter
// tensors as little-endian f32 in declaration order.
void save_model(const EmbeddingModel& model, const std::filesystem::path& path);
EmbeddingModel load_model(const std::filesystem::path& path);

}  // namespace outerface
