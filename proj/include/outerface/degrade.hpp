#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "outerface/image.hpp"

namespace outerface {

// Image degradation recipe. The paper-style presets are Jpeg(20),
// Downsample(4) and GaussianNoise(5.0); ExternalFrames substitutes frames
// produced by an outside tool (e.g. heavy video transcoding) and is
// resolved by the caller that owns the file layout.
struct DegradationSpec {
    enum class Kind { None, Jpeg, Downsample, GaussianNoise, ExternalFrames };

    Kind kind = Kind::None;
    int quality = 20;      // Jpeg, 1..100
    int factor = 4;        // Downsample, >= 2
    double sigma = 5.0;    // GaussianNoise, > 0, on the 0-255 scale
    uint64_t seed = 0;     // GaussianNoise
    std::string tag;       // ExternalFrames directory tag

    static DegradationSpec none() { return {}; }
    static DegradationSpec jpeg(int quality);
    static DegradationSpec downsample(int factor);
    static DegradationSpec gaussian_noise(double sigma, uint64_t seed);
    static DegradationSpec external(std::string tag);

    // "none" | "jpeg:Q" | "resize:F" | "noise:SIGMA" | "external:TAG".
    // Noise gets its seed from the surrounding run configuration.
    static DegradationSpec parse(const std::string& text, uint64_t seed);

    std::string describe() const;
    void validate() const;
};

// Paper presets.
inline DegradationSpec preset_jpeg() { return DegradationSpec::jpeg(20); }
inline DegradationSpec preset_downsample() { return DegradationSpec::downsample(4); }
inline DegradationSpec preset_noise(uint64_t seed) {
    return DegradationSpec::gaussian_noise(5.0, seed);
}

// Applies a degradation; output dims always equal input dims. Values are
// clamped to [0, 255]. ExternalFrames cannot be applied here (the image
// substitution happens where files are resolved) and raises InvalidConfig.
FaceImage degrade(const FaceImage& image, const DegradationSpec& spec);

// JPEG round-trip through a baseline sequential codec at the given quality.
Image jpeg_roundtrip(const Image& img, int quality);

}  // namespace outerface
