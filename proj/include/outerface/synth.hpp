#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "outerface/corpus.hpp"
#include "outerface/image.hpp"
#include "outerface/landmarks.hpp"

namespace outerface {

// Procedural face corpus: renders ellipse-head faces whose outer appearance
// (head outline, skin tone, hair-band stripes, forehead/jaw texture) is a
// deterministic function of an identity's outer-code and whose inner face
// (eyes, nose, mouth, brows, inner skin) is a function of its inner-code.
// Fakes composite source A's outer face with claimed identity B's inner
// face; at fake_fidelity = 1.0 the composite is pixel-exact with no seam.
struct SynthFaceConfig {
    int n_identities = 200;
    int images_per_identity = 20;
    int identity_dim = 32;      // first half inner-code, second half outer-code
    double pose_jitter = 1.0;   // 0..1 scale on rotation/shift/yaw/expression
    double fake_fidelity = 1.0;
    uint64_t rng_seed = 1;
    int fakes_per_identity = -1;  // -1 -> round(0.3 * images_per_identity)
    int render_size = 160;

    void validate() const;
    int resolved_fakes_per_identity() const;
};

// Renders the corpus under out_dir (images/, landmarks/, manifest.jsonl)
// and returns the manifest. Real videos hash-split 70/10/20 train/val/test;
// fake videos hash-split val/test. Train frames are reference candidates,
// val/test frames are suspects.
Manifest generate_synthetic_corpus(const SynthFaceConfig& cfg,
                                   const std::filesystem::path& out_dir);

namespace synthdetail {

struct IdentityCodes {
    std::vector<double> inner;
    std::vector<double> outer;
};

struct Pose {
    double rot = 0.0;         // radians
    double shift_x = 0.0;     // pixels
    double shift_y = 0.0;
    double scale = 1.0;
    double yaw = 0.0;         // -0.3..0.3 at full jitter
    double mouth_open = 0.1;  // 0..0.9
    double brow_raise = 0.0;  // -1..1
};

IdentityCodes identity_codes(const SynthFaceConfig& cfg, int identity);
Pose draw_pose(const SynthFaceConfig& cfg, uint64_t stream_a, uint64_t stream_b);

// Renders a face with outer appearance from `outer_src` and inner face from
// `inner_src` (equal for genuine frames). seam_seed feeds the boundary
// noise used when fidelity < 1.
Image render_face(const SynthFaceConfig& cfg, const IdentityCodes& outer_src,
                  const IdentityCodes& inner_src, const Pose& pose, double fidelity,
                  uint64_t seam_seed);

// Analytic landmarks for the same composite: jaw from the outer identity's
// head outline, all inner landmarks from the inner identity.
LandmarkSet face_landmarks(const SynthFaceConfig& cfg, const IdentityCodes& outer_src,
                           const IdentityCodes& inner_src, const Pose& pose);

// True when frame pixel center (px, py) falls in the pose's inner region
// (the region is identity-independent by construction).
bool in_inner_region(const SynthFaceConfig& cfg, const Pose& pose, double px, double py);

}  // namespace synthdetail

}  // namespace outerface
