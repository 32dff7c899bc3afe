#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "outerface/image.hpp"
#include "outerface/landmarks.hpp"

namespace outerface {

// Crop parameterization: the aligned face is scaled so that the distance
// between the two eye centers is eye_dist_ratio * output_size, with the eye
// midpoint pinned at (0.5 * W, 0.45 * H) and a horizontal eye axis.
struct CropSpec {
    double eye_dist_ratio = 0.27;
    int output_size = 112;

    void validate() const;
    uint64_t hash() const;
};

// Direct similarity transform p' = [a -b; b a] * p + (tx, ty).
struct Similarity {
    double a = 1.0, b = 0.0, tx = 0.0, ty = 0.0;

    Vec2 apply(const Vec2& p) const {
        return {a * p.x - b * p.y + tx, b * p.x + a * p.y + ty};
    }
    Similarity inverse() const;
    double scale() const;
};

// Solves the eye-alignment similarity for the given landmarks and crop spec.
// Throws DegenerateLandmarks when the eye centers coincide.
Similarity eye_alignment(const LandmarkSet& lm, const CropSpec& spec);

LandmarkSet transform_landmarks(const LandmarkSet& lm, const Similarity& t);

// Aligns, scales and crops the raw image; returns the crop plus the
// landmarks mapped into crop coordinates. Up to 5% of the landmarks may lie
// outside the raw image (they are clipped to the bounds first); more than
// that raises OutOfBounds. Bilinear sampling, out-of-source taps read 0.
std::pair<FaceImage, LandmarkSet> align_and_crop(const Image& raw, const LandmarkSet& lm,
                                                 const CropSpec& spec);

enum class MaskType { NoMask, EyeMask, HullMask, UniteMask, InnerMask };

const char* mask_type_name(MaskType t);
MaskType mask_type_from_name(const std::string& name);

// Declarative mask recipe. The landmark subset is implied by the type
// (1-based, inclusive): EyeMask hulls 37-48, HullMask hulls 18-68,
// InnerMask disks 18-68, UniteMask disks 1-68.
struct MaskSpec {
    MaskType type = MaskType::InnerMask;
    int radius_k = 13;  // used by the point-wise types only

    void validate(int output_size) const;
    bool is_pointwise() const { return type == MaskType::InnerMask || type == MaskType::UniteMask; }
    bool is_hull() const { return type == MaskType::EyeMask || type == MaskType::HullMask; }
    // 0-based [first, last] subset for this mask type; {1, 0} for NoMask.
    std::pair<int, int> subset_range() const;
    uint64_t hash() const;
};

struct BinaryMask {
    int height = 0;
    int width = 0;
    std::vector<uint8_t> grid;  // 1 = masked (eliminated)

    BinaryMask() = default;
    BinaryMask(int h, int w) : height(h), width(w), grid(static_cast<size_t>(h) * w, 0) {}

    bool at(int y, int x) const { return grid[static_cast<size_t>(y) * width + x] != 0; }
    void set(int y, int x, bool v) { grid[static_cast<size_t>(y) * width + x] = v ? 1 : 0; }
    size_t masked_count() const;
};

// Rasterizes the mask over an H x W grid; landmarks must already be in crop
// coordinates. Pixel (r, c) has its center at (x=c, y=r). Point-wise types
// mask centers within Euclidean distance radius_k of any subset landmark;
// hull types mask centers inside or on the convex hull of the subset.
BinaryMask build_mask(const MaskSpec& spec, const LandmarkSet& lm, int height, int width);

// Sets masked pixels to 0 across all channels; unmasked pixels are copied
// bit-for-bit. Throws DimMismatch when shapes differ.
FaceImage apply_mask(const FaceImage& image, const BinaryMask& mask);

// Convex hull (Andrew monotone chain) of a point set; returned CCW in image
// coordinates (y down). Collinear input degenerates to a segment.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts);

// True when p lies inside or on the hull polygon (ties masked).
bool point_in_hull(const std::vector<Vec2>& hull, const Vec2& p);

}  // namespace outerface
