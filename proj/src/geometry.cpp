#include "outerface/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "outerface/errors.hpp"
#include "outerface/rng.hpp"

namespace outerface {

void CropSpec::validate() const {
    require(eye_dist_ratio > 0.0 && eye_dist_ratio < 0.5, "InvalidConfig",
            "eye_dist_ratio must be in (0, 0.5)");
    require(output_size >= 16, "InvalidConfig", "output_size must be >= 16");
}

uint64_t CropSpec::hash() const {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "crop:%.12g:%d", eye_dist_ratio, output_size);
    return fnv1a(buf);
}

Similarity Similarity::inverse() const {
    double det = a * a + b * b;
    Similarity inv;
    inv.a = a / det;
    inv.b = -b / det;
    inv.tx = -(inv.a * tx - inv.b * ty);
    inv.ty = -(inv.b * tx + inv.a * ty);
    return inv;
}

double Similarity::scale() const { return std::sqrt(a * a + b * b); }

Similarity eye_alignment(const LandmarkSet& lm, const CropSpec& spec) {
    spec.validate();
    Vec2 left = lm.left_eye_center();
    Vec2 right = lm.right_eye_center();
    Vec2 d = right - left;
    double dist = norm(d);
    if (dist < 1e-9) raise("DegenerateLandmarks", "eye centers coincide");

    double target = spec.eye_dist_ratio * spec.output_size;
    double s = target / dist;
    double cphi = d.x / dist;
    double sphi = d.y / dist;

    Similarity t;
    t.a = s * cphi;
    t.b = -s * sphi;
    Vec2 mid = (left + right) * 0.5;
    Vec2 canon{0.5 * spec.output_size, 0.45 * spec.output_size};
    t.tx = canon.x - (t.a * mid.x - t.b * mid.y);
    t.ty = canon.y - (t.b * mid.x + t.a * mid.y);
    return t;
}

LandmarkSet transform_landmarks(const LandmarkSet& lm, const Similarity& t) {
    LandmarkSet out;
    for (size_t i = 0; i < LandmarkSet::kCount; ++i) out.points[i] = t.apply(lm.points[i]);
    return out;
}

namespace {

inline float bilinear_sample(const Image& img, double x, double y, int c) {
    int x0 = static_cast<int>(std::floor(x));
    int y0 = static_cast<int>(std::floor(y));
    double fx = x - x0;
    double fy = y - y0;
    auto tap = [&](int yy, int xx) -> double {
        if (yy < 0 || yy >= img.height || xx < 0 || xx >= img.width) return 0.0;
        return img.at(yy, xx, c);
    };
    double v0 = tap(y0, x0) * (1.0 - fx) + tap(y0, x0 + 1) * fx;
    double v1 = tap(y0 + 1, x0) * (1.0 - fx) + tap(y0 + 1, x0 + 1) * fx;
    return static_cast<float>(v0 * (1.0 - fy) + v1 * fy);
}

}  // namespace

std::pair<FaceImage, LandmarkSet> align_and_crop(const Image& raw, const LandmarkSet& lm,
                                                 const CropSpec& spec) {
    spec.validate();
    lm.validate();

    LandmarkSet clipped = lm;
    int outside = 0;
    for (Vec2& p : clipped.points) {
        bool out = p.x < 0.0 || p.x > raw.width - 1.0 || p.y < 0.0 || p.y > raw.height - 1.0;
        if (out) {
            ++outside;
            p.x = std::clamp(p.x, 0.0, static_cast<double>(raw.width - 1));
            p.y = std::clamp(p.y, 0.0, static_cast<double>(raw.height - 1));
        }
    }
    if (outside > static_cast<int>(LandmarkSet::kCount * 0.05))
        raise("OutOfBounds", std::to_string(outside) + " of 68 landmarks outside the raw image");

    Similarity fwd = eye_alignment(clipped, spec);
    Similarity inv = fwd.inverse();

    int n = spec.output_size;
    Image crop(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            Vec2 src = inv.apply({static_cast<double>(c), static_cast<double>(r)});
            for (int ch = 0; ch < 3; ++ch) crop.at(r, c, ch) = bilinear_sample(raw, src.x, src.y, ch);
        }
    }

    char tag[96];
    std::snprintf(tag, sizeof(tag), "align_crop(ratio=%.4g,size=%d)", spec.eye_dist_ratio, n);
    FaceImage out(std::move(crop));
    out.transforms.push_back(tag);
    return {std::move(out), transform_landmarks(clipped, fwd)};
}

const char* mask_type_name(MaskType t) {
    switch (t) {
        case MaskType::NoMask: return "none";
        case MaskType::EyeMask: return "eye";
        case MaskType::HullMask: return "hull";
        case MaskType::UniteMask: return "unite";
        case MaskType::InnerMask: return "inner";
    }
    return "?";
}

MaskType mask_type_from_name(const std::string& name) {
    if (name == "none") return MaskType::NoMask;
    if (name == "eye") return MaskType::EyeMask;
    if (name == "hull") return MaskType::HullMask;
    if (name == "unite") return MaskType::UniteMask;
    if (name == "inner") return MaskType::InnerMask;
    raise("InvalidConfig", "unknown mask type '" + name + "'");
}

void MaskSpec::validate(int output_size) const {
    require(radius_k >= 1 && radius_k <= output_size / 2, "InvalidConfig",
            "radius_k must be in [1, output_size/2]");
}

std::pair<int, int> MaskSpec::subset_range() const {
    switch (type) {
        case MaskType::NoMask: return {1, 0};
        case MaskType::EyeMask: return {36, 47};   // 37-48, 1-based
        case MaskType::HullMask: return {17, 67};  // 18-68
        case MaskType::InnerMask: return {17, 67};
        case MaskType::UniteMask: return {0, 67};  // all 68
    }
    return {1, 0};
}

uint64_t MaskSpec::hash() const {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "mask:%s:%d", mask_type_name(type),
                  is_pointwise() ? radius_k : 0);
    return fnv1a(buf);
}

size_t BinaryMask::masked_count() const {
    size_t n = 0;
    for (uint8_t v : grid) n += v;
    return n;
}

namespace {
inline double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}
}  // namespace

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    size_t n = pts.size();
    if (n <= 2) return pts;
    std::vector<Vec2> hull(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {  // lower
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

bool point_in_hull(const std::vector<Vec2>& hull, const Vec2& p) {
    if (hull.empty()) return false;
    if (hull.size() == 1) return p.x == hull[0].x && p.y == hull[0].y;
    if (hull.size() == 2) {
        // Degenerate hull: on-segment test.
        if (cross(hull[0], hull[1], p) != 0.0) return false;
        return p.x >= std::min(hull[0].x, hull[1].x) && p.x <= std::max(hull[0].x, hull[1].x) &&
               p.y >= std::min(hull[0].y, hull[1].y) && p.y <= std::max(hull[0].y, hull[1].y);
    }
    for (size_t i = 0; i < hull.size(); ++i) {
        const Vec2& a = hull[i];
        const Vec2& b = hull[(i + 1) % hull.size()];
        if (cross(a, b, p) < 0.0) return false;  // boundary (== 0) counts as inside
    }
    return true;
}

BinaryMask build_mask(const MaskSpec& spec, const LandmarkSet& lm, int height, int width) {
    BinaryMask mask(height, width);
    if (spec.type == MaskType::NoMask) return mask;

    auto [first, last] = spec.subset_range();
    std::vector<Vec2> subset;
    subset.reserve(static_cast<size_t>(last - first + 1));
    for (int i = first; i <= last; ++i) subset.push_back(lm.points[static_cast<size_t>(i)]);

    if (spec.is_pointwise()) {
        double k = spec.radius_k;
        double k2 = k * k;
        for (const Vec2& p : subset) {
            int r0 = std::max(0, static_cast<int>(std::ceil(p.y - k)));
            int r1 = std::min(height - 1, static_cast<int>(std::floor(p.y + k)));
            int c0 = std::max(0, static_cast<int>(std::ceil(p.x - k)));
            int c1 = std::min(width - 1, static_cast<int>(std::floor(p.x + k)));
            for (int r = r0; r <= r1; ++r) {
                double dy = r - p.y;
                for (int c = c0; c <= c1; ++c) {
                    double dx = c - p.x;
                    if (dx * dx + dy * dy <= k2) mask.set(r, c, true);
                }
            }
        }
        return mask;
    }

    // Hull types.
    {
        std::vector<Vec2> distinct = subset;
        std::sort(distinct.begin(), distinct.end(), [](const Vec2& a, const Vec2& b) {
            return a.x < b.x || (a.x == b.x && a.y < b.y);
        });
        distinct.erase(
            std::unique(distinct.begin(), distinct.end(),
                        [](const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }),
            distinct.end());
        if (distinct.size() < 3)
            raise("EmptySubset", "hull mask needs at least 3 distinct landmarks");
    }
    std::vector<Vec2> hull = convex_hull(subset);
    double min_x = hull[0].x, max_x = hull[0].x, min_y = hull[0].y, max_y = hull[0].y;
    for (const Vec2& p : hull) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    int r0 = std::max(0, static_cast<int>(std::ceil(min_y)));
    int r1 = std::min(height - 1, static_cast<int>(std::floor(max_y)));
    int c0 = std::max(0, static_cast<int>(std::ceil(min_x)));
    int c1 = std::min(width - 1, static_cast<int>(std::floor(max_x)));
    for (int r = r0; r <= r1; ++r)
        for (int c = c0; c <= c1; ++c)
            if (point_in_hull(hull, {static_cast<double>(c), static_cast<double>(r)}))
                mask.set(r, c, true);
    return mask;
}

FaceImage apply_mask(const FaceImage& image, const BinaryMask& mask) {
    require(image.pixels.height == mask.height && image.pixels.width == mask.width, "DimMismatch",
            "mask dimensions do not match the image");
    Image out = image.pixels;
    for (int r = 0; r < mask.height; ++r)
        for (int c = 0; c < mask.width; ++c)
            if (mask.at(r, c))
                for (int ch = 0; ch < 3; ++ch) out.at(r, c, ch) = 0.0f;
    return image.with_transform(std::move(out), "apply_mask");
}

}  // namespace outerface
