#pragma once

#include <array>
#include <cstddef>
#include <filesystem>

namespace outerface {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
};

double norm(const Vec2& v);

// The 68 face landmarks in iBUG order, pixel coordinates of the image they
// were detected on. Indices are 0-based internally; user-facing configs and
// file formats use the conventional 1-based numbering, converted exactly
// once at the parsing boundary.
struct LandmarkSet {
    std::array<Vec2, 68> points;

    static constexpr size_t kCount = 68;

    // 1-based inclusive landmark ranges for the standard groups.
    static constexpr int kLeftEyeFirst = 37, kLeftEyeLast = 42;
    static constexpr int kRightEyeFirst = 43, kRightEyeLast = 48;
    static constexpr int kInnerFirst = 18, kInnerLast = 68;

    Vec2 left_eye_center() const;   // mean of points 37-42 (1-based)
    Vec2 right_eye_center() const;  // mean of points 43-48 (1-based)

    // Throws DomainError on non-finite coordinates or coincident eye centers.
    void validate() const;
};

// Euclidean norm of the 136-dimensional concatenated coordinate difference.
double landmark_distance(const LandmarkSet& a, const LandmarkSet& b);

// Landmark sidecar files: 68 lines of "x,y" decimal floats, iBUG order.
LandmarkSet read_landmarks(const std::filesystem::path& path);
void write_landmarks(const LandmarkSet& lm, const std::filesystem::path& path);

}  // namespace outerface
