#include "outerface/landmarks.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "outerface/errors.hpp"

namespace outerface {

double norm(const Vec2& v) { return std::sqrt(v.x * v.x + v.y * v.y); }

namespace {
Vec2 mean_of_range(const LandmarkSet& lm, int first1, int last1) {
    Vec2 acc;
    int n = last1 - first1 + 1;
    for (int i = first1 - 1; i < last1; ++i) acc = acc + lm.points[static_cast<size_t>(i)];
    return acc * (1.0 / n);
}
}  // namespace

Vec2 LandmarkSet::left_eye_center() const {
    return mean_of_range(*this, kLeftEyeFirst, kLeftEyeLast);
}

Vec2 LandmarkSet::right_eye_center() const {
    return mean_of_range(*this, kRightEyeFirst, kRightEyeLast);
}

void LandmarkSet::validate() const {
    for (const Vec2& p : points)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            raise("DegenerateLandmarks", "non-finite landmark coordinate");
    Vec2 d = right_eye_center() - left_eye_center();
    if (norm(d) < 1e-9) raise("DegenerateLandmarks", "eye centers coincide");
}

double landmark_distance(const LandmarkSet& a, const LandmarkSet& b) {
    double acc = 0.0;
    for (size_t i = 0; i < LandmarkSet::kCount; ++i) {
        double dx = a.points[i].x - b.points[i].x;
        double dy = a.points[i].y - b.points[i].y;
        acc += dx * dx + dy * dy;
    }
    return std::sqrt(acc);
}

LandmarkSet read_landmarks(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise("IoFailure", "cannot open " + path.string());
    LandmarkSet lm;
    std::string line;
    size_t count = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (count >= LandmarkSet::kCount)
            raise("IoFailure", "more than 68 landmark lines in " + path.string());
        double x = 0.0, y = 0.0;
        if (std::sscanf(line.c_str(), "%lf,%lf", &x, &y) != 2)
            raise("IoFailure", "malformed landmark line '" + line + "' in " + path.string());
        lm.points[count] = {x, y};
        ++count;
    }
    if (count != LandmarkSet::kCount)
        raise("IoFailure", "expected 68 landmark lines, got " + std::to_string(count) + " in " +
                               path.string());
    return lm;
}

void write_landmarks(const LandmarkSet& lm, const std::filesystem::path& path) {
    std::filesystem::path parent = path.parent_path();
    if (!parent.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(parent, ec);
    }
    std::ofstream out(path);
    if (!out) raise("IoFailure", "cannot write " + path.string());
    char buf[80];
    for (const Vec2& p : lm.points) {
        std::snprintf(buf, sizeof(buf), "%.6f,%.6f\n", p.x, p.y);
        out << buf;
    }
}

}  // namespace outerface
