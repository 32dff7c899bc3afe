#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace outerface {

// Interleaved RGB image, float values on the 0-255 scale, row-major HWC.
struct Image {
    int height = 0;
    int width = 0;
    std::vector<float> data;  // height * width * 3

    Image() = default;
    Image(int h, int w, float fill = 0.0f)
        : height(h), width(w), data(static_cast<size_t>(h) * w * 3, fill) {}

    float& at(int y, int x, int c) { return data[(static_cast<size_t>(y) * width + x) * 3 + c]; }
    float at(int y, int x, int c) const {
        return data[(static_cast<size_t>(y) * width + x) * 3 + c];
    }
    size_t pixel_count() const { return static_cast<size_t>(height) * width; }
    bool same_dims(const Image& o) const { return height == o.height && width == o.width; }
    bool all_finite() const;
};

// A cropped face with a record of where it came from. Pixel contract is the
// same as Image: float 0-255, HWC.
struct FaceImage {
    Image pixels;
    std::string source;                   // originating file, may be empty
    std::vector<std::string> transforms;  // applied-transform record, in order

    FaceImage() = default;
    explicit FaceImage(Image img, std::string src = {})
        : pixels(std::move(img)), source(std::move(src)) {}

    FaceImage with_transform(Image img, const std::string& tag) const {
        FaceImage out;
        out.pixels = std::move(img);
        out.source = source;
        out.transforms = transforms;
        out.transforms.push_back(tag);
        return out;
    }
};

Image load_png(const std::filesystem::path& path);
void save_png(const Image& img, const std::filesystem::path& path);

// 8-bit grayscale PNG from raw bytes (used for mask previews, 255 = masked).
void save_gray_png(const std::vector<uint8_t>& gray, int height, int width,
                   const std::filesystem::path& path);

inline uint8_t to_u8(float v) {
    float r = v < 0.0f ? 0.0f : (v > 255.0f ? 255.0f : v);
    return static_cast<uint8_t>(r + 0.5f);
}

}  // namespace outerface
