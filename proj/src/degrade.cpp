#include "outerface/degrade.hpp"

#include <jpeglib.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <vector>

#include "outerface/errors.hpp"
#include "outerface/rng.hpp"

namespace outerface {

DegradationSpec DegradationSpec::jpeg(int quality) {
    DegradationSpec s;
    s.kind = Kind::Jpeg;
    s.quality = quality;
    s.validate();
    return s;
}

DegradationSpec DegradationSpec::downsample(int factor) {
    DegradationSpec s;
    s.kind = Kind::Downsample;
    s.factor = factor;
    s.validate();
    return s;
}

DegradationSpec DegradationSpec::gaussian_noise(double sigma, uint64_t seed) {
    DegradationSpec s;
    s.kind = Kind::GaussianNoise;
    s.sigma = sigma;
    s.seed = seed;
    s.validate();
    return s;
}

DegradationSpec DegradationSpec::external(std::string tag) {
    DegradationSpec s;
    s.kind = Kind::ExternalFrames;
    s.tag = std::move(tag);
    return s;
}

DegradationSpec DegradationSpec::parse(const std::string& text, uint64_t seed) {
    if (text.empty() || text == "none") return none();
    auto colon = text.find(':');
    std::string head = text.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (head == "jpeg") return jpeg(arg.empty() ? 20 : std::stoi(arg));
    if (head == "resize") return downsample(arg.empty() ? 4 : std::stoi(arg));
    if (head == "noise") return gaussian_noise(arg.empty() ? 5.0 : std::stod(arg), seed);
    if (head == "external") {
        require(!arg.empty(), "InvalidConfig", "external degradation needs a directory tag");
        return external(arg);
    }
    raise("InvalidConfig", "unknown degradation '" + text + "'");
}

std::string DegradationSpec::describe() const {
    char buf[96];
    switch (kind) {
        case Kind::None: return "none";
        case Kind::Jpeg:
            std::snprintf(buf, sizeof(buf), "jpeg:%d", quality);
            return buf;
        case Kind::Downsample:
            std::snprintf(buf, sizeof(buf), "resize:%d", factor);
            return buf;
        case Kind::GaussianNoise:
            std::snprintf(buf, sizeof(buf), "noise:%g", sigma);
            return buf;
        case Kind::ExternalFrames: return "external:" + tag;
    }
    return "?";
}

void DegradationSpec::validate() const {
    switch (kind) {
        case Kind::Jpeg:
            require(quality >= 1 && quality <= 100, "InvalidConfig",
                    "jpeg quality must be in [1, 100]");
            break;
        case Kind::Downsample:
            require(factor >= 2, "InvalidConfig", "downsample factor must be >= 2");
            break;
        case Kind::GaussianNoise:
            require(sigma > 0.0, "InvalidConfig", "noise sigma must be positive");
            break;
        default: break;
    }
}

namespace {

struct JpegErrorMgr {
    jpeg_error_mgr pub;
    jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* mgr = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    longjmp(mgr->jump, 1);
}

}  // namespace

Image jpeg_roundtrip(const Image& img, int quality) {
    std::vector<uint8_t> rgb(img.pixel_count() * 3);
    for (size_t i = 0; i < img.data.size(); ++i) rgb[i] = to_u8(img.data[i]);

    // Encode.
    unsigned char* buf = nullptr;
    unsigned long buf_size = 0;
    {
        jpeg_compress_struct cinfo;
        JpegErrorMgr err;
        cinfo.err = jpeg_std_error(&err.pub);
        err.pub.error_exit = jpeg_error_exit;
        if (setjmp(err.jump)) {
            jpeg_destroy_compress(&cinfo);
            if (buf) free(buf);
            raise("CodecFailure", "jpeg encode failed");
        }
        jpeg_create_compress(&cinfo);
        jpeg_mem_dest(&cinfo, &buf, &buf_size);
        cinfo.image_width = static_cast<JDIMENSION>(img.width);
        cinfo.image_height = static_cast<JDIMENSION>(img.height);
        cinfo.input_components = 3;
        cinfo.in_color_space = JCS_RGB;
        jpeg_set_defaults(&cinfo);
        jpeg_set_quality(&cinfo, quality, TRUE /* baseline-compatible tables */);
        jpeg_start_compress(&cinfo, TRUE);
        while (cinfo.next_scanline < cinfo.image_height) {
            JSAMPROW row = rgb.data() + static_cast<size_t>(cinfo.next_scanline) * img.width * 3;
            jpeg_write_scanlines(&cinfo, &row, 1);
        }
        jpeg_finish_compress(&cinfo);
        jpeg_destroy_compress(&cinfo);
    }

    // Decode.
    Image out(img.height, img.width);
    {
        jpeg_decompress_struct dinfo;
        JpegErrorMgr err;
        dinfo.err = jpeg_std_error(&err.pub);
        err.pub.error_exit = jpeg_error_exit;
        if (setjmp(err.jump)) {
            jpeg_destroy_decompress(&dinfo);
            free(buf);
            raise("CodecFailure", "jpeg decode failed");
        }
        jpeg_create_decompress(&dinfo);
        jpeg_mem_src(&dinfo, buf, buf_size);
        jpeg_read_header(&dinfo, TRUE);
        dinfo.out_color_space = JCS_RGB;
        jpeg_start_decompress(&dinfo);
        if (static_cast<int>(dinfo.output_width) != img.width ||
            static_cast<int>(dinfo.output_height) != img.height) {
            jpeg_destroy_decompress(&dinfo);
            free(buf);
            raise("CodecFailure", "jpeg round-trip changed dimensions");
        }
        std::vector<uint8_t> row(static_cast<size_t>(img.width) * 3);
        while (dinfo.output_scanline < dinfo.output_height) {
            int y = static_cast<int>(dinfo.output_scanline);
            JSAMPROW rp = row.data();
            jpeg_read_scanlines(&dinfo, &rp, 1);
            for (int x = 0; x < img.width; ++x)
                for (int c = 0; c < 3; ++c)
                    out.at(y, x, c) = static_cast<float>(row[static_cast<size_t>(x) * 3 + c]);
        }
        jpeg_finish_decompress(&dinfo);
        jpeg_destroy_decompress(&dinfo);
    }
    free(buf);
    return out;
}

namespace {

// Reflect-pad (edge mirror without repeating the border pixel) to make both
// dims multiples of f, area-average down, bilinear back up, center crop.
Image downsample_up(const Image& img, int f) {
    int ph = (img.height + f - 1) / f * f;
    int pw = (img.width + f - 1) / f * f;
    int off_y = (ph - img.height) / 2;
    int off_x = (pw - img.width) / 2;

    auto reflect = [](int i, int n) {
        if (n == 1) return 0;
        int period = 2 * n - 2;
        i = ((i % period) + period) % period;
        return i < n ? i : period - i;
    };

    Image padded(ph, pw);
    for (int y = 0; y < ph; ++y) {
        int sy = reflect(y - off_y, img.height);
        for (int x = 0; x < pw; ++x) {
            int sx = reflect(x - off_x, img.width);
            for (int c = 0; c < 3; ++c) padded.at(y, x, c) = img.at(sy, sx, c);
        }
    }

    int dh = ph / f, dw = pw / f;
    Image small(dh, dw);
    float inv = 1.0f / (static_cast<float>(f) * f);
    for (int y = 0; y < dh; ++y)
        for (int x = 0; x < dw; ++x)
            for (int c = 0; c < 3; ++c) {
                float acc = 0.0f;
                for (int yy = 0; yy < f; ++yy)
                    for (int xx = 0; xx < f; ++xx) acc += padded.at(y * f + yy, x * f + xx, c);
                small.at(y, x, c) = acc * inv;
            }

    // Bilinear upsample back to the padded size, then center-crop.
    Image up(ph, pw);
    double sy_scale = static_cast<double>(dh) / ph;
    double sx_scale = static_cast<double>(dw) / pw;
    for (int y = 0; y < ph; ++y) {
        double fy = (y + 0.5) * sy_scale - 0.5;
        int y0 = static_cast<int>(std::floor(fy));
        double wy = fy - y0;
        int ya = std::clamp(y0, 0, dh - 1);
        int yb = std::clamp(y0 + 1, 0, dh - 1);
        for (int x = 0; x < pw; ++x) {
            double fx = (x + 0.5) * sx_scale - 0.5;
            int x0 = static_cast<int>(std::floor(fx));
            double wx = fx - x0;
            int xa = std::clamp(x0, 0, dw - 1);
            int xb = std::clamp(x0 + 1, 0, dw - 1);
            for (int c = 0; c < 3; ++c) {
                double top = small.at(ya, xa, c) * (1.0 - wx) + small.at(ya, xb, c) * wx;
                double bot = small.at(yb, xa, c) * (1.0 - wx) + small.at(yb, xb, c) * wx;
                up.at(y, x, c) = static_cast<float>(top * (1.0 - wy) + bot * wy);
            }
        }
    }

    Image out(img.height, img.width);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < 3; ++c) out.at(y, x, c) = up.at(y + off_y, x + off_x, c);
    return out;
}

}  // namespace

FaceImage degrade(const FaceImage& image, const DegradationSpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case DegradationSpec::Kind::None: return image;
        case DegradationSpec::Kind::Jpeg:
            return image.with_transform(jpeg_roundtrip(image.pixels, spec.quality),
                                        spec.describe());
        case DegradationSpec::Kind::Downsample:
            return image.with_transform(downsample_up(image.pixels, spec.factor),
                                        spec.describe());
        case DegradationSpec::Kind::GaussianNoise: {
            Rng rng = Rng::derive(spec.seed, {rngtag::kNoise});
            Image out = image.pixels;
            for (float& v : out.data) {
                double noisy = v + spec.sigma * rng.normal();
                v = static_cast<float>(std::clamp(noisy, 0.0, 255.0));
            }
            return image.with_transform(std::move(out), spec.describe());
        }
        case DegradationSpec::Kind::ExternalFrames:
            raise("InvalidConfig",
                  "external-frame degradation substitutes files; it cannot run on pixels");
    }
    raise("InvalidConfig", "unreachable degradation kind");
}

}  // namespace outerface
