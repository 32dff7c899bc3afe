#include "outerface/model.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

#include "outerface/errors.hpp"

namespace outerface {

FaceImage EmbeddingModel::preprocess(const Image& raw, const LandmarkSet& lm) const {
    auto [crop_img, crop_lm] = align_and_crop(raw, lm, crop);
    BinaryMask m = build_mask(mask, crop_lm, crop.output_size, crop.output_size);
    return apply_mask(crop_img, m);
}

Embedding EmbeddingModel::embed(const FaceImage& input, NetWorkspace<float>& ws) const {
    require(input.pixels.height == cfg.input_size && input.pixels.width == cfg.input_size,
            "DimMismatch", "network input must match ModelConfig::input_size");
    backbone_forward(cfg, params, input.pixels.data.data(), ws);
    Embedding out(static_cast<size_t>(cfg.embed_dim));
    normalize_feature(ws.feature.data(), ws.feature.size(), out.data());
    return out;
}

Embedding EmbeddingModel::embed(const FaceImage& input) const {
    NetWorkspace<float> ws;
    ws.prepare(cfg);
    return embed(input, ws);
}

Embedding EmbeddingModel::embed_raw(const Image& raw, const LandmarkSet& lm) const {
    return embed(preprocess(raw, lm));
}

uint64_t EmbeddingModel::preprocess_hash() const {
    return mix_seed(mask.hash(), crop.hash());
}

namespace {

constexpr char kMagic[4] = {'O', 'F', 'K', '1'};
constexpr uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}

}  // namespace

void save_model(const EmbeddingModel& model, const std::filesystem::path& path) {
    std::filesystem::path parent = path.parent_path();
    if (!parent.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(parent, ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) raise("IoFailure", "cannot write " + path.string());
    out.write(kMagic, 4);
    put<uint32_t>(out, kVersion);
    put<uint32_t>(out, static_cast<uint32_t>(model.cfg.input_size));
    put<uint32_t>(out, static_cast<uint32_t>(model.cfg.embed_dim));
    put<uint32_t>(out, static_cast<uint32_t>(model.cfg.n_classes));
    put<uint32_t>(out, static_cast<uint32_t>(model.cfg.conv_widths.size()));
    for (int w : model.cfg.conv_widths) put<uint32_t>(out, static_cast<uint32_t>(w));
    put<uint32_t>(out, static_cast<uint32_t>(model.mask.type));
    put<uint32_t>(out, static_cast<uint32_t>(model.mask.radius_k));
    put<double>(out, model.crop.eye_dist_ratio);
    put<uint32_t>(out, static_cast<uint32_t>(model.crop.output_size));
    put<double>(out, model.loss.scale);
    put<double>(out, model.loss.margin);
    put<uint64_t>(out, static_cast<uint64_t>(model.params.size()));
    out.write(reinterpret_cast<const char*>(model.params.data.data()),
              static_cast<std::streamsize>(model.params.size() * sizeof(float)));
    if (!out) raise("IoFailure", "short write to " + path.string());
}

EmbeddingModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise("IoFailure", "cannot open " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        raise("IoFailure", path.string() + " is not a model checkpoint (bad magic)");
    uint32_t version = get<uint32_t>(in);
    if (version != kVersion)
        raise("IoFailure", "unsupported checkpoint version " + std::to_string(version));

    EmbeddingModel model;
    model.cfg.input_size = static_cast<int>(get<uint32_t>(in));
    model.cfg.embed_dim = static_cast<int>(get<uint32_t>(in));
    model.cfg.n_classes = static_cast<int>(get<uint32_t>(in));
    uint32_t n_conv = get<uint32_t>(in);
    require(n_conv >= 1 && n_conv <= 16, "IoFailure", "implausible conv layer count");
    model.cfg.conv_widths.clear();
    for (uint32_t i = 0; i < n_conv; ++i)
        model.cfg.conv_widths.push_back(static_cast<int>(get<uint32_t>(in)));
    model.mask.type = static_cast<MaskType>(get<uint32_t>(in));
    model.mask.radius_k = static_cast<int>(get<uint32_t>(in));
    model.crop.eye_dist_ratio = get<double>(in);
    model.crop.output_size = static_cast<int>(get<uint32_t>(in));
    model.loss.scale = get<double>(in);
    model.loss.margin = get<double>(in);
    uint64_t count = get<uint64_t>(in);
    if (!in) raise("IoFailure", "truncated checkpoint header in " + path.string());

    model.params = ParamBlock<float>::layout(model.cfg);
    require(count == model.params.size(), "IoFailure",
            "checkpoint parameter count does not match its config");
    in.read(reinterpret_cast<char*>(model.params.data.data()),
            static_cast<std::streamsize>(count * sizeof(float)));
    if (!in) raise("IoFailure", "truncated checkpoint data in " + path.string());
    return model;
}

}  // namespace outerface
