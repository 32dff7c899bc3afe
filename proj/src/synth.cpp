#include "outerface/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "outerface/errors.hpp"
#include "outerface/rng.hpp"

namespace outerface {

void SynthFaceConfig::validate() const {
    require(n_identities >= 2, "InvalidConfig", "need at least 2 identities");
    require(images_per_identity >= 1, "InvalidConfig", "images_per_identity must be positive");
    require(identity_dim >= 4 && identity_dim % 2 == 0, "InvalidConfig",
            "identity_dim must be an even number >= 4");
    require(pose_jitter >= 0.0 && pose_jitter <= 1.0, "InvalidConfig",
            "pose_jitter must be in [0, 1]");
    require(fake_fidelity >= 0.0 && fake_fidelity <= 1.0, "InvalidConfig",
            "fake_fidelity must be in [0, 1]");
    require(render_size >= 128, "InvalidConfig", "render_size must be >= 128");
}

int SynthFaceConfig::resolved_fakes_per_identity() const {
    if (fakes_per_identity >= 0) return fakes_per_identity;
    return std::max(1, static_cast<int>(std::lround(0.3 * images_per_identity)));
}

namespace synthdetail {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Face-local layout, in units of the inter-eye distance, +y down, origin at
// the eye midpoint. The inner region is identity-independent so that fake
// composites are pixel-exact.
constexpr double kInnerCx = 0.0, kInnerCy = 0.28;
constexpr double kInnerAx = 0.85, kInnerAy = 0.75;
constexpr double kHeadCy = 0.22;

// code helper: dims are in [-1, 1]
inline double code(const std::vector<double>& c, size_t i) { return c[i % c.size()]; }

struct OuterParams {
    double head_ax, head_ay;
    double skin[3];
    double fore_f1, fore_f2, fore_phase, fore_amp;
    double hair1[3], hair2[3];
    double hair_cycles, hair_phase;
    double jaw_f1, jaw_f2, jaw_phase, jaw_amp;
};

struct InnerParams {
    double skin[3];
    double eye_w, eye_h, iris_r;
    double iris[3];
    double brow_half_w, brow_half_h, brow_dark;
    double nose_w, nose_dark;
    double mouth_w, lip[3];
    double cheek_f1, cheek_f2;
};

OuterParams outer_params(const std::vector<double>& oc) {
    OuterParams p;
    p.head_ax = 1.28 + 0.06 * code(oc, 0);
    p.head_ay = 1.62 + 0.08 * code(oc, 1);
    p.skin[0] = 168 + 34 * code(oc, 2);
    p.skin[1] = 132 + 30 * code(oc, 3);
    p.skin[2] = 108 + 26 * code(oc, 4);
    p.fore_f1 = 0.55 + 0.25 * code(oc, 5);
    p.fore_f2 = 0.40 + 0.20 * code(oc, 6);
    p.fore_phase = kPi * code(oc, 7);
    p.fore_amp = 9.0 + 3.0 * code(oc, 8);
    p.hair1[0] = 64 + 34 * code(oc, 9);
    p.hair1[1] = 52 + 26 * code(oc, 10);
    p.hair1[2] = 44 + 22 * code(oc, 11);
    for (int c = 0; c < 3; ++c) p.hair2[c] = p.hair1[c] * 0.5;
    p.hair_cycles = 5.5 + 1.5 * code(oc, 12);
    p.hair_phase = kPi * code(oc, 13);
    p.jaw_f1 = 0.50 + 0.20 * code(oc, 14);
    p.jaw_f2 = 0.35 + 0.15 * code(oc, 15);
    p.jaw_phase = kPi * (code(oc, 14) - code(oc, 5));
    p.jaw_amp = 7.0 + 3.0 * code(oc, 15);
    return p;
}

InnerParams inner_params(const std::vector<double>& ic) {
    InnerParams p;
    p.skin[0] = 150 + 40 * code(ic, 0);
    p.skin[1] = 120 + 34 * code(ic, 1);
    p.skin[2] = 100 + 30 * code(ic, 2);
    p.eye_w = 0.145 * (1.0 + 0.12 * code(ic, 3));
    p.eye_h = 0.065 * (1.0 + 0.18 * code(ic, 4));
    p.iris_r = 0.055 * (1.0 + 0.10 * code(ic, 5));
    p.iris[0] = 60 + 45 * code(ic, 5);
    p.iris[1] = 70 + 45 * code(ic, 6);
    p.iris[2] = 80 + 55 * code(ic, 7);
    p.brow_half_w = 0.175;
    p.brow_half_h = 0.032 + 0.010 * code(ic, 8);
    p.brow_dark = 62 + 26 * code(ic, 8);
    p.nose_w = 1.0 + 0.20 * code(ic, 10);
    p.nose_dark = 24 * (1.0 + 0.30 * code(ic, 11));
    p.mouth_w = 0.30 * (1.0 + 0.13 * code(ic, 12));
    p.lip[0] = 165 + 40 * code(ic, 13);
    p.lip[1] = 72 + 18 * code(ic, 13);
    p.lip[2] = 80 + 18 * code(ic, 13);
    p.cheek_f1 = 0.60 + 0.20 * code(ic, 14);
    p.cheek_f2 = 0.50 + 0.20 * code(ic, 15);
    return p;
}

struct Frame2Face {
    double cx, cy;        // face center in frame pixels
    double cos_r, sin_r;  // rotation
    double inv_scale;     // 1 / (scale * E)
    double fwd_scale;     // scale * E
    double q_inner, s_inner, q_outer;
};

Frame2Face make_mapping(const SynthFaceConfig& cfg, const Pose& pose) {
    Frame2Face m;
    double eye_px = cfg.render_size * 0.2;  // inter-eye distance in pixels
    m.cx = cfg.render_size * 0.5 + pose.shift_x;
    m.cy = cfg.render_size * 0.475 + pose.shift_y;
    m.cos_r = std::cos(pose.rot);
    m.sin_r = std::sin(pose.rot);
    m.fwd_scale = pose.scale * eye_px;
    m.inv_scale = 1.0 / m.fwd_scale;
    m.q_inner = 1.0 - 0.22 * std::abs(pose.yaw);
    m.s_inner = 0.16 * pose.yaw;
    m.q_outer = 1.0 - 0.10 * std::abs(pose.yaw);
    return m;
}

// frame pixel -> face-local warped coordinates
inline Vec2 to_face(const Frame2Face& m, double px, double py) {
    double dx = px - m.cx, dy = py - m.cy;
    return {(m.cos_r * dx + m.sin_r * dy) * m.inv_scale,
            (-m.sin_r * dx + m.cos_r * dy) * m.inv_scale};
}

// face-local warped -> frame pixel
inline Vec2 to_frame(const Frame2Face& m, const Vec2& u) {
    double x = u.x * m.fwd_scale, y = u.y * m.fwd_scale;
    return {m.cos_r * x - m.sin_r * y + m.cx, m.sin_r * x + m.cos_r * y + m.cy};
}

inline Vec2 inner_space(const Frame2Face& m, const Vec2& u) {
    return {(u.x - m.s_inner) / m.q_inner, u.y};
}
inline Vec2 outer_space(const Frame2Face& m, const Vec2& u) {
    return {u.x / m.q_outer, u.y};
}
inline Vec2 warp_inner(const Frame2Face& m, const Vec2& v) {
    return {v.x * m.q_inner + m.s_inner, v.y};
}
inline Vec2 warp_outer(const Frame2Face& m, const Vec2& v) { return {v.x * m.q_outer, v.y}; }

inline double ellipse_norm(const Vec2& v, double cx, double cy, double ax, double ay) {
    double dx = (v.x - cx) / ax, dy = (v.y - cy) / ay;
    return std::sqrt(dx * dx + dy * dy);
}

// Smooth 1 -> 0 step for soft feature edges: full inside e <= 1, fades to 0
// across the given width.
inline double soft(double e, double width) {
    if (e <= 1.0) return 1.0;
    if (e >= 1.0 + width) return 0.0;
    double t = (e - 1.0) / width;
    return 1.0 - t * t * (3.0 - 2.0 * t);
}

void inner_color(const InnerParams& p, const Pose& pose, const Vec2& v, double rgb[3]) {
    for (int c = 0; c < 3; ++c) rgb[c] = p.skin[c];
    double tex = 10.0 * std::sin(2 * kPi * (p.cheek_f1 * v.x + p.cheek_f2 * v.y));
    for (int c = 0; c < 3; ++c) rgb[c] += tex;

    // Brows.
    double brow_y = -0.20 - 0.04 * pose.brow_raise;
    for (int side = -1; side <= 1; side += 2) {
        double e = ellipse_norm(v, side * 0.425, brow_y, p.brow_half_w, p.brow_half_h);
        double a = soft(e, 0.5);
        if (a > 0)
            for (int c = 0; c < 3; ++c)
                rgb[c] = rgb[c] * (1 - a) + a * (p.brow_dark * (c == 0 ? 1.0 : 0.85));
    }

    // Eyes: sclera, outline ring, iris, pupil.
    for (int side = -1; side <= 1; side += 2) {
        double exc = side * 0.5;
        double e = ellipse_norm(v, exc, 0.0, p.eye_w, p.eye_h);
        if (e < 1.35) {
            double a = soft(e, 0.12);
            double sclera[3] = {236, 233, 229};
            if (a > 0)
                for (int c = 0; c < 3; ++c) rgb[c] = rgb[c] * (1 - a) + a * sclera[c];
            if (e >= 0.82 && e <= 1.18) {  // lid outline
                double ring = 1.0 - std::abs(e - 1.0) / 0.18;
                for (int c = 0; c < 3; ++c) rgb[c] = rgb[c] * (1 - 0.6 * ring) + 0.6 * ring * 45.0;
            }
            double dx = v.x - exc, dy = v.y;
            double r = std::sqrt(dx * dx + dy * dy);
            if (r < p.iris_r) {
                double swirl = 1.0 + 0.22 * std::sin(9.0 * r / p.iris_r + 4.0 * std::atan2(dy, dx));
                for (int c = 0; c < 3; ++c) rgb[c] = p.iris[c] * swirl;
                if (r < 0.45 * p.iris_r) {
                    rgb[0] = 16;
                    rgb[1] = 13;
                    rgb[2] = 13;
                }
            }
        }
    }

    // Nose: bridge shading plus nostrils.
    double half_bridge = 0.035 * p.nose_w;
    if (v.y > 0.02 && v.y < 0.42 && std::abs(v.x) < half_bridge * 2.2) {
        double a = std::max(0.0, 1.0 - std::abs(v.x) / (half_bridge * 2.2));
        for (int c = 0; c < 3; ++c) rgb[c] -= p.nose_dark * a;
    }
    for (int side = -1; side <= 1; side += 2) {
        double e = ellipse_norm(v, side * 0.085 * p.nose_w, 0.455, 0.030, 0.024);
        double a = soft(e, 0.6);
        if (a > 0)
            for (int c = 0; c < 3; ++c) rgb[c] = rgb[c] * (1 - a) + a * 52.0;
    }

    // Mouth: lips with vertical grain and a dark gap when open.
    double mh = 0.075 + 0.05 * pose.mouth_open;
    double e = ellipse_norm(v, 0.0, 0.68, p.mouth_w, mh);
    double a = soft(e, 0.25);
    if (a > 0) {
        double grain = 1.0 + 0.12 * std::sin(2 * kPi * 7.0 * v.x / p.mouth_w);
        for (int c = 0; c < 3; ++c) rgb[c] = rgb[c] * (1 - a) + a * p.lip[c] * grain;
        double gap_h = 0.012 + 0.055 * pose.mouth_open;
        double eg = ellipse_norm(v, 0.0, 0.68, p.mouth_w * 0.72, gap_h);
        if (eg < 1.0) {
            rgb[0] = 34;
            rgb[1] = 20;
            rgb[2] = 20;
        }
    }
}

void outer_color(const OuterParams& p, const Vec2& v, double rgb[3]) {
    double eh = ellipse_norm(v, 0.0, kHeadCy, p.head_ax, p.head_ay);
    if (eh >= 1.0) {  // flat background
        rgb[0] = 28;
        rgb[1] = 30;
        rgb[2] = 34;
        return;
    }
    for (int c = 0; c < 3; ++c) rgb[c] = p.skin[c];

    // Forehead band texture (subtle).
    if (v.y > -1.05 && v.y < -0.42) {
        double t = p.fore_amp * std::sin(2 * kPi * (p.fore_f1 * v.x + p.fore_f2 * v.y) +
                                         p.fore_phase);
        for (int c = 0; c < 3; ++c) rgb[c] += t;
    }

    // Cheek/jaw texture below the inner region.
    if (v.y > 0.35) {
        double t = p.jaw_amp *
                   std::sin(2 * kPi * (p.jaw_f1 * v.x + p.jaw_f2 * v.y) + p.jaw_phase);
        for (int c = 0; c < 3; ++c) rgb[c] += t;
    }

    // Hair band: striped ring along the upper head boundary.
    if (eh > 0.78 && v.y < -0.25) {
        double ang = std::atan2(v.y - kHeadCy, v.x);
        double s = 0.5 + 0.5 * std::sin(p.hair_cycles * ang + p.hair_phase);
        double edge = std::min(1.0, (eh - 0.78) / 0.06);
        for (int c = 0; c < 3; ++c) {
            double hair = p.hair2[c] * (1 - s) + p.hair1[c] * s;
            rgb[c] = rgb[c] * (1 - edge) + hair * edge;
        }
    }

    // Rim shading along the lower outline.
    if (eh > 0.86 && v.y >= -0.25) {
        double a = 0.35 * (eh - 0.86) / 0.14;
        for (int c = 0; c < 3; ++c) rgb[c] *= 1.0 - a;
    }
}

}  // namespace

IdentityCodes identity_codes(const SynthFaceConfig& cfg, int identity) {
    Rng rng = Rng::derive(cfg.rng_seed, {rngtag::kIdentityCode, static_cast<uint64_t>(identity)});
    IdentityCodes codes;
    int half = cfg.identity_dim / 2;
    codes.inner.resize(half);
    codes.outer.resize(half);
    for (int i = 0; i < half; ++i) codes.inner[i] = rng.uniform(-1.0, 1.0);
    for (int i = 0; i < half; ++i) codes.outer[i] = rng.uniform(-1.0, 1.0);
    return codes;
}

Pose draw_pose(const SynthFaceConfig& cfg, uint64_t stream_a, uint64_t stream_b) {
    Rng rng = Rng::derive(cfg.rng_seed, {rngtag::kPose, stream_a, stream_b});
    double pj = cfg.pose_jitter;
    Pose p;
    p.rot = (15.0 * kPi / 180.0) * pj * rng.uniform(-1.0, 1.0);
    p.shift_x = 5.0 * pj * rng.uniform(-1.0, 1.0);
    p.shift_y = 5.0 * pj * rng.uniform(-1.0, 1.0);
    p.scale = 1.0 + 0.05 * pj * rng.uniform(-1.0, 1.0);
    p.yaw = 0.3 * pj * rng.uniform(-1.0, 1.0);
    p.mouth_open = 0.1 + 0.8 * pj * rng.uniform01();
    p.brow_raise = pj * rng.uniform(-1.0, 1.0);
    return p;
}

bool in_inner_region(const SynthFaceConfig& cfg, const Pose& pose, double px, double py) {
    Frame2Face m = make_mapping(cfg, pose);
    Vec2 v = inner_space(m, to_face(m, px, py));
    return ellipse_norm(v, kInnerCx, kInnerCy, kInnerAx, kInnerAy) < 1.0;
}

Image render_face(const SynthFaceConfig& cfg, const IdentityCodes& outer_src,
                  const IdentityCodes& inner_src, const Pose& pose, double fidelity,
                  uint64_t seam_seed) {
    Frame2Face m = make_mapping(cfg, pose);
    OuterParams op = outer_params(outer_src.outer);
    InnerParams ip = inner_params(inner_src.inner);

    int n = cfg.render_size;
    Image img(n, n);
    Rng seam_rng = Rng::derive(seam_seed, {rngtag::kSeam});
    double seam_amp = 70.0 * (1.0 - fidelity);

    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            Vec2 u = to_face(m, x, y);
            Vec2 vi = inner_space(m, u);
            double rgb[3];
            double en = ellipse_norm(vi, kInnerCx, kInnerCy, kInnerAx, kInnerAy);
            if (en < 1.0)
                inner_color(ip, pose, vi, rgb);
            else
                outer_color(op, outer_space(m, u), rgb);
            if (seam_amp > 0.0 && std::abs(en - 1.0) < 0.08)
                for (int c = 0; c < 3; ++c) rgb[c] += seam_amp * seam_rng.uniform(-1.0, 1.0);
            for (int c = 0; c < 3; ++c)
                img.at(y, x, c) = static_cast<float>(std::clamp(rgb[c], 0.0, 255.0));
        }
    }
    return img;
}

LandmarkSet face_landmarks(const SynthFaceConfig& cfg, const IdentityCodes& outer_src,
                           const IdentityCodes& inner_src, const Pose& pose) {
    Frame2Face m = make_mapping(cfg, pose);
    OuterParams op = outer_params(outer_src.outer);
    InnerParams ip = inner_params(inner_src.inner);

    LandmarkSet lm;
    size_t idx = 0;
    auto put_outer = [&](const Vec2& v) { lm.points[idx++] = to_frame(m, warp_outer(m, v)); };
    auto put_inner = [&](const Vec2& v) { lm.points[idx++] = to_frame(m, warp_inner(m, v)); };

    // 1-17: jaw along the head ellipse, left temple -> chin -> right temple.
    for (int i = 0; i < 17; ++i) {
        double phi = 0.88 * kPi - i * (0.76 * kPi / 16.0);
        put_outer({op.head_ax * std::cos(phi), kHeadCy + op.head_ay * std::sin(phi)});
    }

    // 18-27: brows, outer->inner on the left, inner->outer on the right.
    double brow_y = -0.20 - 0.04 * pose.brow_raise;
    for (int i = 0; i < 5; ++i) {
        double t = i / 4.0;
        put_inner({-(0.60 - 0.35 * t), brow_y - 0.05 * std::sin(kPi * t)});
    }
    for (int i = 0; i < 5; ++i) {
        double t = i / 4.0;
        put_inner({0.25 + 0.35 * t, brow_y - 0.05 * std::sin(kPi * (1.0 - t))});
    }

    // 28-36: nose bridge and nostril row.
    for (double yy : {0.02, 0.145, 0.27, 0.40}) put_inner({0.0, yy});
    const double nx[5] = {-0.085, -0.045, 0.0, 0.045, 0.085};
    const double ny[5] = {0.455, 0.468, 0.475, 0.468, 0.455};
    for (int i = 0; i < 5; ++i) put_inner({nx[i] * ip.nose_w, ny[i]});

    // 37-48: eye hexagons; the mean of each hexagon is the eye center.
    auto eye_hex = [&](double exc) {
        double w = ip.eye_w, h = ip.eye_h;
        Vec2 pts[6] = {{exc - w, 0.0},     {exc - w / 2, -h}, {exc + w / 2, -h},
                       {exc + w, 0.0},     {exc + w / 2, h},  {exc - w / 2, h}};
        for (int i = 0; i < 6; ++i) put_inner(pts[i]);
    };
    eye_hex(-0.5);
    eye_hex(0.5);

    // 49-60: outer lip, left corner over the top to the right corner and back.
    double mh = 0.075 + 0.05 * pose.mouth_open;
    for (int j = 0; j < 12; ++j) {
        double psi = kPi - j * (2 * kPi / 12.0);
        put_inner({ip.mouth_w * std::cos(psi), 0.68 - mh * std::sin(psi)});
    }
    // 61-68: inner lip ellipse; the gap opens with the expression.
    double gap_h = 0.012 + 0.055 * pose.mouth_open;
    for (int j = 0; j < 8; ++j) {
        double psi = kPi - j * (2 * kPi / 8.0);
        put_inner({ip.mouth_w * 0.72 * std::cos(psi), 0.68 - gap_h * std::sin(psi)});
    }
    return lm;
}

}  // namespace synthdetail

namespace {

Split split_for_real_video(const std::string& video_id) {
    double u = static_cast<double>(fnv1a(video_id) >> 11) * 0x1.0p-53;
    if (u < 0.7) return Split::Train;
    if (u < 0.8) return Split::Val;
    return Split::Test;
}

Split split_for_fake_video(const std::string& video_id) {
    double u = static_cast<double>(fnv1a(video_id) >> 11) * 0x1.0p-53;
    return u < 1.0 / 3.0 ? Split::Val : Split::Test;
}

}  // namespace

Manifest generate_synthetic_corpus(const SynthFaceConfig& cfg,
                                   const std::filesystem::path& out_dir) {
    using namespace synthdetail;
    cfg.validate();
    std::filesystem::create_directories(out_dir / "images");
    std::filesystem::create_directories(out_dir / "landmarks");

    Manifest manifest;
    manifest.root = out_dir;

    std::vector<IdentityCodes> codes(static_cast<size_t>(cfg.n_identities));
    for (int i = 0; i < cfg.n_identities; ++i) codes[static_cast<size_t>(i)] = identity_codes(cfg, i);

    char buf[128];
    auto id_name = [&](int i) {
        std::snprintf(buf, sizeof(buf), "id%04d", i);
        return std::string(buf);
    };

    for (int i = 0; i < cfg.n_identities; ++i) {
        const std::string identity = id_name(i);

        // Real frames: one per video so reference selection always crosses
        // video (and therefore pose) boundaries.
        for (int v = 0; v < cfg.images_per_identity; ++v) {
            std::snprintf(buf, sizeof(buf), "v_%s_%03d", identity.c_str(), v);
            std::string video_id = buf;
            Pose pose = draw_pose(cfg, static_cast<uint64_t>(i), static_cast<uint64_t>(v));
            Image img = render_face(cfg, codes[i], codes[i], pose, 1.0, 0);
            LandmarkSet lm = face_landmarks(cfg, codes[i], codes[i], pose);

            ManifestEntry e;
            std::snprintf(buf, sizeof(buf), "%s_r%03d", identity.c_str(), v);
            e.frame_id = buf;
            e.image_path = "images/" + identity + "/r" + std::to_string(v) + ".png";
            e.landmarks_path = "landmarks/" + identity + "/r" + std::to_string(v) + ".txt";
            e.identity = identity;
            e.label = Label::Real;
            e.video_id = video_id;
            e.frame_index = 0;
            e.split = split_for_real_video(video_id);
            e.role = e.split == Split::Train ? Role::ReferenceCandidate : Role::Suspect;

            save_png(img, out_dir / e.image_path);
            write_landmarks(lm, out_dir / e.landmarks_path);
            manifest.entries.push_back(std::move(e));
        }

        // Fakes: claimed identity is this one; the outer face comes from a
        // deterministic different source identity.
        int n_fakes = cfg.resolved_fakes_per_identity();
        for (int j = 0; j < n_fakes; ++j) {
            int offset = 1 + (j * 7) % (cfg.n_identities - 1);
            int source = (i + offset) % cfg.n_identities;
            std::snprintf(buf, sizeof(buf), "vf_%s_%03d", identity.c_str(), j);
            std::string video_id = buf;
            Pose pose = draw_pose(cfg, static_cast<uint64_t>(cfg.n_identities + i),
                                  static_cast<uint64_t>(j));
            uint64_t seam_seed = mix_seed(cfg.rng_seed, fnv1a(video_id));
            Image img = render_face(cfg, codes[source], codes[i], pose, cfg.fake_fidelity,
                                    seam_seed);
            LandmarkSet lm = face_landmarks(cfg, codes[source], codes[i], pose);

            ManifestEntry e;
            std::snprintf(buf, sizeof(buf), "%s_f%03d", identity.c_str(), j);
            e.frame_id = buf;
            e.image_path = "images/" + identity + "/f" + std::to_string(j) + ".png";
            e.landmarks_path = "landmarks/" + identity + "/f" + std::to_string(j) + ".txt";
            e.identity = identity;
            e.label = Label::Fake;
            e.method = "inner-swap";
            e.video_id = video_id;
            e.frame_index = 0;
            e.split = split_for_fake_video(video_id);
            e.role = Role::Suspect;

            save_png(img, out_dir / e.image_path);
            write_landmarks(lm, out_dir / e.landmarks_path);
            manifest.entries.push_back(std::move(e));
        }
    }

    write_manifest(manifest, out_dir / "manifest.jsonl");
    return manifest;
}

}  // namespace outerface
