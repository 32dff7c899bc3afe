#include "outerface/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "outerface/errors.hpp"
#include "outerface/log.hpp"
#include "outerface/rng.hpp"

namespace outerface {

using json = nlohmann::ordered_json;

const char* label_name(Label l) { return l == Label::Real ? "real" : "fake"; }
const char* split_name(Split s) {
    switch (s) {
        case Split::Train: return "train";
        case Split::Val: return "val";
        case Split::Test: return "test";
    }
    return "?";
}
const char* role_name(Role r) {
    return r == Role::Suspect ? "suspect" : "reference_candidate";
}

Label label_from_name(const std::string& s) {
    if (s == "real") return Label::Real;
    if (s == "fake") return Label::Fake;
    raise("IoFailure", "unknown label '" + s + "'");
}
Split split_from_name(const std::string& s) {
    if (s == "train") return Split::Train;
    if (s == "val") return Split::Val;
    if (s == "test") return Split::Test;
    raise("IoFailure", "unknown split '" + s + "'");
}
Role role_from_name(const std::string& s) {
    if (s == "suspect") return Role::Suspect;
    if (s == "reference_candidate") return Role::ReferenceCandidate;
    raise("IoFailure", "unknown role '" + s + "'");
}

std::string manifest_line(const ManifestEntry& e) {
    json j;
    j["v"] = 1;
    j["frame_id"] = e.frame_id;
    j["image_path"] = e.image_path;
    j["landmarks_path"] = e.landmarks_path;
    j["identity"] = e.identity;
    j["label"] = label_name(e.label);
    if (e.method)
        j["method"] = *e.method;
    else
        j["method"] = nullptr;
    j["video_id"] = e.video_id;
    j["frame_index"] = e.frame_index;
    j["split"] = split_name(e.split);
    j["role"] = role_name(e.role);
    return j.dump();
}

ManifestEntry parse_manifest_line(const std::string& line) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) raise("IoFailure", "malformed manifest line: " + line);
    if (!j.contains("v") || j["v"].get<int>() != 1)
        raise("IoFailure", "unsupported manifest schema version");
    ManifestEntry e;
    e.frame_id = j.at("frame_id").get<std::string>();
    e.image_path = j.at("image_path").get<std::string>();
    e.landmarks_path = j.at("landmarks_path").get<std::string>();
    e.identity = j.at("identity").get<std::string>();
    e.label = label_from_name(j.at("label").get<std::string>());
    if (j.contains("method") && !j["method"].is_null())
        e.method = j["method"].get<std::string>();
    e.video_id = j.at("video_id").get<std::string>();
    e.frame_index = j.at("frame_index").get<int>();
    e.split = split_from_name(j.at("split").get<std::string>());
    e.role = role_from_name(j.at("role").get<std::string>());
    return e;
}

Manifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise("IoFailure", "cannot open manifest " + path.string());
    Manifest m;
    m.root = path.parent_path();
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        m.entries.push_back(parse_manifest_line(line));
    }
    return m;
}

void write_manifest(const Manifest& m, const std::filesystem::path& path) {
    std::filesystem::path parent = path.parent_path();
    if (!parent.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(parent, ec);
    }
    std::ofstream out(path);
    if (!out) raise("IoFailure", "cannot write manifest " + path.string());
    for (const ManifestEntry& e : m.entries) out << manifest_line(e) << "\n";
}

void validate_manifest(const Manifest& m) {
    // Train must be fake-free.
    for (const ManifestEntry& e : m.entries)
        if (e.split == Split::Train && e.label == Label::Fake)
            raise("FakeFreeViolation",
                  "train split contains fake-labeled frame '" + e.frame_id + "'");

    // Reference candidates must not share a video with any test suspect of
    // the same identity.
    std::set<std::pair<std::string, std::string>> suspect_videos;
    for (const ManifestEntry& e : m.entries)
        if (e.role == Role::Suspect && e.split == Split::Test)
            suspect_videos.insert({e.identity, e.video_id});
    for (const ManifestEntry& e : m.entries)
        if (e.role == Role::ReferenceCandidate &&
            suspect_videos.count({e.identity, e.video_id}))
            raise("ReferenceLeak", "reference candidate '" + e.frame_id +
                                       "' shares video '" + e.video_id +
                                       "' with a test suspect of identity " + e.identity);
}

std::vector<const ManifestEntry*> sample_frames(const Manifest& m, int n_per_class,
                                                uint64_t seed) {
    require(n_per_class >= 1, "InvalidConfig", "n_per_class must be positive");

    std::vector<const ManifestEntry*> out;
    for (Label want : {Label::Real, Label::Fake}) {
        // Group test-split suspects of this class by identity, identity-id order.
        std::map<std::string, std::vector<const ManifestEntry*>> by_id;
        size_t total = 0;
        for (const ManifestEntry& e : m.entries)
            if (e.split == Split::Test && e.role == Role::Suspect && e.label == want) {
                by_id[e.identity].push_back(&e);
                ++total;
            }
        if (total < static_cast<size_t>(n_per_class))
            raise("InsufficientFrames", std::string("test split has only ") +
                                            std::to_string(total) + " " + label_name(want) +
                                            " frames, need " + std::to_string(n_per_class));

        // Shuffle each identity's frames with its own derived stream, then
        // round-robin in identity-id order until the quota is filled.
        std::vector<std::vector<const ManifestEntry*>> lists;
        for (auto& [identity, frames] : by_id) {
            std::sort(frames.begin(), frames.end(),
                      [](const ManifestEntry* a, const ManifestEntry* b) {
                          return a->frame_id < b->frame_id;
                      });
            Rng rng = Rng::derive(seed, {rngtag::kSample, fnv1a(identity),
                                         want == Label::Real ? 0ull : 1ull});
            rng.shuffle(frames);
            lists.push_back(frames);
        }
        int taken = 0;
        for (size_t round = 0; taken < n_per_class; ++round) {
            bool any = false;
            for (auto& frames : lists) {
                if (round < frames.size()) {
                    out.push_back(frames[round]);
                    any = true;
                    if (++taken == n_per_class) break;
                }
            }
            if (!any)
                raise("InsufficientFrames", "ran out of frames during even sampling");
        }
    }
    return out;
}

const char* strategy_name(ReferenceStrategy s) {
    switch (s) {
        case ReferenceStrategy::Random: return "random";
        case ReferenceStrategy::Nearest: return "nearest";
        case ReferenceStrategy::Farthest: return "farthest";
    }
    return "?";
}

ReferenceStrategy strategy_from_name(const std::string& s) {
    if (s == "random") return ReferenceStrategy::Random;
    if (s == "nearest") return ReferenceStrategy::Nearest;
    if (s == "farthest") return ReferenceStrategy::Farthest;
    raise("InvalidConfig", "unknown reference strategy '" + s + "'");
}

ReferencePool build_reference_pool(const Manifest& m, const std::string& identity,
                                   const std::string& suspect_video_id, int pool_size,
                                   uint64_t seed) {
    require(pool_size >= 1, "InvalidConfig", "pool_size must be positive");
    std::vector<const ManifestEntry*> eligible;
    for (const ManifestEntry& e : m.entries)
        if (e.role == Role::ReferenceCandidate && e.label == Label::Real &&
            e.identity == identity && e.video_id != suspect_video_id)
            eligible.push_back(&e);
    if (eligible.empty())
        raise("NoEligibleReferences",
              "identity " + identity + " has no real reference candidates outside video '" +
                  suspect_video_id + "'");
    std::sort(eligible.begin(), eligible.end(),
              [](const ManifestEntry* a, const ManifestEntry* b) {
                  return a->frame_id < b->frame_id;
              });
    if (eligible.size() < static_cast<size_t>(pool_size))
        log_warn("reference pool for " + identity + ": only " +
                 std::to_string(eligible.size()) + " of " + std::to_string(pool_size) +
                 " requested candidates available");

    Rng rng = Rng::derive(seed, {rngtag::kPool, fnv1a(identity), fnv1a(suspect_video_id)});
    std::vector<size_t> pick =
        rng.sample_indices(eligible.size(), static_cast<size_t>(pool_size));

    ReferencePool pool;
    pool.seed = seed;
    for (size_t i : pick) {
        const ManifestEntry* e = eligible[i];
        pool.candidates.push_back({e->frame_id, m.image_file(*e), m.landmarks_file(*e),
                                   e->video_id});
    }
    return pool;
}

}  // namespace outerface
