#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "outerface/landmarks.hpp"

namespace outerface {

enum class Label { Real, Fake };
enum class Split { Train, Val, Test };
enum class Role { Suspect, ReferenceCandidate };

const char* label_name(Label l);
const char* split_name(Split s);
const char* role_name(Role r);
Label label_from_name(const std::string& s);
Split split_from_name(const std::string& s);
Role role_from_name(const std::string& s);

// One frame of the corpus. Paths are relative to the manifest's directory.
struct ManifestEntry {
    std::string frame_id;
    std::string image_path;
    std::string landmarks_path;
    std::string identity;
    Label label = Label::Real;
    std::optional<std::string> method;  // generator tag for fakes
    std::string video_id;
    int frame_index = 0;
    Split split = Split::Train;
    Role role = Role::Suspect;

    bool operator==(const ManifestEntry&) const = default;
};

struct Manifest {
    std::filesystem::path root;  // directory the relative paths resolve against
    std::vector<ManifestEntry> entries;

    std::filesystem::path image_file(const ManifestEntry& e) const { return root / e.image_path; }
    std::filesystem::path landmarks_file(const ManifestEntry& e) const {
        return root / e.landmarks_path;
    }
};

// JSON-lines, one entry per line, schema version field "v": 1.
Manifest read_manifest(const std::filesystem::path& path);
void write_manifest(const Manifest& m, const std::filesystem::path& path);
std::string manifest_line(const ManifestEntry& e);
ManifestEntry parse_manifest_line(const std::string& line);

// Checks the fake-free-training and reference/suspect video separation
// invariants; throws DomainError naming the first offending entry.
void validate_manifest(const Manifest& m);

// Even per-identity sampling from the test split: n_per_class real and
// n_per_class fake frames whose per-identity counts differ by at most one
// (quota order = identity id order). Deterministic given seed.
std::vector<const ManifestEntry*> sample_frames(const Manifest& m, int n_per_class, uint64_t seed);

// A reference candidate: everything needed to select and embed it.
struct ReferenceCandidate {
    std::string frame_id;
    std::filesystem::path image_path;
    std::filesystem::path landmarks_path;
    std::string video_id;
};

enum class ReferenceStrategy { Random, Nearest, Farthest };
const char* strategy_name(ReferenceStrategy s);
ReferenceStrategy strategy_from_name(const std::string& s);

struct ReferencePool {
    std::vector<ReferenceCandidate> candidates;
    ReferenceStrategy strategy = ReferenceStrategy::Random;
    int count = 1;
    uint64_t seed = 0;
};

// Uniform sample (without replacement) of up to pool_size real reference
// candidates of the identity, never from suspect_video_id. Logs a warning
// when fewer than pool_size are available; throws NoEligibleReferences when
// none are.
ReferencePool build_reference_pool(const Manifest& m, const std::string& identity,
                                   const std::string& suspect_video_id, int pool_size,
                                   uint64_t seed);

}  // namespace outerface
