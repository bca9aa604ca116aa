#pragma once

#include <filesystem>

#include "qpack/io.hpp"

namespace qpack {

// Registry of the data files shipped under fixtures/: the published designs,
// their orbit representatives, and the generator matrices of the prescribed
// groups.

struct FixtureInfo {
    const char* name;
    const char* file;
    bool is_generator;  // otherwise a blocks file
};

inline constexpr FixtureInfo kFixtures[] = {
    {"example_g4", "example_g4.mat", true},      // 4x4, group of order 6
    {"gen_n7", "gen_n7.mat", true},              // 7x7, order 15
    {"gen_n8", "gen_n8.mat", true},              // 8x8, order 217
    {"gen_n11", "gen_n11.mat", true},            // two 11x11 generators
    {"gen_n12", "gen_n12.mat", true},            // two 12x12 generators
    {"gen_n14", "gen_n14.mat", true},            // two 14x14 generators
    {"p2_2_3_7", "p2_2_3_7.blocks", false},      // full 329-block design
    {"reps_2_3_8", "reps_2_3_8.blocks", false},  // 196 orbit representatives
    {"reps_2_3_11", "reps_2_3_11.blocks", false},
    {"reps_2_3_12", "reps_2_3_12.blocks", false},
    {"reps_2_3_14", "reps_2_3_14.blocks", false},
};

inline const FixtureInfo& fixture_info(const std::string& name) {
    for (const auto& f : kFixtures)
        if (name == f.name) return f;
    throw std::invalid_argument("unknown fixture '" + name + "'");
}

/// Locates the fixtures directory: an explicit path wins, then ./fixtures,
/// then the source-tree default baked in at build time (if any).
inline std::filesystem::path find_fixtures_dir(const std::string& hint = "") {
    namespace fs = std::filesystem;
    std::vector<fs::path> candidates;
    if (!hint.empty()) candidates.emplace_back(hint);
    candidates.emplace_back("fixtures");
#ifdef QPACK_FIXTURES_DIR
    candidates.emplace_back(QPACK_FIXTURES_DIR);
#endif
    for (const auto& c : candidates)
        if (fs::is_directory(c)) return c;
    throw std::runtime_error("cannot locate fixtures directory (try --fixtures <dir>)");
}

inline std::filesystem::path fixture_path(const std::string& name, const std::string& hint = "") {
    return find_fixtures_dir(hint) / fixture_info(name).file;
}

inline GeneratorFile load_fixture_generators(const std::string& name,
                                             const std::string& hint = "") {
    const auto& info = fixture_info(name);
    if (!info.is_generator)
        throw std::invalid_argument("fixture '" + name + "' is not a generator file");
    return load_generators(fixture_path(name, hint).string());
}

inline BlockFile load_fixture_blocks(const std::string& name, const std::string& hint = "") {
    const auto& info = fixture_info(name);
    if (info.is_generator)
        throw std::invalid_argument("fixture '" + name + "' is not a blocks file");
    return load_blocks(fixture_path(name, hint).string());
}

}  // namespace qpack
