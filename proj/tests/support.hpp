#pragma once

// Shared fixtures for the test binaries: scratch directories and small
// hand-rolled generators over the project's value types.

#include <filesystem>
#include <string>
#include <vector>

#include "seqstroop/rng.hpp"
#include "seqstroop/stimulus.hpp"

namespace testing {

/// Fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
public:
    explicit ScratchDir(const std::string& tag) {
        auto rng = seqstroop::SplitMix64::keyed(reinterpret_cast<std::uintptr_t>(this), tag);
        path_ = std::filesystem::temp_directory_path() /
                ("seqstroop-" + tag + "-" + seqstroop::hex64(rng.next()).substr(0, 8));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~ScratchDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

private:
    std::filesystem::path path_;
};

/// n distinct lowercase color names; the first six are canonical.
inline std::vector<seqstroop::ColorTerm> synthetic_colorset(std::size_t n) {
    std::vector<seqstroop::ColorTerm> out;
    const auto& canon = seqstroop::canonical_colors();
    for (std::size_t i = 0; i < n; ++i) {
        if (i < canon.size()) {
            out.push_back(canon[i]);
        } else {
            const auto v = static_cast<std::uint8_t>(20 * i);
            out.push_back({"color" + std::string(1, static_cast<char>('a' + i)), {v, v, v}});
        }
    }
    return out;
}

inline std::string random_word(seqstroop::SplitMix64& rng, std::size_t max_len) {
    std::string s(1 + rng.below(max_len), 'a');
    for (auto& c : s) c = static_cast<char>('a' + rng.below(26));
    return s;
}

}  // namespace testing
