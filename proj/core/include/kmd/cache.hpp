#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace kmd {

/// FNV-1a over bytes; stable across runs and platforms
uint64_t fnv1a(const std::string& s);
std::string hex64(uint64_t x);

/// Advisory-locked file cache, one file per key. Corrupt or version-mismatched
/// entries read as misses.
class CacheStore {
public:
    explicit CacheStore(std::string dir) : dir_(std::move(dir)) {}
    const std::string& dir() const { return dir_; }

    std::optional<std::string> load(const std::string& key) const;
    /// best effort: IO failures degrade to a warning on stderr
    void store(const std::string& key, const std::string& payload) const;

private:
    std::string dir_;
    std::string path_for(const std::string& key) const;
};

}  // namespace kmd
