#include "kmd/cache.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace kmd {

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(uint64_t x) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[x & 0xf];
        x >>= 4;
    }
    return s;
}

std::string CacheStore::path_for(const std::string& key) const {
    return dir_ + "/" + key + ".kmdcache";
}

std::optional<std::string> CacheStore::load(const std::string& key) const {
    std::string path = path_for(key);
    int fd = ::open(path.c_str(), O_RDONLY);
    if (fd < 0) return std::nullopt;
    ::flock(fd, LOCK_SH);
    std::string data;
    char buf[1 << 14];
    ssize_t n;
    while ((n = ::read(fd, buf, sizeof buf)) > 0) data.append(buf, size_t(n));
    ::flock(fd, LOCK_UN);
    ::close(fd);
    if (data.empty()) return std::nullopt;
    return data;
}

void CacheStore::store(const std::string& key, const std::string& payload) const {
    ::mkdir(dir_.c_str(), 0755);  // best effort
    std::string path = path_for(key);
    std::string tmp = path + ".tmp" + std::to_string(::getpid());
    int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (fd < 0) {
        std::cerr << "warning: cannot write cache entry " << path << "\n";
        return;
    }
    ::flock(fd, LOCK_EX);
    size_t off = 0;
    while (off < payload.size()) {
        ssize_t n = ::write(fd, payload.data() + off, payload.size() - off);
        if (n <= 0) break;
        off += size_t(n);
    }
    ::flock(fd, LOCK_UN);
    ::close(fd);
    if (off == payload.size()) {
        ::rename(tmp.c_str(), path.c_str());
    } else {
        std::cerr << "warning: short write for cache entry " << path << "\n";
        ::unlink(tmp.c_str());
    }
}

}  // namespace kmd
