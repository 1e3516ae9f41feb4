#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hag {

// Deterministic 64-bit generator (splitmix64). Used everywhere seeded
// sampling must be bit-reproducible across platforms; std:: distributions
// are implementation-defined and therefore banned from library code.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0, n). n must be > 0.
    std::size_t next_index(std::size_t n) {
        return static_cast<std::size_t>(next_u64() % static_cast<std::uint64_t>(n));
    }

private:
    std::uint64_t state_;
};

// FNV-1a, for stable content hashes and derived seeds.
std::uint64_t fnv1a(const std::string& data, std::uint64_t seed = 0xcbf29ce484222325ULL);

// Seeded Fisher-Yates. Deterministic for a given seed.
template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = rng.next_index(i);
        std::swap(items[i - 1], items[j]);
    }
}

std::string to_lower(const std::string& s);
std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);

// Whitespace tokenization; runs of blanks collapse.
std::vector<std::string> tokenize(const std::string& s);

std::string join(const std::vector<std::string>& parts, const std::string& sep);

// Current time as ISO-8601 UTC, e.g. "2024-05-01T12:30:00Z".
std::string utc_now();

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace hag
