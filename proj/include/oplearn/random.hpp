#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace oplearn {

// Seeded random stream with pinned transforms. Draw sequences depend only on
// the seed and the call sequence, never on library internals, so results are
// reproducible bit for bit.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    std::uint64_t raw();

    // uniform on [0,1) with 53-bit resolution
    double uniform();
    double uniform(double lo, double hi);

    // standard normal via polar Box-Muller (second value cached)
    double normal();
    double normal(double mean, double stddev);

    // Independent stream derived from this stream's seed and a tag.
    // Derivation ignores how much has been drawn from the parent.
    RandomStream child(std::string_view tag) const;

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// splitmix64-style mix of a seed and a tag, used for stream derivation
std::uint64_t derive_seed(std::uint64_t base, std::string_view tag);

} // namespace oplearn
