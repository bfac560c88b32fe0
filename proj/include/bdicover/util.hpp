#ifndef BDICOVER_UTIL_HPP
#define BDICOVER_UTIL_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace bdicover {

// Deterministic 64-bit generator (splitmix64). Test generation must be
// byte-for-byte reproducible across platforms, so no std::*_distribution
// is used anywhere; all sampling goes through the helpers below.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();

    // Uniform in [lo, hi). 53-bit mantissa resolution.
    double uniform(double lo, double hi);

    // Uniform in {0, 1, ..., n-1}. n must be > 0.
    std::size_t index(std::size_t n);

    // True with probability p.
    bool chance(double p);

private:
    std::uint64_t state_;
};

// Stable sub-seed derivation: fold a stream id into a base seed so that
// per-test generators are independent of run order.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// Fixed-precision decimal formatting; the single formatting path for every
// number that ends up in a report or artifact file.
std::string format_fixed(double value, int decimals);

std::string trim(const std::string& s);

// Splits on sep at paren depth zero, so "gpl(1,0,1,1)" survives a
// comma-separated list intact. Empty fields are dropped after trimming.
std::vector<std::string> split_top_level(const std::string& s, char sep);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace bdicover

#endif
