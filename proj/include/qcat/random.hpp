#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace qcat {

/// Philox-4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// The output is a pure function of (key, counter), so independent streams
/// are obtained by assigning disjoint counters rather than by seeding.
class Philox4x32 {
  public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter apply(Counter ctr, Key key)
    {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kW0;
                key[1] += kW1;
            }
            const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

  private:
    static constexpr std::uint32_t kM0 = 0xD2511F53;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57;
    static constexpr std::uint32_t kW0 = 0x9E3779B9;
    static constexpr std::uint32_t kW1 = 0xBB67AE85;
};

/// Standard normal stream addressed by (seed, sample index, entry index).
///
/// Counter layout: word 0 is the block index within the stream, word 1 the
/// entry, words 2-3 the sample index. Normals come in pairs from the polar
/// method, one block per attempt.
class NormalStream {
  public:
    NormalStream(std::uint64_t seed, std::uint64_t sample, std::uint32_t entry)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          ctr_{0, entry, static_cast<std::uint32_t>(sample), static_cast<std::uint32_t>(sample >> 32)}
    {
    }

    double operator()()
    {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // Marsaglia polar method: one Philox block per attempt.
        for (;;) {
            const auto out = Philox4x32::apply(ctr_, key_);
            ++ctr_[0];
            const double u = 2.0 * to_unit(out[0], out[1]) - 1.0;
            const double v = 2.0 * to_unit(out[2], out[3]) - 1.0;
            const double s = u * u + v * v;
            if (s >= 1.0 || s == 0.0) continue;
            const double f = std::sqrt(-2.0 * std::log(s) / s);
            spare_ = v * f;
            have_spare_ = true;
            return u * f;
        }
    }

  private:
    static double to_unit(std::uint32_t hi, std::uint32_t lo)
    {
        const std::uint64_t bits = ((std::uint64_t{hi} << 32) | lo) >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    Philox4x32::Key key_;
    Philox4x32::Counter ctr_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace qcat
