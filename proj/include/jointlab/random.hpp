// Copyright 2026 The jointlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>

namespace jointlab {

/// Philox4x32-10 counter-based block cipher (Salmon et al., Random123). Maps a 128-bit counter and a
/// 64-bit key to 128 pseudorandom bits.
class Philox4x32 {
   public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr int kRounds = 10;

    static Counter block(Counter ctr, Key key) {
        for (int r = 0; r < kRounds; r++) {
            if (r > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            ctr = round(ctr, key);
        }
        return ctr;
    }

   private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static Counter round(const Counter &c, const Key &k) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

namespace internal {

/// SplitMix64 finalizer; used only to derive stream identifiers.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace internal

/// Reproducible random stream: Philox4x32-10 keyed by the seed, with the counter split into a 64-bit
/// stream id and a 64-bit block index. Identical (seed, stream) pairs give identical sequences on every
/// platform. Gaussian variates use the Box-Muller transform of consecutive uniforms.
class SeededSampler {
   public:
    static constexpr const char *kAlgorithmId = "philox4x32-10/v1";

    explicit SeededSampler(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {
    }

    std::uint64_t seed() const {
        return seed_;
    }
    std::uint64_t stream() const {
        return stream_;
    }
    static std::string algorithm_id() {
        return kAlgorithmId;
    }

    /// Independent sampler for parallel task `task`. Depends only on (seed, stream, task).
    SeededSampler fork(std::uint64_t task) const {
        return SeededSampler(seed_, internal::mix64(stream_ ^ internal::mix64(task + 1)));
    }

    std::uint32_t next_u32() {
        if (used_ == 4) {
            refill();
        }
        return buffer_[used_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t hi = next_u32();
        const std::uint64_t lo = next_u32();
        return (hi << 32) | lo;
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in (0, 1].
    double uniform_pos() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2 * std::log(uniform_pos()));
        const double t = 2 * std::numbers::pi * uniform();
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    /// Standard complex Gaussian (unit variance in total).
    std::complex<double> complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re / std::numbers::sqrt2, im / std::numbers::sqrt2};
    }

   private:
    void refill() {
        const Philox4x32::Counter ctr{
            static_cast<std::uint32_t>(block_),
            static_cast<std::uint32_t>(block_ >> 32),
            static_cast<std::uint32_t>(stream_),
            static_cast<std::uint32_t>(stream_ >> 32),
        };
        const Philox4x32::Key key{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
        buffer_ = Philox4x32::block(ctr, key);
        block_++;
        used_ = 0;
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    Philox4x32::Counter buffer_{};
    int used_ = 4;
    double spare_ = 0;
    bool has_spare_ = false;
};

}  // namespace jointlab
