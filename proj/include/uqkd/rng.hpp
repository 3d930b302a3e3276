#pragma once

#include <array>
#include <cstdint>

namespace uqkd {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123). Each
/// photon owns a stream keyed by (seed, photon index), so the sequence it sees
/// does not depend on which worker runs it or in which order.
class PhotonStream {
 public:
  PhotonStream(std::uint64_t seed, std::uint64_t photon_index) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        counter_{0, 0, static_cast<std::uint32_t>(photon_index),
                 static_cast<std::uint32_t>(photon_index >> 32)} {}

  /// Uniform double on [0, 1) with 53 random bits.
  double uniform() noexcept {
    if (cursor_ == 2) refill();
    const std::uint64_t hi = block_[2 * cursor_];
    const std::uint64_t lo = block_[2 * cursor_ + 1];
    ++cursor_;
    return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
  }

  /// Uniform double on (0, 1]; suitable for -log(q).
  double uniform_open_low() noexcept { return 1.0 - uniform(); }

  static std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> ctr,
                                             std::array<std::uint32_t, 2> key) noexcept {
    constexpr std::uint32_t kMul0 = 0xD2511F53;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }

 private:
  void refill() noexcept {
    block_ = philox(counter_, key_);
    if (++counter_[0] == 0) ++counter_[1];
    cursor_ = 0;
  }

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  int cursor_ = 2;
};

}  // namespace uqkd
