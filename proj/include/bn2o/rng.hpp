#ifndef BN2O_RNG_HPP
#define BN2O_RNG_HPP

#include <array>
#include <cstdint>

namespace bn2o {

/// Philox4x32-10 counter-based generator (Salmon et al. 2011).
///
/// Every stream is addressed by (seed, stream index): the 64-bit seed forms
/// the key and the stream index occupies the high counter words. Output for a
/// given address never depends on how many other streams were consumed, which
/// is what makes sampling results invariant to the worker count.
std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        const std::array<std::uint32_t, 2>& key);

/// Derive an independent 64-bit seed for a named subsystem (network generation,
/// case generation, sampling) so their draws never collide.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t domain_tag);

/// A single Philox stream: sequential draws from the block counter.
class RngStream {
public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit();

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// Uniform integer in [0, n); n must be > 0. Unbiased via rejection.
  std::uint32_t next_below(std::uint32_t n);

private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 2> stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffer_pos_ = 4;  // empty
};

}  // namespace bn2o

#endif
