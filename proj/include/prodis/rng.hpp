#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace prodis {

// Identifies one logical draw stream.  Equal keys replay identical sequences.
// Replications own distinct stream_ids; the two sampling stages use distinct
// substream_ids (0 = latent stage, 1 = observation stage).
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::uint64_t substream_id = 0;

  friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

// Counter-based generator (Philox4x64-10).  The cipher key is
// (seed, stream_id) and the counter block is (block_index, substream_id, 0, 0),
// so every (seed, stream, substream) triple addresses a disjoint slice of
// counter space.  Streams carry no shared state: any key can be constructed
// and advanced independently of all others, which is what makes replication
// loops order-independent.
class RngStream {
 public:
  explicit RngStream(StreamKey key) : key_(key) {}

  std::uint64_t next_u64();

  // Uniform on [0,1) built from the top 53 bits.
  double next_uniform();

  // Uniform on [lo, hi).
  double next_uniform_in(double lo, double hi) { return lo + next_uniform() * (hi - lo); }

  const StreamKey& key() const { return key_; }

  // Test hook: pins next_uniform() to a constant (next_u64 is unaffected).
  // Only callable after set_test_hooks(true); throws std::logic_error otherwise.
  void force_uniforms(double value);
  void clear_forced() { forced_ = false; }

 private:
  void refill();

  StreamKey key_;
  std::uint64_t block_counter_ = 0;
  std::array<std::uint64_t, 4> block_{};
  int cursor_ = 4;
  bool forced_ = false;
  double forced_value_ = 0.0;
};

// Global enable for the test-only hooks above.  Off by default.
void set_test_hooks(bool enabled);
bool test_hooks_enabled();

// Accepts a decimal ("123456789") or 0x-prefixed hex ("0x075BCD15") seed.
std::uint64_t parse_seed(const std::string& text);

}  // namespace prodis
