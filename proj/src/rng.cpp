#include "prodis/rng.hpp"

#include <atomic>
#include <stdexcept>

namespace prodis {

namespace {

// Philox4x64 round constants (multipliers and Weyl key increments).
constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

std::array<std::uint64_t, 4> philox4x64_10(std::array<std::uint64_t, 4> ctr,
                                           std::array<std::uint64_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

std::atomic<bool> g_test_hooks{false};

}  // namespace

void set_test_hooks(bool enabled) { g_test_hooks.store(enabled); }

bool test_hooks_enabled() { return g_test_hooks.load(); }

void RngStream::refill() {
  block_ = philox4x64_10({block_counter_, key_.substream_id, 0, 0}, {key_.seed, key_.stream_id});
  ++block_counter_;
  cursor_ = 0;
}

std::uint64_t RngStream::next_u64() {
  if (cursor_ == 4) refill();
  return block_[cursor_++];
}

double RngStream::next_uniform() {
  if (forced_) return forced_value_;
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

void RngStream::force_uniforms(double value) {
  if (!test_hooks_enabled()) {
    throw std::logic_error("force_uniforms requires set_test_hooks(true)");
  }
  forced_ = true;
  forced_value_ = value;
}

std::uint64_t parse_seed(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty seed string");
  int base = 10;
  std::size_t start = 0;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    base = 16;
    start = 2;
  }
  std::uint64_t value = 0;
  for (std::size_t i = start; i < text.size(); ++i) {
    char c = text[i];
    int digit;
    if (c >= '0' && c <= '9') {
      digit = c - '0';
    } else if (base == 16 && c >= 'a' && c <= 'f') {
      digit = 10 + (c - 'a');
    } else if (base == 16 && c >= 'A' && c <= 'F') {
      digit = 10 + (c - 'A');
    } else {
      throw std::invalid_argument("invalid seed string: " + text);
    }
    if (digit >= base) throw std::invalid_argument("invalid seed string: " + text);
    std::uint64_t limit = (~0ULL - static_cast<std::uint64_t>(digit)) / static_cast<std::uint64_t>(base);
    if (value > limit) throw std::invalid_argument("seed out of range: " + text);
    value = value * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(digit);
  }
  return value;
}

}  // namespace prodis
