#include "trac/rng.h"

namespace trac {

std::uint64_t SeededRng::below(std::uint64_t n) {
  // Lemire's multiply-shift with rejection.
  std::uint64_t x = next();
  unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      x = next();
      m = static_cast<unsigned __int128>(x) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

unsigned __int128 SeededRng::below(unsigned __int128 n) {
  if (n >> 64 == 0) return below(static_cast<std::uint64_t>(n));
  // Rejection on the smallest covering power of two.
  int bits = 128;
  while (bits > 64 && ((n - 1) >> (bits - 1)) == 0) --bits;
  unsigned __int128 mask = bits == 128 ? ~static_cast<unsigned __int128>(0)
                                       : (static_cast<unsigned __int128>(1) << bits) - 1;
  while (true) {
    unsigned __int128 x = (static_cast<unsigned __int128>(next()) << 64) | next();
    x &= mask;
    if (x < n) return x;
  }
}

}  // namespace trac
