#include "latlab/crc.hpp"

#include <stdexcept>

namespace latlab {

namespace {

uint32_t poly_for(int width) {
  switch (width) {
    case 8:
      return 0x07;  // x^8 + x^2 + x + 1
    case 16:
      return 0x1021;  // CCITT x^16 + x^12 + x^5 + 1
    default:
      throw std::domain_error("crc width must be 8 or 16");
  }
}

}  // namespace

uint32_t crc_remainder(const std::vector<uint8_t>& bits, int width) {
  const uint32_t poly = poly_for(width);
  const uint32_t mask = (1u << width) - 1;
  uint32_t reg = 0;
  for (uint8_t b : bits) {
    const uint32_t in = (b != 0) ? 1u : 0u;
    const uint32_t fb = ((reg >> (width - 1)) ^ in) & 1u;
    reg = (reg << 1) & mask;
    if (fb) reg ^= poly;
  }
  return reg;
}

std::vector<uint8_t> crc_append(const std::vector<uint8_t>& bits, int width) {
  const uint32_t rem = crc_remainder(bits, width);
  std::vector<uint8_t> out = bits;
  out.reserve(bits.size() + static_cast<size_t>(width));
  for (int i = width - 1; i >= 0; --i) {
    out.push_back(static_cast<uint8_t>((rem >> i) & 1u));
  }
  return out;
}

bool crc_check(const std::vector<uint8_t>& bits_with_crc, int width) {
  if (bits_with_crc.size() <= static_cast<size_t>(width)) {
    throw std::domain_error("message shorter than its crc");
  }
  // dividing the whole word (message || crc) leaves remainder zero
  return crc_remainder(bits_with_crc, width) == 0;
}

}  // namespace latlab
