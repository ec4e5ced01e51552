#pragma once

#include <cstdint>
#include <vector>

namespace latlab {

// Bit-level CRC over an arbitrary-length message (MSB-first, zero initial
// remainder, no reflection, no final xor). Widths 8 (poly 0x07) and 16
// (CCITT poly 0x1021) are supported.
uint32_t crc_remainder(const std::vector<uint8_t>& bits, int width);

// message bits + CRC bits (MSB first) appended.
std::vector<uint8_t> crc_append(const std::vector<uint8_t>& bits, int width);

// true iff the trailing `width` bits are the CRC of the leading bits.
bool crc_check(const std::vector<uint8_t>& bits_with_crc, int width);

}  // namespace latlab
