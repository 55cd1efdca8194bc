#pragma once

#include <string>

#include "labs/sequence.hpp"

namespace labsearch {

/// Packs a sequence into uppercase hex, MSB-first: the first element maps to
/// the most significant bit (+1 -> 1, -1 -> 0), left-padded with zero bits to
/// a whole number of hex digits.
std::string hex_encode(const BinarySequence& seq);

/// Inverse of hex_encode for a declared length. Rejects non-hex characters,
/// lengths that do not fit, and any 1-bit above position L (the padding
/// region must be all zero).
BinarySequence hex_decode(const std::string& hex, int length);

} // namespace labsearch
