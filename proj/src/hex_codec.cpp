#include "labs/hex_codec.hpp"

namespace labsearch {

namespace {
int hex_digit_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
}
} // namespace

std::string hex_encode(const BinarySequence& seq) {
    const int n = seq.length();
    const int digits = (n + 3) / 4;
    const int pad = digits * 4 - n;
    std::string out(static_cast<std::size_t>(digits), '0');
    static const char* kHex = "0123456789ABCDEF";
    int bitpos = pad;  // bit index within the padded MSB-first stream
    int nibble = 0;
    for (int i = 0; i < n; ++i, ++bitpos) {
        nibble = (nibble << 1) | (seq[i] > 0 ? 1 : 0);
        if (bitpos % 4 == 3) {
            out[static_cast<std::size_t>(bitpos / 4)] = kHex[nibble];
            nibble = 0;
        }
    }
    return out;
}

BinarySequence hex_decode(const std::string& hex, int length) {
    if (length < 2)
        throw std::invalid_argument("hex_decode: length must be >= 2, got " +
                                    std::to_string(length));
    if (hex.empty()) throw std::invalid_argument("hex_decode: empty string");
    const long long total_bits = 4LL * static_cast<long long>(hex.size());
    if (length > total_bits)
        throw std::invalid_argument("hex_decode: declared length " + std::to_string(length) +
                                    " exceeds " + std::to_string(total_bits) + " available bits");

    std::vector<int> bits;
    bits.reserve(static_cast<std::size_t>(total_bits));
    for (char c : hex) {
        const int v = hex_digit_value(c);
        if (v < 0)
            throw std::invalid_argument(std::string("hex_decode: non-hex character '") + c + "'");
        for (int b = 3; b >= 0; --b) bits.push_back((v >> b) & 1);
    }

    const std::size_t pad = bits.size() - static_cast<std::size_t>(length);
    for (std::size_t i = 0; i < pad; ++i)
        if (bits[i] != 0)
            throw std::invalid_argument("hex_decode: nonzero bit above position " +
                                        std::to_string(length));

    std::vector<Sign> signs(static_cast<std::size_t>(length));
    for (int i = 0; i < length; ++i)
        signs[static_cast<std::size_t>(i)] = bits[pad + static_cast<std::size_t>(i)] ? Sign{1} : Sign{-1};
    return BinarySequence(std::move(signs));
}

} // namespace labsearch
