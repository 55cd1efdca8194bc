#include "labs/rng.hpp"

namespace labsearch {

const TabulationHash& TabulationHash::instance() {
    static const TabulationHash h;
    return h;
}

TabulationHash::TabulationHash() {
    // fixed seed: hashes must be identical across runs and threads
    std::uint64_t sm = 0x5eed5eed5eed5eedULL;
    for (int t = 0; t < 2; ++t)
        for (int p = 0; p < kMaxLen; ++p)
            for (int b = 0; b < 2; ++b) t_[t][p][b] = splitmix64(sm);
    for (int t = 0; t < 2; ++t)
        for (int l = 0; l < kMaxLen + 2; ++l) salt_[t][l] = splitmix64(sm);
}

} // namespace labsearch
