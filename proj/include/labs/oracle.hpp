#pragma once

#include "labs/skew.hpp"

namespace labsearch {

struct OracleResult {
    Energy energy;
    BinarySequence sequence;
};

/// Global minimum energy over all 2^{L-1} sequences with s_0 = +1 (global
/// negation symmetry), by Gray-code enumeration with incremental flips.
/// L <= 28.
OracleResult oracle_exhaustive(int length);

/// Global minimum over skew-symmetric sequences only (2^k halves with the
/// leading element fixed). Odd L <= 41.
OracleResult oracle_skew_exhaustive(int length);

} // namespace labsearch
