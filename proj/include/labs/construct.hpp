#pragma once

#include "labs/candidate.hpp"

namespace labsearch {

struct ConstructConfig {
    int length = 0;             // target L
    double r_lo = 0.20;         // rotation fraction range
    double r_hi = 0.24;
    double t_lo = 0.055;        // append fraction range (prime admission window)
    double t_hi = 0.063;
    int grid_steps = 0;         // rotation points per prime; 0 = every integer rotation
    bool half_period_offset = true;  // add (q+1)/2 to the rotation (see seed_grid)
    Sign zero_element = 1;      // value at position 0 of the Legendre sequence
    void validate() const;
};

bool is_prime(long long q);

/// Legendre sequence of odd prime length q: position i carries +1 when i is
/// a quadratic residue mod q, -1 otherwise; position 0 is the configured
/// convention value (+1 by default).
BinarySequence legendre(int q, Sign zero_element = 1);

/// Rotate legendre(q) left by round(r*q) (+ (q+1)/2 when half_offset), then
/// append the first round(t*q) elements of the rotated sequence to its end.
/// Result length is q + round(t*q).
BinarySequence construct_sequence(int q, double r, double t, Sign zero_element = 1,
                                  bool half_offset = false);

struct SeedGridResult {
    std::vector<Candidate> candidates;  // sorted by merit descending
    std::string diagnostic;             // non-empty when no admissible prime exists
    std::vector<int> primes;            // admitted primes
};

/// All grid points that hit the target length exactly, scored and sorted by
/// merit factor descending. Admitted primes are those whose implied append
/// count a = L - q is round-reachable from the t range, plus the nearest
/// prime on each side of that window (the paper's tabulated lengths are not
/// all reachable from the stated window).
SeedGridResult seed_grid(const ConstructConfig& config);

} // namespace labsearch
