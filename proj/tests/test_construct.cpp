#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "labs/construct.hpp"
#include "test_oracles.hpp"

using namespace labsearch;

TEST_CASE("legendre sequences for small primes") {
    CHECK(legendre(3).signs() == std::vector<Sign>({1, 1, -1}));
    CHECK(legendre(7).signs() == std::vector<Sign>({1, 1, 1, -1, 1, -1, -1}));
    const auto l11 = legendre(11);
    int plus = 0;
    for (Sign s : l11.signs())
        if (s > 0) ++plus;
    CHECK(plus == 6);  // (q+1)/2 with the +1 convention at position 0
    CHECK(legendre(11, Sign{-1})[0] == -1);

    CHECK_THROWS_AS(legendre(9), std::invalid_argument);
    CHECK_THROWS_AS(legendre(2), std::invalid_argument);
    CHECK_THROWS_AS(legendre(1), std::invalid_argument);
}

TEST_CASE("primality helper") {
    CHECK(is_prime(2));
    CHECK(is_prime(467));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(425));
    CHECK_FALSE(is_prime(491 * 3));
}

TEST_CASE("construct_sequence basics") {
    // t = 0: pure rotation of length q
    const auto rot_only = construct_sequence(7, 2.0 / 7.0, 0.0);
    CHECK(rot_only.length() == 7);
    CHECK(rot_only == rotated_left(legendre(7), 2));

    // r = 0, one appended element: the first element repeats at the end
    const auto appended = construct_sequence(7, 0.0, 1.0 / 7.0);
    CHECK(appended.length() == 8);
    CHECK(appended[7] == appended[0]);
    for (int i = 0; i < 7; ++i) CHECK(appended[i] == legendre(7)[i]);

    // deterministic: same parameters, same sequence
    CHECK(construct_sequence(467, 0.22, 0.0514, Sign{1}, true) ==
          construct_sequence(467, 0.22, 0.0514, Sign{1}, true));
}

TEST_CASE("seed_grid yields the target length, sorted by merit") {
    ConstructConfig cfg;
    cfg.length = 455;
    const auto grid = seed_grid(cfg);
    CHECK(grid.diagnostic.empty());
    REQUIRE(!grid.candidates.empty());
    for (const auto& c : grid.candidates) {
        CHECK(c.seq.length() == 455);
        CHECK(c.origin == Origin::construction);
        CHECK(c.energy == testoracle::scratch_energy(c.seq));
    }
    for (std::size_t i = 1; i < grid.candidates.size(); ++i)
        CHECK(grid.candidates[i - 1].energy <= grid.candidates[i].energy);
}

TEST_CASE("a single admitted prime with one grid point is a singleton") {
    ConstructConfig cfg;
    cfg.length = 24;  // only q=23 is near the append window
    cfg.grid_steps = 1;
    const auto grid = seed_grid(cfg);
    REQUIRE(grid.primes == std::vector<int>{23});
    CHECK(grid.candidates.size() == 1);
    CHECK(grid.candidates[0].seq.length() == 24);
}

TEST_CASE("unreachable targets report a diagnostic") {
    ConstructConfig cfg;
    cfg.length = 5;
    const auto grid = seed_grid(cfg);
    CHECK(grid.candidates.empty());
    CHECK(!grid.diagnostic.empty());
    CHECK_THROWS_AS([] {
        ConstructConfig bad;
        bad.length = 4;
        seed_grid(bad);
    }(), std::invalid_argument);
}

TEST_CASE("asymptotic sanity: best construction merit near L=521 is 6.0-6.6") {
    ConstructConfig cfg;
    cfg.length = 521;
    const auto grid = seed_grid(cfg);
    REQUIRE(!grid.candidates.empty());
    const double f = grid.candidates.front().merit();
    CHECK(f >= 6.0);
    CHECK(f <= 6.6);
}
