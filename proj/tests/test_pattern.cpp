#include <doctest.h>

#include <cmath>
#include <set>

#include "qpatt/combinatorics.hpp"
#include "qpatt/pattern.hpp"
#include "test_support.hpp"

using namespace qpatt;

namespace {
std::vector<std::string> strings_of(const ImageSpace& space) {
    std::vector<std::string> out;
    for (const auto& p : space.patterns())
        out.push_back(p.to_string());
    return out;
}
} // namespace

TEST_SUITE("pattern") {

    TEST_CASE("pattern construction and validation") {
        const Pattern p = Pattern::from_string("0110");
        CHECK(p.modes() == 4);
        CHECK(p.weight() == 2);
        CHECK(p.to_string() == "0110");
        CHECK(p == Pattern({0, 1, 1, 0}));
        CHECK(Pattern({0, 1}) < Pattern({1, 0}));
        CHECK_THROWS_AS(Pattern(std::vector<std::uint8_t>{}), std::invalid_argument);
        CHECK_THROWS_AS(Pattern({0, 2}), std::invalid_argument);
        CHECK_THROWS_AS(Pattern::from_string("01x"), std::invalid_argument);
        // wider alphabets are representable
        CHECK(Pattern({0, 2, 1}, 3).symbol(1) == 2);
    }

    TEST_CASE("amplitude worked values") {
        const Modulation unit(ModKind::Bpsk, 1.0);
        const Pattern one = Pattern::from_string("1");
        const Pattern zero = Pattern::from_string("0");

        CHECK(amplitude(one, 0, unit, ChannelParams(1.0)) == doctest::Approx(1.0));
        CHECK(amplitude(zero, 0, unit, ChannelParams(0.0)) == doctest::Approx(0.0));

        const Modulation quarter(ModKind::Bpsk, 0.25);
        CHECK(amplitude(one, 0, quarter, ChannelParams(0.64)) == doctest::Approx(0.4));
        // Eve's arm carries the complementary transmissivity
        CHECK(amplitude(one, 0, quarter, ChannelParams(0.64, ChannelSide::Eve)) ==
              doctest::Approx(std::sqrt(0.36 * 0.25)));
        CHECK(amplitude(one, 0, quarter, ChannelParams(1.0, ChannelSide::Eve)) ==
              doctest::Approx(0.0));

        const Modulation bam(ModKind::Bam, 0.25);
        CHECK(amplitude(zero, 0, bam, ChannelParams(0.7)) == doctest::Approx(0.0));
        CHECK(amplitude(one, 0, bam, ChannelParams(1.0)) == doctest::Approx(0.5));
    }

    TEST_CASE("amplitude argument validation") {
        const Modulation mod(ModKind::Bpsk, 1.0);
        const Pattern p = Pattern::from_string("10");
        CHECK_THROWS_AS(amplitude(p, 2, mod, ChannelParams(0.5)), std::out_of_range);
        CHECK_THROWS_AS(ChannelParams(1.5), std::invalid_argument);
        CHECK_THROWS_AS(ChannelParams(-0.1), std::invalid_argument);
        CHECK_THROWS_AS(Modulation(ModKind::Bpsk, -1.0), std::invalid_argument);
    }

    TEST_CASE("loss multiplicativity") {
        // amplitude at eta equals sqrt(eta) * amplitude at eta = 1
        std::mt19937_64 rng(7);
        for (int trial = 0; trial < 50; ++trial) {
            const auto patterns = testing::random_distinct_patterns(rng, 5, 1);
            const double ns = 0.1 + 3.0 * (rng() % 1000) / 1000.0;
            const double eta = (rng() % 1001) / 1000.0;
            for (ModKind kind : {ModKind::Bpsk, ModKind::Bam}) {
                const Modulation mod(kind, ns);
                for (int j = 0; j < 5; ++j) {
                    const double lossless = amplitude(patterns[0], j, mod, ChannelParams(1.0));
                    CHECK(amplitude(patterns[0], j, mod, ChannelParams(eta)) ==
                          doctest::Approx(std::sqrt(eta) * lossless).epsilon(1e-12));
                }
            }
        }
    }

    TEST_CASE("enumerate_ktpf matches the reference listings") {
        const Modulation mod(ModKind::Bpsk, 0.25);
        CHECK(strings_of(enumerate_ktpf(3, 1, mod)) ==
              std::vector<std::string>{"100", "010", "001"});
        CHECK(strings_of(enumerate_ktpf(3, 2, mod)) ==
              std::vector<std::string>{"110", "101", "011"});
        CHECK(enumerate_ktpf(4, 2, mod).size() == 6);
    }

    TEST_CASE("enumerate_ktpf rejects empty encodings") {
        const Modulation mod(ModKind::Bpsk, 0.25);
        CHECK_THROWS_AS(enumerate_ktpf(3, 0, mod), std::invalid_argument);
        CHECK_THROWS_AS(enumerate_ktpf(3, 3, mod), std::invalid_argument);
        CHECK_THROWS_AS(enumerate_ktpf(1, 1, mod), std::invalid_argument);
    }

    TEST_CASE("enumerate_ktpf cardinality, distinctness and order, m <= 12") {
        const Modulation mod(ModKind::Bpsk, 0.25);
        for (int m = 2; m <= 12; ++m) {
            for (int k = 1; k <= m - 1; ++k) {
                const ImageSpace space = enumerate_ktpf(m, k, mod);
                CHECK(space.size() == static_cast<int>(binomial(m, k)));
                std::set<Pattern> distinct(space.patterns().begin(), space.patterns().end());
                CHECK(static_cast<int>(distinct.size()) == space.size());
                for (int i = 0; i + 1 < space.size(); ++i) {
                    // position-lexicographic order reads as descending 0/1 strings
                    CHECK(space.pattern(i).to_string() > space.pattern(i + 1).to_string());
                    CHECK(space.pattern(i).weight() == k);
                }
            }
        }
    }

    TEST_CASE("is_gus_ktpf") {
        const Modulation mod(ModKind::Bpsk, 0.25);
        CHECK(is_gus_ktpf(enumerate_ktpf(3, 1, mod)));
        CHECK(is_gus_ktpf(enumerate_ktpf(5, 2, mod)));

        CHECK_FALSE(is_gus_ktpf(ImageSpace(
            {Pattern::from_string("100"), Pattern::from_string("010")}, mod)));

        auto mixed = enumerate_ktpf(3, 1, mod).patterns();
        const auto second = enumerate_ktpf(3, 2, mod).patterns();
        mixed.insert(mixed.end(), second.begin(), second.end());
        CHECK_FALSE(is_gus_ktpf(ImageSpace(mixed, mod)));
    }

    TEST_CASE("image space validation") {
        const Modulation mod(ModKind::Bpsk, 0.25);
        CHECK_THROWS_AS(ImageSpace({}, mod), std::invalid_argument);
        CHECK_THROWS_AS(
            ImageSpace({Pattern::from_string("10"), Pattern::from_string("100")}, mod),
            std::invalid_argument);
        CHECK_THROWS_AS(
            ImageSpace({Pattern::from_string("10"), Pattern::from_string("10")}, mod),
            std::invalid_argument);
    }
}
