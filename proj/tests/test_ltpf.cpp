#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "qpatt/ensemble.hpp"
#include "qpatt/ltpf.hpp"
#include "test_support.hpp"

using namespace qpatt;

namespace {

LtpfScheme tri_block_scheme(double ns) {
    // the 11-mode reference layout: sizes {3,5,3}, targets {1,2,1}, Sigma = 90
    return parse_scheme("3:1,5:2,3:1", Modulation(ModKind::Bpsk, ns));
}

// Global-joint mutual information oracle: builds the full conditional over
// the product codebook from per-block square-root-measurement statistics and
// evaluates the information definition directly. Production code sums
// per-block terms instead; the two must agree.
//
// With eve_union set, rows are restricted to the true codebook while the
// posterior in the log runs over every union-space input (the interceptor
// does not know the target counts), mirroring mutual_info_ae_unbiased.
double global_mi_oracle(const LtpfScheme& scheme, double eta, bool eve_union) {
    const ChannelParams channel(eta, eve_union ? ChannelSide::Eve : ChannelSide::Bob);

    std::vector<Eigen::MatrixXd> conds; // rows: true sub-patterns, cols: outcomes
    std::vector<Eigen::VectorXd> model_mass;
    for (int j = 0; j < scheme.partition().block_count(); ++j) {
        const int size = static_cast<int>(scheme.partition().block(j).size());
        const int k = scheme.assignment().target(j);
        if (!eve_union) {
            conds.push_back(
                pgm_conditional(gram(enumerate_ktpf(size, k, scheme.modulation()), channel)));
            model_mass.push_back(conds.back().colwise().sum());
        } else {
            std::vector<Pattern> union_patterns;
            int offset = 0, count = 0;
            for (int kk = 1; kk <= size - 1; ++kk) {
                const auto part = fixed_weight_patterns(size, kk);
                if (kk < k)
                    offset += static_cast<int>(part.size());
                if (kk == k)
                    count = static_cast<int>(part.size());
                union_patterns.insert(union_patterns.end(), part.begin(), part.end());
            }
            const auto cond = pgm_conditional(
                gram(ImageSpace(union_patterns, scheme.modulation()), channel));
            conds.push_back(cond.middleRows(offset, count));
            model_mass.push_back(cond.colwise().sum());
        }
    }

    // odometer over (input tuple, outcome tuple)
    long rows = 1, cols = 1;
    for (const auto& c : conds) {
        rows *= c.rows();
        cols *= c.cols();
    }
    double bits = std::log2(static_cast<double>(rows));
    for (long a = 0; a < rows; ++a) {
        long rest_a = a;
        std::vector<long> ai(conds.size());
        for (int j = static_cast<int>(conds.size()) - 1; j >= 0; --j) {
            ai[static_cast<std::size_t>(j)] = rest_a % conds[static_cast<std::size_t>(j)].rows();
            rest_a /= conds[static_cast<std::size_t>(j)].rows();
        }
        for (long b = 0; b < cols; ++b) {
            long rest_b = b;
            double cond_prob = 1.0;
            double mass = 1.0;
            for (int j = static_cast<int>(conds.size()) - 1; j >= 0; --j) {
                const auto& c = conds[static_cast<std::size_t>(j)];
                const long bj = rest_b % c.cols();
                cond_prob *= c(ai[static_cast<std::size_t>(j)], bj);
                mass *= model_mass[static_cast<std::size_t>(j)][bj];
                rest_b /= c.cols();
            }
            const double joint = cond_prob / static_cast<double>(rows);
            if (joint > 0.0 && mass > 0.0)
                bits += joint * std::log2(cond_prob / mass);
        }
    }
    return std::clamp(bits, 0.0, std::log2(static_cast<double>(rows)));
}

} // namespace

TEST_SUITE("ltpf") {

    TEST_CASE("partition and assignment validation") {
        using Blocks = std::vector<std::vector<int>>;
        CHECK_THROWS_AS(LocalityPartition(Blocks{{0}}), std::invalid_argument);
        CHECK_THROWS_AS(LocalityPartition(Blocks{{0, 1}, {1, 2}}), std::invalid_argument);
        CHECK_THROWS_AS(LocalityPartition(Blocks{{0, 1}, {3, 4}}), std::invalid_argument);
        CHECK(LocalityPartition::contiguous({3, 5, 3}).mode_count() == 11);
        CHECK(LocalityPartition::contiguous({3, 5, 3}).block(1) ==
              std::vector<int>{3, 4, 5, 6, 7});

        CHECK_THROWS_AS(TpfAssignment({1, 0}), std::invalid_argument);
        CHECK_THROWS_AS(LtpfScheme(LocalityPartition::contiguous({3, 3}), TpfAssignment({1}),
                                   Modulation(ModKind::Bpsk, 0.25)),
                        std::invalid_argument);
        CHECK_THROWS_AS(LtpfScheme(LocalityPartition::contiguous({3}), TpfAssignment({3}),
                                   Modulation(ModKind::Bpsk, 0.25)),
                        std::invalid_argument);
    }

    TEST_CASE("parse_scheme") {
        const Modulation mod(ModKind::Bpsk, 0.25);
        CHECK(parse_scheme("3:1,5:2,3:1", mod).sigma() == 90);
        CHECK(parse_scheme("2:1", mod).sigma() == 2);
        CHECK_THROWS_WITH_AS(parse_scheme("3:3", mod),
                             doctest::Contains("block 1 '3:3'"), std::invalid_argument);
        CHECK_THROWS_AS(parse_scheme("3:1,oops", mod), std::invalid_argument);
        CHECK_THROWS_AS(parse_scheme("", mod), std::invalid_argument);
        CHECK_THROWS_AS(parse_scheme("3", mod), std::invalid_argument);
    }

    TEST_CASE("build_image_space worked listings") {
        const Modulation mod(ModKind::Bpsk, 0.25);
        const LtpfScheme single(LocalityPartition::contiguous({3}), TpfAssignment({1}), mod);
        const ImageSpace single_space = build_image_space(single);
        std::vector<std::string> got;
        for (const auto& p : single_space.patterns())
            got.push_back(p.to_string());
        CHECK(got == std::vector<std::string>{"100", "010", "001"});

        const LtpfScheme pair(LocalityPartition::contiguous({2, 2}), TpfAssignment({1, 1}), mod);
        const ImageSpace pair_space = build_image_space(pair);
        got.clear();
        for (const auto& p : pair_space.patterns())
            got.push_back(p.to_string());
        CHECK(got == std::vector<std::string>{"1010", "1001", "0110", "0101"});

        const ImageSpace reference = build_image_space(tri_block_scheme(0.25));
        CHECK(reference.size() == 90);
        CHECK(reference.modes() == 11);
        for (const auto& p : reference.patterns())
            CHECK(p.weight() == 4); // 1 + 2 + 1 targets
    }

    TEST_CASE("eve_image_space sizes and contents") {
        const Modulation mod(ModKind::Bpsk, 0.25);
        const auto tiny = eve_image_space(LocalityPartition::contiguous({2}), mod);
        std::vector<std::string> got;
        for (const auto& p : tiny.patterns())
            got.push_back(p.to_string());
        CHECK(got == std::vector<std::string>{"10", "01"});

        CHECK(eve_image_space(LocalityPartition::contiguous({3}), mod).size() == 6);
        CHECK(eve_image_space(LocalityPartition::contiguous({3, 5, 3}), mod).size() == 1080);
    }

    TEST_CASE("mutual_info_ab limiting cases") {
        const auto scheme = tri_block_scheme(0.25);
        CHECK(std::abs(mutual_info_ab(scheme, 0.0)) < 1e-12);
        const auto bright = tri_block_scheme(20.0);
        CHECK(std::abs(mutual_info_ab(bright, 1.0) - std::log2(90.0)) < 1e-6);
    }

    TEST_CASE("mutual_info_ab equals the global-joint oracle") {
        for (const char* spec : {"2:1,3:1", "3:1,3:2", "3:1,5:2,3:1"}) {
            const auto scheme = parse_scheme(spec, Modulation(ModKind::Bpsk, 0.25));
            for (double eta : {0.2, 0.5, 0.8})
                CHECK(std::abs(mutual_info_ab(scheme, eta) -
                               global_mi_oracle(scheme, eta, false)) < 1e-9);
        }
    }

    TEST_CASE("mutual_info_ab equals the sum over single-block schemes") {
        const Modulation mod(ModKind::Bpsk, 0.25);
        const auto scheme = tri_block_scheme(0.25);
        const double whole = mutual_info_ab(scheme, 0.7);
        double parts = 0.0;
        for (auto [size, k] : {std::pair{3, 1}, {5, 2}, {3, 1}})
            parts += mutual_info_ab(
                LtpfScheme(LocalityPartition::contiguous({size}), TpfAssignment({k}), mod), 0.7);
        CHECK(std::abs(whole - parts) < 1e-9);
    }

    TEST_CASE("mutual_info_ab agrees with a Monte Carlo estimate") {
        const auto scheme = tri_block_scheme(0.25);
        const double eta = 0.8;
        const double exact = mutual_info_ab(scheme, eta);

        // sample transmissions from the exact conditional of the product
        // codebook, estimate MI from the empirical joint with the
        // first-order plug-in bias removed
        const ChannelParams channel(eta, ChannelSide::Bob);
        std::vector<Eigen::MatrixXd> conds;
        std::vector<Eigen::MatrixXd> cumulative;
        for (int j = 0; j < scheme.partition().block_count(); ++j) {
            const int size = static_cast<int>(scheme.partition().block(j).size());
            const auto cond = pgm_conditional(
                gram(enumerate_ktpf(size, scheme.assignment().target(j), scheme.modulation()),
                     channel));
            Eigen::MatrixXd cum = cond;
            for (int c = 1; c < cum.cols(); ++c)
                cum.col(c) += cum.col(c - 1);
            conds.push_back(cond);
            cumulative.push_back(cum);
        }

        const int samples = 1000000;
        std::mt19937_64 rng(12345);
        std::map<std::pair<long, long>, long> counts;
        long sigma = 1;
        for (const auto& c : conds)
            sigma *= c.rows();
        for (int s = 0; s < samples; ++s) {
            long a = 0, b = 0;
            for (std::size_t j = 0; j < conds.size(); ++j) {
                const long aj = static_cast<long>(rng() % static_cast<std::uint64_t>(
                                                             conds[j].rows()));
                const double u = (rng() >> 11) * 0x1.0p-53;
                long bj = 0;
                while (bj + 1 < cumulative[j].cols() && u >= cumulative[j](aj, bj))
                    ++bj;
                a = a * conds[j].rows() + aj;
                b = b * conds[j].cols() + bj;
            }
            ++counts[{a, b}];
        }

        std::map<long, long> a_mass, b_mass;
        for (const auto& [ab, c] : counts) {
            a_mass[ab.first] += c;
            b_mass[ab.second] += c;
        }
        double plug_in = 0.0;
        for (const auto& [ab, c] : counts) {
            const double p = static_cast<double>(c) / samples;
            const double pa = static_cast<double>(a_mass[ab.first]) / samples;
            const double pb = static_cast<double>(b_mass[ab.second]) / samples;
            plug_in += p * std::log2(p / (pa * pb));
        }
        const double bias = (static_cast<double>(counts.size()) - a_mass.size() -
                             b_mass.size() + 1.0) /
                            (2.0 * samples * std::log(2.0));
        const double estimate = plug_in - bias;

        double var = 0.0;
        for (const auto& [ab, c] : counts) {
            const double p = static_cast<double>(c) / samples;
            const double pa = static_cast<double>(a_mass[ab.first]) / samples;
            const double pb = static_cast<double>(b_mass[ab.second]) / samples;
            const double f = std::log2(p / (pa * pb));
            var += p * f * f;
        }
        var -= plug_in * plug_in;
        const double stderr_mi = std::sqrt(var / samples);

        CHECK(std::abs(exact - estimate) < 3.0 * stderr_mi);
    }

    TEST_CASE("mutual_info_ae_unbiased limiting cases") {
        const auto scheme = tri_block_scheme(0.25);
        CHECK(std::abs(mutual_info_ae_unbiased(scheme, 1.0)) < 1e-12);

        // a size-2 block has union space == true space
        const auto minimal = parse_scheme("2:1", Modulation(ModKind::Bpsk, 0.25));
        for (double eta : {0.2, 0.5, 0.9})
            CHECK(std::abs(mutual_info_ae_unbiased(minimal, eta) -
                           mutual_info_ab(minimal, 1.0 - eta)) < 1e-12);

        // invalid-pattern outcomes degrade the interceptor
        CHECK(mutual_info_ae_unbiased(scheme, 0.5) < mutual_info_ab(scheme, 0.5));
    }

    TEST_CASE("mutual_info_ae_unbiased equals the global-joint oracle") {
        for (const char* spec : {"2:1,3:1", "3:1,3:2"}) {
            const auto scheme = parse_scheme(spec, Modulation(ModKind::Bpsk, 0.25));
            for (double eta : {0.3, 0.7})
                CHECK(std::abs(mutual_info_ae_unbiased(scheme, eta) -
                               global_mi_oracle(scheme, eta, true)) < 1e-9);
        }
    }

    TEST_CASE("target-count inference") {
        // size-2 blocks are free: the factor is exactly one
        const auto minimal = parse_scheme("2:1,2:1", Modulation(ModKind::Bpsk, 0.25));
        for (double eta : {0.0, 0.3, 0.8, 1.0})
            CHECK(k_inference_prob(minimal, eta) == 1.0);

        // vacuum interception of a size-3 block: outcomes uniform over the
        // six union patterns, three of which carry one target
        const Eigen::VectorXd dist = block_weight_inference(
            3, 1, Modulation(ModKind::Bpsk, 0.25), ChannelParams(1.0, ChannelSide::Eve));
        CHECK(std::abs(dist[0] - 0.5) < 1e-9);
        CHECK(std::abs(dist[1] - 0.5) < 1e-9);
        CHECK(std::abs(dist.sum() - 1.0) < 1e-9);

        // near-orthogonal interception pins the target count
        CHECK(k_inference_prob(tri_block_scheme(20.0), 0.1) > 0.999);
    }

    TEST_CASE("p_dec stays in [0,1] and grows with signal energy") {
        for (double eta : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            double previous = 0.0;
            for (double ns : {0.1, 0.5, 1.0, 2.0, 3.0}) {
                const double p = k_inference_prob(tri_block_scheme(ns), eta);
                CHECK(p >= 0.0);
                CHECK(p <= 1.0);
                CHECK(p >= previous - 1e-9);
                previous = p;
            }
        }
    }

    TEST_CASE("rate tiers: worked cases") {
        const auto scheme = tri_block_scheme(0.25);
        CHECK(rate_individual(scheme, 0.5) == 0.0);
        CHECK(rate_collective(scheme, 1.0) == doctest::Approx(mutual_info_ab(scheme, 1.0)));
        CHECK(rate_collective(scheme, 1.0) > 0.0);
        CHECK(rate_probabilistic(scheme, 0.15) > 0.0);
    }

    TEST_CASE("rate hierarchy and Holevo dominance on a grid") {
        for (double ns : {0.25, 0.5, 1.5}) {
            const auto scheme = tri_block_scheme(ns);
            const ImageSpace space = build_image_space(scheme);
            for (double eta = 0.05; eta < 1.0; eta += 0.15) {
                const double r_coll = rate_collective(scheme, eta);
                const double r_ind = rate_individual(scheme, eta);
                const double r_pr = rate_probabilistic(scheme, eta);
                CHECK(r_coll <= r_ind + 1e-9);
                CHECK(r_ind <= r_pr + 1e-9);

                const double i_ae = mutual_info_ab(scheme, 1.0 - eta);
                const double chi = holevo(space, Priors::uniform(space.size()),
                                          ChannelParams(eta, ChannelSide::Eve));
                CHECK(i_ae <= chi + 1e-9);
            }
        }
    }

    TEST_CASE("collective-tier Holevo equals the per-block entropy sum") {
        // the product ensemble's average state is a tensor product, so its
        // entropy is additive over blocks
        const auto scheme = tri_block_scheme(0.5);
        const ImageSpace space = build_image_space(scheme);
        const double eta = 0.35;
        const double global = holevo(space, Priors::uniform(space.size()),
                                     ChannelParams(eta, ChannelSide::Eve));
        double blockwise = 0.0;
        for (auto [size, k] : {std::pair{3, 1}, {5, 2}, {3, 1}}) {
            const ImageSpace block = enumerate_ktpf(size, k, scheme.modulation());
            blockwise += holevo(block, Priors::uniform(block.size()),
                                ChannelParams(eta, ChannelSide::Eve));
        }
        CHECK(std::abs(global - blockwise) < 1e-9);
    }
}
