#include "qpatt/ltpf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "qpatt/ensemble.hpp"

namespace qpatt {

namespace {

std::uint64_t binomial_u64(int n, int k) {
    std::uint64_t r = 1;
    for (int i = 0; i < k; ++i) {
        r = r * static_cast<std::uint64_t>(n - i);
        r /= static_cast<std::uint64_t>(i + 1);
    }
    return r;
}

// Sub-pattern lists for one block of the union space: all admissible target
// counts 1..size-1, concatenated in target-count order.
std::vector<Pattern> union_block_patterns(int size) {
    std::vector<Pattern> out;
    for (int k = 1; k <= size - 1; ++k) {
        auto part = fixed_weight_patterns(size, k);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

// Cartesian product of per-block sub-pattern lists, composed onto the full
// mode layout; first block varies slowest.
std::vector<Pattern> compose_product(const LocalityPartition& partition,
                                     const std::vector<std::vector<Pattern>>& block_patterns) {
    const int n = partition.block_count();
    const int m = partition.mode_count();
    std::size_t total = 1;
    for (const auto& list : block_patterns)
        total *= list.size();

    std::vector<Pattern> out;
    out.reserve(total);
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    while (true) {
        std::vector<std::uint8_t> symbols(static_cast<std::size_t>(m), 0);
        for (int j = 0; j < n; ++j) {
            const auto& modes = partition.block(j);
            const Pattern& sub = block_patterns[static_cast<std::size_t>(j)][idx[static_cast<std::size_t>(j)]];
            for (int i = 0; i < static_cast<int>(modes.size()); ++i)
                symbols[static_cast<std::size_t>(modes[static_cast<std::size_t>(i)])] = sub.symbol(i);
        }
        out.emplace_back(std::move(symbols));

        int j = n - 1;
        while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == block_patterns[static_cast<std::size_t>(j)].size()) {
            idx[static_cast<std::size_t>(j)] = 0;
            --j;
        }
        if (j < 0)
            break;
    }
    return out;
}

// Mutual information (bits) of a joint with uniform priors over rows and
// the given row-stochastic conditional. Unreachable outcomes (zero column
// mass) contribute nothing.
double mi_uniform_rows(const Eigen::MatrixXd& cond) {
    const Eigen::Index na = cond.rows();
    const Eigen::VectorXd outcome = cond.colwise().sum() / static_cast<double>(na);
    double acc = 0.0;
    for (Eigen::Index a = 0; a < na; ++a) {
        for (Eigen::Index e = 0; e < cond.cols(); ++e) {
            const double joint = cond(a, e) / static_cast<double>(na);
            if (joint > 0.0 && outcome[e] > 0.0)
                acc += joint * std::log2(joint / outcome[e]); // log2 p(a|e)
        }
    }
    const double bits = std::log2(static_cast<double>(na)) + acc;
    return std::clamp(bits, 0.0, std::log2(static_cast<double>(na)));
}

// Union-space PGM conditional for one block, rows restricted to the
// true-target-count sub-patterns, plus the outcome mass under the
// interceptor's model (all union inputs equally likely, target counts
// unknown). Also reports the weight of every union outcome so target-count
// inference can bucket columns.
struct BlockUnionStats {
    Eigen::MatrixXd cond_true_rows;    // N_k x N_union
    Eigen::VectorXd model_column_mass; // sum of P(outcome|input) over all union inputs
    std::vector<int> outcome_weight;
};

BlockUnionStats block_union_stats(int block_size, int targets, const Modulation& mod,
                                  const ChannelParams& channel) {
    const auto union_patterns = union_block_patterns(block_size);
    ImageSpace union_space(union_patterns, mod);
    const Eigen::MatrixXd cond = pgm_conditional(gram(union_space, channel));

    int offset = 0;
    for (int k = 1; k < targets; ++k)
        offset += static_cast<int>(binomial_u64(block_size, k));
    const int count = static_cast<int>(binomial_u64(block_size, targets));

    BlockUnionStats stats;
    stats.cond_true_rows = cond.middleRows(offset, count);
    stats.model_column_mass = cond.colwise().sum();
    stats.outcome_weight.reserve(union_patterns.size());
    for (const auto& p : union_patterns)
        stats.outcome_weight.push_back(p.weight());
    return stats;
}

} // namespace

LocalityPartition::LocalityPartition(std::vector<std::vector<int>> blocks)
    : blocks_(std::move(blocks)) {
    if (blocks_.empty())
        throw std::invalid_argument("LocalityPartition: at least one block required");
    std::set<int> seen;
    for (const auto& b : blocks_) {
        if (b.size() < 2)
            throw std::invalid_argument("LocalityPartition: every block needs at least 2 modes");
        for (int mode : b) {
            if (mode < 0)
                throw std::invalid_argument("LocalityPartition: negative mode index");
            if (!seen.insert(mode).second)
                throw std::invalid_argument("LocalityPartition: blocks are not disjoint");
        }
    }
    mode_count_ = static_cast<int>(seen.size());
    if (*seen.rbegin() != mode_count_ - 1)
        throw std::invalid_argument("LocalityPartition: blocks must cover 0..m-1 exactly");
}

LocalityPartition LocalityPartition::contiguous(const std::vector<int>& sizes) {
    std::vector<std::vector<int>> blocks;
    int next = 0;
    for (int size : sizes) {
        std::vector<int> block(static_cast<std::size_t>(std::max(size, 0)));
        std::iota(block.begin(), block.end(), next);
        next += size;
        blocks.push_back(std::move(block));
    }
    return LocalityPartition(std::move(blocks));
}

TpfAssignment::TpfAssignment(std::vector<int> targets) : targets_(std::move(targets)) {
    if (targets_.empty())
        throw std::invalid_argument("TpfAssignment: empty");
    for (int k : targets_)
        if (k < 1)
            throw std::invalid_argument("TpfAssignment: target counts must be >= 1");
}

LtpfScheme::LtpfScheme(LocalityPartition partition, TpfAssignment assignment, Modulation mod)
    : partition_(std::move(partition)), assignment_(std::move(assignment)), modulation_(mod) {
    if (partition_.block_count() != assignment_.size())
        throw std::invalid_argument("LtpfScheme: one target count per block required");
    sigma_ = 1;
    for (int j = 0; j < partition_.block_count(); ++j) {
        const int size = static_cast<int>(partition_.block(j).size());
        const int k = assignment_.target(j);
        if (k > size - 1)
            throw std::invalid_argument("LtpfScheme: target count must be <= block size - 1");
        sigma_ *= binomial_u64(size, k);
    }
}

double LtpfScheme::bits_per_pattern() const {
    return std::log2(static_cast<double>(sigma_));
}

LtpfScheme parse_scheme(const std::string& text, const Modulation& mod) {
    std::vector<int> sizes;
    std::vector<int> targets;
    std::size_t pos = 0;
    int block_no = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string token = text.substr(pos, comma - pos);
        ++block_no;
        const auto fail = [&](const std::string& why) {
            throw std::invalid_argument("scheme block " + std::to_string(block_no) + " '" +
                                        token + "': " + why);
        };
        const std::size_t colon = token.find(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 == token.size())
            fail("expected 'size:targets'");
        int size = 0, k = 0;
        try {
            size = std::stoi(token.substr(0, colon));
            k = std::stoi(token.substr(colon + 1));
        } catch (const std::exception&) {
            fail("expected integers");
        }
        if (size < 2)
            fail("block size must be >= 2");
        if (k < 1 || k > size - 1)
            fail("target count must satisfy 1 <= k <= size-1");
        sizes.push_back(size);
        targets.push_back(k);
        if (comma == text.size())
            break;
        pos = comma + 1;
    }
    return LtpfScheme(LocalityPartition::contiguous(sizes), TpfAssignment(std::move(targets)),
                      mod);
}

ImageSpace build_image_space(const LtpfScheme& scheme) {
    std::vector<std::vector<Pattern>> block_patterns;
    for (int j = 0; j < scheme.partition().block_count(); ++j)
        block_patterns.push_back(
            fixed_weight_patterns(static_cast<int>(scheme.partition().block(j).size()),
                                  scheme.assignment().target(j)));
    return ImageSpace(compose_product(scheme.partition(), block_patterns), scheme.modulation());
}

ImageSpace eve_image_space(const LocalityPartition& partition, const Modulation& mod) {
    std::vector<std::vector<Pattern>> block_patterns;
    for (int j = 0; j < partition.block_count(); ++j)
        block_patterns.push_back(
            union_block_patterns(static_cast<int>(partition.block(j).size())));
    return ImageSpace(compose_product(partition, block_patterns), mod);
}

double mutual_info_ab(const LtpfScheme& scheme, double eta) {
    // Blocks ride independent sub-channels with independent uniform inputs,
    // so the joint factorizes and the global mutual information is the sum
    // of per-block terms.
    const ChannelParams channel(eta, ChannelSide::Bob);
    double bits = 0.0;
    for (int j = 0; j < scheme.partition().block_count(); ++j) {
        const int size = static_cast<int>(scheme.partition().block(j).size());
        const ImageSpace block_space =
            enumerate_ktpf(size, scheme.assignment().target(j), scheme.modulation());
        bits += mi_uniform_rows(pgm_conditional(gram(block_space, channel)));
    }
    return bits;
}

double mutual_info_ae_unbiased(const LtpfScheme& scheme, double eta) {
    // The interceptor cannot condition on the target counts she does not
    // know: her posterior weighs every union-space pattern as a possible
    // input, so invalid hypotheses soak up posterior mass and depress the
    // conditional term (this is what makes the attack weak at low
    // transmissivity). Floored at zero: discarding the measurement is
    // always available to her.
    const ChannelParams channel(eta, ChannelSide::Eve);
    double bits = 0.0;
    for (int j = 0; j < scheme.partition().block_count(); ++j) {
        const auto stats =
            block_union_stats(static_cast<int>(scheme.partition().block(j).size()),
                              scheme.assignment().target(j), scheme.modulation(), channel);
        const double n_true = static_cast<double>(stats.cond_true_rows.rows());
        double acc = 0.0;
        for (Eigen::Index a = 0; a < stats.cond_true_rows.rows(); ++a) {
            for (Eigen::Index e = 0; e < stats.cond_true_rows.cols(); ++e) {
                const double p = stats.cond_true_rows(a, e);
                if (p > 0.0 && stats.model_column_mass[e] > 0.0)
                    acc += p / n_true * std::log2(p / stats.model_column_mass[e]);
            }
        }
        bits += std::log2(n_true) + acc;
    }
    return std::clamp(bits, 0.0, scheme.bits_per_pattern());
}

Eigen::VectorXd block_weight_inference(int block_size, int targets, const Modulation& mod,
                                       const ChannelParams& channel) {
    const auto stats = block_union_stats(block_size, targets, mod, channel);
    Eigen::VectorXd dist = Eigen::VectorXd::Zero(block_size - 1);
    const double rows = static_cast<double>(stats.cond_true_rows.rows());
    for (Eigen::Index a = 0; a < stats.cond_true_rows.rows(); ++a)
        for (Eigen::Index e = 0; e < stats.cond_true_rows.cols(); ++e)
            dist[stats.outcome_weight[static_cast<std::size_t>(e)] - 1] +=
                stats.cond_true_rows(a, e) / rows;
    return dist;
}

double k_inference_prob(const LtpfScheme& scheme, double eta) {
    const ChannelParams channel(eta, ChannelSide::Eve);
    double p = 1.0;
    for (int j = 0; j < scheme.partition().block_count(); ++j) {
        const int size = static_cast<int>(scheme.partition().block(j).size());
        if (size == 2)
            continue; // only one admissible target count: the factor is exactly 1
        const Eigen::VectorXd dist =
            block_weight_inference(size, scheme.assignment().target(j), scheme.modulation(),
                                   channel);
        p *= dist[scheme.assignment().target(j) - 1];
    }
    return std::clamp(p, 0.0, 1.0);
}

double rate_collective(const LtpfScheme& scheme, double eta) {
    const ImageSpace space = build_image_space(scheme);
    const double chi =
        holevo(space, Priors::uniform(space.size()), ChannelParams(eta, ChannelSide::Eve));
    return mutual_info_ab(scheme, eta) - chi;
}

double rate_individual(const LtpfScheme& scheme, double eta) {
    return mutual_info_ab(scheme, eta) - mutual_info_ab(scheme, 1.0 - eta);
}

double rate_probabilistic(const LtpfScheme& scheme, double eta) {
    return mutual_info_ab(scheme, eta) -
           k_inference_prob(scheme, eta) * mutual_info_ae_unbiased(scheme, eta);
}

} // namespace qpatt
