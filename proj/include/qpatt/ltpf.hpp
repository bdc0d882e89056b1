// Localised target position finding: block-partitioned mode layouts with a
// fixed target count per block, the codebooks they induce, mutual
// informations for the legitimate receiver and for an interceptor who knows
// only the locality structure, the target-count inference probability, and
// the secure-rate tiers built from all of these.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "qpatt/pattern.hpp"

namespace qpatt {

// Disjoint mode-index blocks covering {0..m-1}; every block has at least
// two modes so it can encode at least one bit.
class LocalityPartition {
  public:
    explicit LocalityPartition(std::vector<std::vector<int>> blocks);

    // blocks of the given sizes over consecutive mode indices
    static LocalityPartition contiguous(const std::vector<int>& sizes);

    int mode_count() const { return mode_count_; }
    int block_count() const { return static_cast<int>(blocks_.size()); }
    const std::vector<int>& block(int j) const { return blocks_[static_cast<std::size_t>(j)]; }
    const std::vector<std::vector<int>>& blocks() const { return blocks_; }

  private:
    std::vector<std::vector<int>> blocks_;
    int mode_count_ = 0;
};

// Target count per block: 1 <= k_j <= |s_j| - 1.
class TpfAssignment {
  public:
    explicit TpfAssignment(std::vector<int> targets);

    int size() const { return static_cast<int>(targets_.size()); }
    int target(int j) const { return targets_[static_cast<std::size_t>(j)]; }
    const std::vector<int>& targets() const { return targets_; }

  private:
    std::vector<int> targets_;
};

// The shared secret structure of the scheme: partition + assignment +
// modulation. The codebook cardinality Sigma is the product of per-block
// binomials; log2(Sigma) is the bits carried per transmitted pattern.
class LtpfScheme {
  public:
    LtpfScheme(LocalityPartition partition, TpfAssignment assignment, Modulation mod);

    const LocalityPartition& partition() const { return partition_; }
    const TpfAssignment& assignment() const { return assignment_; }
    const Modulation& modulation() const { return modulation_; }
    std::uint64_t sigma() const { return sigma_; }
    double bits_per_pattern() const;

    LtpfScheme with_mean_photons(double ns) const {
        return {partition_, assignment_, modulation_.with_mean_photons(ns)};
    }

  private:
    LocalityPartition partition_;
    TpfAssignment assignment_;
    Modulation modulation_;
    std::uint64_t sigma_;
};

// CLI scheme syntax "size:targets,size:targets,...", contiguous block
// layout (physically irrelevant under uniform channels).
LtpfScheme parse_scheme(const std::string& text, const Modulation& mod);

// The true codebook: Cartesian product over blocks of the per-block
// fixed-weight spaces, each sub-pattern placed at its block's mode indices.
// Ordered lexicographically over block tuples (first block slowest).
ImageSpace build_image_space(const LtpfScheme& scheme);

// Everything an interceptor who knows only the partition must consider:
// per block, the union of all admissible target counts 1..|s|-1 (that is
// 2^|s|-2 sub-patterns per block), combined across blocks like
// build_image_space.
ImageSpace eve_image_space(const LocalityPartition& partition, const Modulation& mod);

// Mutual information (bits) between transmitted and PGM-reconstructed
// patterns for a receiver who knows the scheme, at the stated Alice->Bob
// transmissivity. Uniform priors over the codebook.
double mutual_info_ab(const LtpfScheme& scheme, double eta);

// Mutual information (bits) retrieved by an interceptor on the 1-eta arm
// who measures with the union-space PGM (uniform priors over the union
// space) because the target counts are unknown to her.
double mutual_info_ae_unbiased(const LtpfScheme& scheme, double eta);

// Probability that the interceptor's union-space PGM outcomes reproduce the
// true target count in every block (her only route to the assignment).
double k_inference_prob(const LtpfScheme& scheme, double eta);

// Distribution over the inferred target count for one block: entry w-1 is
// the probability that a k-target sub-pattern is discriminated as some
// pattern of weight w, under the union-space PGM on the given channel arm.
Eigen::VectorXd block_weight_inference(int block_size, int targets, const Modulation& mod,
                                       const ChannelParams& channel);

// Secure-rate tiers. Rates may be negative; "secure" means > 0.
double rate_collective(const LtpfScheme& scheme, double eta);    // I_AB - chi_E
double rate_individual(const LtpfScheme& scheme, double eta);    // I_AB - I_E(same PGM)
double rate_probabilistic(const LtpfScheme& scheme, double eta); // I_AB - p_dec * I_E(union PGM)

} // namespace qpatt
