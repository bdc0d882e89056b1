// Degenerate (classifier-decoded) pattern coding over IDX image datasets:
// ingestion, binarization, the lossy bit-flip channel, reference
// classifiers, empirical confusion statistics and the information rates
// estimated from them.
#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpatt/pattern.hpp"
#include "qpatt/stream_rng.hpp"

namespace qpatt {

enum class IdxErrorKind { Io, BadMagic, Truncated, DimensionMismatch };

class IdxError : public std::runtime_error {
  public:
    IdxError(IdxErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    IdxErrorKind kind() const { return kind_; }

  private:
    IdxErrorKind kind_;
};

// Raw IDX payload before binarization: row-major 8-bit pixels plus labels.
struct GrayscaleDataset {
    int rows = 0;
    int cols = 0;
    std::vector<std::vector<std::uint8_t>> images;
    std::vector<std::uint8_t> labels;

    int size() const { return static_cast<int>(images.size()); }
};

// Binarized patterns with their class labels (alphabet 0..9).
class LabeledPatternSet {
  public:
    static constexpr int kClasses = 10;

    LabeledPatternSet(std::vector<Pattern> patterns, std::vector<std::uint8_t> labels);

    int size() const { return static_cast<int>(patterns_.size()); }
    const Pattern& pattern(int i) const { return patterns_[static_cast<std::size_t>(i)]; }
    int label(int i) const { return labels_[static_cast<std::size_t>(i)]; }
    const std::vector<Pattern>& patterns() const { return patterns_; }

  private:
    std::vector<Pattern> patterns_;
    std::vector<std::uint8_t> labels_;
};

// Parses the big-endian IDX pair (image magic 2051, label magic 2049).
// Distinct failures raise IdxError with the matching kind.
GrayscaleDataset load_idx(const std::string& images_path, const std::string& labels_path);

// pixel > threshold -> target symbol, else background
Pattern binarize(const std::vector<std::uint8_t>& image, int threshold = 127);
LabeledPatternSet binarize_set(const GrayscaleDataset& data, int threshold = 127);

// Per-mode bit-flip probability of a local Helstrom receiver on the lossy
// arm: (1 - sqrt(1 - exp(-kappa*eta*Ns)))/2, kappa = 4 for BPSK, 1 for BAM.
double mode_flip_prob(double eta, double ns, ModKind kind);

// One pattern through the channel: every mode flips independently with
// mode_flip_prob(eta, ns, kind). eta is the effective transmissivity of the
// receiving arm.
Pattern transmit(const Pattern& pattern, double eta, double ns, ModKind kind, StreamRng& rng);

// Decoder contract: deterministic predictions in 0..9 once fitted.
class Classifier {
  public:
    virtual ~Classifier() = default;
    virtual void fit(const LabeledPatternSet& training) = 0;
    virtual int predict(const Pattern& pattern) const = 0;
    bool fitted() const { return fitted_; }

  protected:
    bool fitted_ = false;
};

// Per-class mean of the training patterns; nearest centroid in squared
// Euclidean distance, lowest class index on ties.
class NearestCentroidClassifier : public Classifier {
  public:
    void fit(const LabeledPatternSet& training) override;
    int predict(const Pattern& pattern) const override;

  private:
    std::vector<std::vector<double>> centroids_;
    std::vector<bool> present_;
    int modes_ = 0;
};

// k-nearest neighbours under Hamming distance over bit-packed patterns.
// Majority vote; ties resolved by smaller summed distance, then lower class.
class KnnHammingClassifier : public Classifier {
  public:
    explicit KnnHammingClassifier(int k = 3);
    void fit(const LabeledPatternSet& training) override;
    int predict(const Pattern& pattern) const override;

  private:
    std::vector<std::uint64_t> packed_; // words_ per sample
    std::vector<std::uint8_t> labels_;
    int k_;
    int modes_ = 0;
    int words_ = 0;
};

enum class ClassifierKind { NearestCentroid, Knn3 };
std::unique_ptr<Classifier> make_classifier(ClassifierKind kind);

// Joint counts over (transmitted class, predicted class).
class ConfusionTable {
  public:
    static constexpr int kClasses = LabeledPatternSet::kClasses;

    void add(int true_class, int predicted_class, std::uint64_t count = 1);
    std::uint64_t count(int true_class, int predicted_class) const;
    std::uint64_t row_total(int true_class) const;
    std::uint64_t total() const;

    bool operator==(const ConfusionTable&) const = default;

  private:
    std::array<std::array<std::uint64_t, kClasses>, kClasses> counts_{};
};

// Transmits every evaluation pattern once through the side-resolved channel
// and tallies predictions. The per-pattern noise stream is keyed by
// (seed, channel side, pattern index), so the table is independent of
// iteration order and thread count. Several classifiers may score the same
// noisy patterns in one pass.
std::vector<ConfusionTable>
simulate_confusions(const std::vector<const Classifier*>& classifiers,
                    const LabeledPatternSet& eval, const ChannelParams& channel, double ns,
                    ModKind kind, std::uint64_t seed, int threads = 0);

ConfusionTable simulate_confusion(const Classifier& classifier, const LabeledPatternSet& eval,
                                  const ChannelParams& channel, double ns, ModKind kind,
                                  std::uint64_t seed, int threads = 0);

// log2(10) + sum p(cA,cB) log2 p(cA|cB) over empirical frequencies;
// zero-count cells contribute nothing; clamped to [0, log2 10].
double empirical_mutual_info(const ConfusionTable& table);

// Seeded stratified sample: size spread over the 10 classes as evenly as
// possible, at least one per class (so size >= 10).
LabeledPatternSet stratified_subset(const LabeledPatternSet& training, int size,
                                    std::uint64_t seed);

// One simulated security evaluation at a single seed: Bob's mutual
// information, an interceptor with Bob's codebook (symmetric), and an
// interceptor restricted to a stratified training subset (diminished). Both
// interceptor decoders score the same noisy interceptions.
struct AttackPoint {
    double i_ab = 0.0;
    double i_ae_sym = 0.0;
    double i_ae_dim = 0.0;
    ConfusionTable table_ab;
    ConfusionTable table_ae_sym;
    ConfusionTable table_ae_dim;
};

AttackPoint attack_point(const LabeledPatternSet& training, const LabeledPatternSet& eval,
                         double eta, double ns, ModKind kind, ClassifierKind classifier,
                         int eve_training_size, std::uint64_t seed, int threads = 0);

// I_AB(eta) - I_AE(1-eta) with the identical classifier kind fitted on the
// full training set for both sides.
double rate_symmetric(double eta, double ns, ModKind kind, ClassifierKind classifier,
                      const LabeledPatternSet& training, const LabeledPatternSet& eval,
                      std::uint64_t seed, int threads = 0);

// Same, but the interceptor's classifier is fitted on a seeded stratified
// subset of the requested size (10 = one exemplar per class).
double rate_diminished(double eta, double ns, ModKind kind, ClassifierKind classifier,
                       const LabeledPatternSet& training, const LabeledPatternSet& eval,
                       int eve_training_size, std::uint64_t seed, int threads = 0);

} // namespace qpatt
