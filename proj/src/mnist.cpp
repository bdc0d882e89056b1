#include "qpatt/mnist.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>

#include "qpatt/parallel.hpp"

namespace qpatt {

namespace {

constexpr std::uint32_t kImageMagic = 2051;
constexpr std::uint32_t kLabelMagic = 2049;

std::uint32_t read_u32_be(std::istream& in, const std::string& path) {
    unsigned char bytes[4];
    in.read(reinterpret_cast<char*>(bytes), 4);
    if (!in)
        throw IdxError(IdxErrorKind::Truncated, path + ": truncated header");
    return (std::uint32_t(bytes[0]) << 24) | (std::uint32_t(bytes[1]) << 16) |
           (std::uint32_t(bytes[2]) << 8) | std::uint32_t(bytes[3]);
}

} // namespace

LabeledPatternSet::LabeledPatternSet(std::vector<Pattern> patterns,
                                     std::vector<std::uint8_t> labels)
    : patterns_(std::move(patterns)), labels_(std::move(labels)) {
    if (patterns_.size() != labels_.size())
        throw std::invalid_argument("LabeledPatternSet: pattern/label count mismatch");
    if (patterns_.empty())
        throw std::invalid_argument("LabeledPatternSet: empty");
    for (auto l : labels_)
        if (l >= kClasses)
            throw std::invalid_argument("LabeledPatternSet: label outside alphabet");
}

GrayscaleDataset load_idx(const std::string& images_path, const std::string& labels_path) {
    std::ifstream images(images_path, std::ios::binary);
    if (!images)
        throw IdxError(IdxErrorKind::Io, images_path + ": cannot open");
    std::ifstream labels(labels_path, std::ios::binary);
    if (!labels)
        throw IdxError(IdxErrorKind::Io, labels_path + ": cannot open");

    if (read_u32_be(images, images_path) != kImageMagic)
        throw IdxError(IdxErrorKind::BadMagic, images_path + ": bad image magic");
    const std::uint32_t image_count = read_u32_be(images, images_path);
    const std::uint32_t rows = read_u32_be(images, images_path);
    const std::uint32_t cols = read_u32_be(images, images_path);

    if (read_u32_be(labels, labels_path) != kLabelMagic)
        throw IdxError(IdxErrorKind::BadMagic, labels_path + ": bad label magic");
    const std::uint32_t label_count = read_u32_be(labels, labels_path);

    if (image_count != label_count)
        throw IdxError(IdxErrorKind::DimensionMismatch,
                       images_path + ": image count does not match label count");
    if (rows == 0 || cols == 0 || rows > 4096 || cols > 4096)
        throw IdxError(IdxErrorKind::DimensionMismatch, images_path + ": implausible geometry");

    GrayscaleDataset data;
    data.rows = static_cast<int>(rows);
    data.cols = static_cast<int>(cols);
    const std::size_t pixels = static_cast<std::size_t>(rows) * cols;
    data.images.reserve(image_count);
    for (std::uint32_t i = 0; i < image_count; ++i) {
        std::vector<std::uint8_t> image(pixels);
        images.read(reinterpret_cast<char*>(image.data()), static_cast<std::streamsize>(pixels));
        if (!images)
            throw IdxError(IdxErrorKind::Truncated, images_path + ": truncated image data");
        data.images.push_back(std::move(image));
    }
    data.labels.resize(image_count);
    labels.read(reinterpret_cast<char*>(data.labels.data()),
                static_cast<std::streamsize>(image_count));
    if (!labels)
        throw IdxError(IdxErrorKind::Truncated, labels_path + ": truncated label data");
    return data;
}

Pattern binarize(const std::vector<std::uint8_t>& image, int threshold) {
    if (threshold < 0 || threshold > 255)
        throw std::invalid_argument("binarize: threshold must lie in [0, 255]");
    std::vector<std::uint8_t> symbols(image.size());
    for (std::size_t i = 0; i < image.size(); ++i)
        symbols[i] = image[i] > threshold ? 1 : 0;
    return Pattern(std::move(symbols));
}

LabeledPatternSet binarize_set(const GrayscaleDataset& data, int threshold) {
    std::vector<Pattern> patterns;
    patterns.reserve(data.images.size());
    for (const auto& image : data.images)
        patterns.push_back(binarize(image, threshold));
    return LabeledPatternSet(std::move(patterns), data.labels);
}

double mode_flip_prob(double eta, double ns, ModKind kind) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument("mode_flip_prob: eta must lie in [0, 1]");
    if (!(ns >= 0.0))
        throw std::invalid_argument("mode_flip_prob: mean photon number must be >= 0");
    const double kappa = kind == ModKind::Bpsk ? 4.0 : 1.0;
    return 0.5 * (1.0 - std::sqrt(1.0 - std::exp(-kappa * eta * ns)));
}

Pattern transmit(const Pattern& pattern, double eta, double ns, ModKind kind, StreamRng& rng) {
    const double p = mode_flip_prob(eta, ns, kind);
    std::vector<std::uint8_t> symbols = pattern.symbols();
    for (auto& s : symbols)
        if (rng.uniform() < p)
            s ^= 1;
    return Pattern(std::move(symbols));
}

void NearestCentroidClassifier::fit(const LabeledPatternSet& training) {
    modes_ = training.pattern(0).modes();
    centroids_.assign(LabeledPatternSet::kClasses,
                      std::vector<double>(static_cast<std::size_t>(modes_), 0.0));
    present_.assign(LabeledPatternSet::kClasses, false);
    std::array<std::uint64_t, LabeledPatternSet::kClasses> counts{};
    for (int i = 0; i < training.size(); ++i) {
        const int c = training.label(i);
        auto& centroid = centroids_[static_cast<std::size_t>(c)];
        const auto& symbols = training.pattern(i).symbols();
        for (int j = 0; j < modes_; ++j)
            centroid[static_cast<std::size_t>(j)] += symbols[static_cast<std::size_t>(j)];
        ++counts[static_cast<std::size_t>(c)];
    }
    for (int c = 0; c < LabeledPatternSet::kClasses; ++c) {
        if (counts[static_cast<std::size_t>(c)] == 0)
            continue;
        present_[static_cast<std::size_t>(c)] = true;
        for (auto& v : centroids_[static_cast<std::size_t>(c)])
            v /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
    }
    fitted_ = true;
}

int NearestCentroidClassifier::predict(const Pattern& pattern) const {
    if (!fitted_)
        throw std::logic_error("NearestCentroidClassifier: predict before fit");
    if (pattern.modes() != modes_)
        throw std::invalid_argument("NearestCentroidClassifier: pattern length mismatch");
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int c = 0; c < LabeledPatternSet::kClasses; ++c) {
        if (!present_[static_cast<std::size_t>(c)])
            continue;
        const auto& centroid = centroids_[static_cast<std::size_t>(c)];
        double dist = 0.0;
        for (int j = 0; j < modes_; ++j) {
            const double d =
                static_cast<double>(pattern.symbols()[static_cast<std::size_t>(j)]) -
                centroid[static_cast<std::size_t>(j)];
            dist += d * d;
        }
        if (dist < best_dist) {
            best_dist = dist;
            best = c;
        }
    }
    return best;
}

KnnHammingClassifier::KnnHammingClassifier(int k) : k_(k) {
    if (k < 1)
        throw std::invalid_argument("KnnHammingClassifier: k must be >= 1");
}

void KnnHammingClassifier::fit(const LabeledPatternSet& training) {
    modes_ = training.pattern(0).modes();
    words_ = (modes_ + 63) / 64;
    packed_.assign(static_cast<std::size_t>(training.size()) * words_, 0);
    labels_.resize(static_cast<std::size_t>(training.size()));
    for (int i = 0; i < training.size(); ++i) {
        const auto& symbols = training.pattern(i).symbols();
        for (int j = 0; j < modes_; ++j)
            if (symbols[static_cast<std::size_t>(j)])
                packed_[static_cast<std::size_t>(i) * words_ + j / 64] |= 1ull << (j % 64);
        labels_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(training.label(i));
    }
    fitted_ = true;
}

int KnnHammingClassifier::predict(const Pattern& pattern) const {
    if (!fitted_)
        throw std::logic_error("KnnHammingClassifier: predict before fit");
    if (pattern.modes() != modes_)
        throw std::invalid_argument("KnnHammingClassifier: pattern length mismatch");

    std::vector<std::uint64_t> query(static_cast<std::size_t>(words_), 0);
    for (int j = 0; j < modes_; ++j)
        if (pattern.symbols()[static_cast<std::size_t>(j)])
            query[static_cast<std::size_t>(j / 64)] |= 1ull << (j % 64);

    // (distance, index) of the current k best, kept sorted ascending
    const int n = static_cast<int>(labels_.size());
    const int k = std::min(k_, n);
    std::vector<std::pair<int, int>> best;
    best.reserve(static_cast<std::size_t>(k) + 1);
    for (int i = 0; i < n; ++i) {
        int dist = 0;
        const std::uint64_t* row = packed_.data() + static_cast<std::size_t>(i) * words_;
        for (int w = 0; w < words_; ++w)
            dist += std::popcount(row[w] ^ query[static_cast<std::size_t>(w)]);
        if (static_cast<int>(best.size()) < k || dist < best.back().first) {
            best.emplace_back(dist, i);
            std::sort(best.begin(), best.end());
            if (static_cast<int>(best.size()) > k)
                best.pop_back();
        }
    }

    std::array<int, LabeledPatternSet::kClasses> votes{};
    std::array<long long, LabeledPatternSet::kClasses> dist_sum{};
    for (const auto& [dist, idx] : best) {
        ++votes[labels_[static_cast<std::size_t>(idx)]];
        dist_sum[labels_[static_cast<std::size_t>(idx)]] += dist;
    }
    int winner = -1;
    for (int c = 0; c < LabeledPatternSet::kClasses; ++c) {
        if (votes[static_cast<std::size_t>(c)] == 0)
            continue;
        if (winner < 0 || votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(winner)] ||
            (votes[static_cast<std::size_t>(c)] == votes[static_cast<std::size_t>(winner)] &&
             dist_sum[static_cast<std::size_t>(c)] < dist_sum[static_cast<std::size_t>(winner)]))
            winner = c;
    }
    return winner;
}

std::unique_ptr<Classifier> make_classifier(ClassifierKind kind) {
    switch (kind) {
    case ClassifierKind::NearestCentroid:
        return std::make_unique<NearestCentroidClassifier>();
    case ClassifierKind::Knn3:
        return std::make_unique<KnnHammingClassifier>(3);
    }
    throw std::logic_error("make_classifier: unknown kind");
}

void ConfusionTable::add(int true_class, int predicted_class, std::uint64_t count) {
    counts_[static_cast<std::size_t>(true_class)][static_cast<std::size_t>(predicted_class)] +=
        count;
}

std::uint64_t ConfusionTable::count(int true_class, int predicted_class) const {
    return counts_[static_cast<std::size_t>(true_class)][static_cast<std::size_t>(predicted_class)];
}

std::uint64_t ConfusionTable::row_total(int true_class) const {
    const auto& row = counts_[static_cast<std::size_t>(true_class)];
    return std::accumulate(row.begin(), row.end(), std::uint64_t{0});
}

std::uint64_t ConfusionTable::total() const {
    std::uint64_t t = 0;
    for (int c = 0; c < kClasses; ++c)
        t += row_total(c);
    return t;
}

std::vector<ConfusionTable>
simulate_confusions(const std::vector<const Classifier*>& classifiers,
                    const LabeledPatternSet& eval, const ChannelParams& channel, double ns,
                    ModKind kind, std::uint64_t seed, int threads) {
    for (const Classifier* c : classifiers)
        if (c == nullptr || !c->fitted())
            throw std::logic_error("simulate_confusions: classifier not fitted");

    const double eta_eff = channel.effective_transmissivity();
    const std::uint64_t domain =
        channel.side == ChannelSide::Bob ? rng_domain::bob_channel : rng_domain::eve_channel;

    // per-evaluation-pattern predictions, then a deterministic reduction
    std::vector<std::uint8_t> predictions(static_cast<std::size_t>(eval.size()) *
                                          classifiers.size());
    parallel_for(eval.size(), threads, [&](int i) {
        StreamRng rng(seed, domain, static_cast<std::uint64_t>(i));
        const Pattern noisy = transmit(eval.pattern(i), eta_eff, ns, kind, rng);
        for (std::size_t c = 0; c < classifiers.size(); ++c)
            predictions[static_cast<std::size_t>(i) * classifiers.size() + c] =
                static_cast<std::uint8_t>(classifiers[c]->predict(noisy));
    });

    std::vector<ConfusionTable> tables(classifiers.size());
    for (int i = 0; i < eval.size(); ++i)
        for (std::size_t c = 0; c < classifiers.size(); ++c)
            tables[c].add(eval.label(i),
                          predictions[static_cast<std::size_t>(i) * classifiers.size() + c]);
    return tables;
}

ConfusionTable simulate_confusion(const Classifier& classifier, const LabeledPatternSet& eval,
                                  const ChannelParams& channel, double ns, ModKind kind,
                                  std::uint64_t seed, int threads) {
    return simulate_confusions({&classifier}, eval, channel, ns, kind, seed, threads).front();
}

double empirical_mutual_info(const ConfusionTable& table) {
    const double total = static_cast<double>(table.total());
    if (total <= 0.0)
        throw std::invalid_argument("empirical_mutual_info: empty table");

    std::array<double, ConfusionTable::kClasses> col_mass{};
    for (int a = 0; a < ConfusionTable::kClasses; ++a)
        for (int b = 0; b < ConfusionTable::kClasses; ++b)
            col_mass[static_cast<std::size_t>(b)] += static_cast<double>(table.count(a, b));

    const double log_alphabet = std::log2(static_cast<double>(ConfusionTable::kClasses));
    double acc = 0.0;
    for (int a = 0; a < ConfusionTable::kClasses; ++a) {
        for (int b = 0; b < ConfusionTable::kClasses; ++b) {
            const double joint = static_cast<double>(table.count(a, b)) / total;
            if (joint > 0.0)
                acc += joint * std::log2(joint * total / col_mass[static_cast<std::size_t>(b)]);
        }
    }
    return std::clamp(log_alphabet + acc, 0.0, log_alphabet);
}

LabeledPatternSet stratified_subset(const LabeledPatternSet& training, int size,
                                    std::uint64_t seed) {
    constexpr int classes = LabeledPatternSet::kClasses;
    if (size < classes)
        throw std::invalid_argument("stratified_subset: need at least one sample per class");

    std::vector<std::vector<int>> by_class(classes);
    for (int i = 0; i < training.size(); ++i)
        by_class[static_cast<std::size_t>(training.label(i))].push_back(i);

    std::vector<int> chosen;
    StreamRng rng(seed, rng_domain::subset_select, 0);
    for (int c = 0; c < classes; ++c) {
        auto& pool = by_class[static_cast<std::size_t>(c)];
        // lower class indices take the remainder, deterministically
        const int quota = size / classes + (c < size % classes ? 1 : 0);
        if (static_cast<int>(pool.size()) < quota)
            throw std::invalid_argument("stratified_subset: class " + std::to_string(c) +
                                        " has too few samples");
        for (int pick = 0; pick < quota; ++pick) {
            const std::size_t j =
                static_cast<std::size_t>(pick) +
                static_cast<std::size_t>(rng.below(pool.size() - static_cast<std::size_t>(pick)));
            std::swap(pool[static_cast<std::size_t>(pick)], pool[j]);
            chosen.push_back(pool[static_cast<std::size_t>(pick)]);
        }
    }

    std::vector<Pattern> patterns;
    std::vector<std::uint8_t> labels;
    patterns.reserve(chosen.size());
    for (int i : chosen) {
        patterns.push_back(training.pattern(i));
        labels.push_back(static_cast<std::uint8_t>(training.label(i)));
    }
    return LabeledPatternSet(std::move(patterns), std::move(labels));
}

AttackPoint attack_point(const LabeledPatternSet& training, const LabeledPatternSet& eval,
                         double eta, double ns, ModKind kind, ClassifierKind classifier,
                         int eve_training_size, std::uint64_t seed, int threads) {
    auto bob = make_classifier(classifier);
    bob->fit(training);
    auto eve_dim = make_classifier(classifier);
    eve_dim->fit(stratified_subset(training, eve_training_size, seed));

    AttackPoint point;
    point.table_ab = simulate_confusion(*bob, eval, ChannelParams(eta, ChannelSide::Bob), ns,
                                        kind, seed, threads);
    point.i_ab = empirical_mutual_info(point.table_ab);

    // one interception, two decoders
    const auto eve_tables = simulate_confusions({bob.get(), eve_dim.get()}, eval,
                                                ChannelParams(eta, ChannelSide::Eve), ns, kind,
                                                seed, threads);
    point.table_ae_sym = eve_tables[0];
    point.table_ae_dim = eve_tables[1];
    point.i_ae_sym = empirical_mutual_info(point.table_ae_sym);
    point.i_ae_dim = empirical_mutual_info(point.table_ae_dim);
    return point;
}

double rate_symmetric(double eta, double ns, ModKind kind, ClassifierKind classifier,
                      const LabeledPatternSet& training, const LabeledPatternSet& eval,
                      std::uint64_t seed, int threads) {
    auto bob = make_classifier(classifier);
    bob->fit(training);
    const double i_ab = empirical_mutual_info(simulate_confusion(
        *bob, eval, ChannelParams(eta, ChannelSide::Bob), ns, kind, seed, threads));
    const double i_ae = empirical_mutual_info(simulate_confusion(
        *bob, eval, ChannelParams(eta, ChannelSide::Eve), ns, kind, seed, threads));
    return i_ab - i_ae;
}

double rate_diminished(double eta, double ns, ModKind kind, ClassifierKind classifier,
                       const LabeledPatternSet& training, const LabeledPatternSet& eval,
                       int eve_training_size, std::uint64_t seed, int threads) {
    const AttackPoint point =
        attack_point(training, eval, eta, ns, kind, classifier, eve_training_size, seed, threads);
    return point.i_ab - point.i_ae_dim;
}

} // namespace qpatt
