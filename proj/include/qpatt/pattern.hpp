// Coherent pattern basics: mode patterns, local binary modulations, image
// spaces, and the amplitude map through a lossy beam-splitter channel.
#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace qpatt {

// Classical index of a coherent pattern state: one local-modulation symbol
// per bosonic mode. Binary (k = 2) end to end in the shipped encodings;
// wider symbol alphabets are representable but not consumed by any
// operation.
class Pattern {
  public:
    explicit Pattern(std::vector<std::uint8_t> symbols, int symbol_count = 2);

    int modes() const { return static_cast<int>(symbols_.size()); }
    int symbol_count() const { return symbol_count_; }
    std::uint8_t symbol(int mode) const;
    const std::vector<std::uint8_t>& symbols() const { return symbols_; }

    // number of target (nonzero) symbols
    int weight() const;

    std::string to_string() const;
    static Pattern from_string(const std::string& text);

    friend bool operator==(const Pattern& a, const Pattern& b) {
        return a.symbols_ == b.symbols_;
    }
    friend auto operator<=>(const Pattern& a, const Pattern& b) {
        return a.symbols_ <=> b.symbols_;
    }

  private:
    std::vector<std::uint8_t> symbols_;
    int symbol_count_;
};

enum class ModKind { Bpsk, Bam };

// Local binary modulation of one mode.
//   BPSK: symbol 0 -> -sqrt(Ns), symbol 1 -> +sqrt(Ns)
//   BAM:  symbol 0 -> 0,         symbol 1 -> +sqrt(Ns)
struct Modulation {
    ModKind kind;
    double mean_photons; // Ns, photons per target mode

    Modulation(ModKind k, double ns);

    // amplitude before any channel loss
    double base_amplitude(std::uint8_t symbol) const;

    Modulation with_mean_photons(double ns) const { return {kind, ns}; }
};

enum class ChannelSide { Bob, Eve };

// Uniform pure-loss multichannel with a beam-splitter eavesdropper: Bob's
// arm has transmissivity eta, Eve's arm the complementary 1 - eta.
struct ChannelParams {
    double transmissivity; // eta in [0, 1]
    ChannelSide side;

    explicit ChannelParams(double eta, ChannelSide s = ChannelSide::Bob);

    double effective_transmissivity() const {
        return side == ChannelSide::Bob ? transmissivity : 1.0 - transmissivity;
    }
};

// Ordered collection of distinct, same-length patterns plus the modulation
// that turns them into a pure coherent-state ensemble. The stored order is
// fixed at construction so matrix indices stay reproducible.
class ImageSpace {
  public:
    ImageSpace(std::vector<Pattern> patterns, Modulation modulation);

    int size() const { return static_cast<int>(patterns_.size()); }
    int modes() const { return patterns_.front().modes(); }
    const Pattern& pattern(int i) const { return patterns_[static_cast<std::size_t>(i)]; }
    const std::vector<Pattern>& patterns() const { return patterns_; }
    const Modulation& modulation() const { return modulation_; }

  private:
    std::vector<Pattern> patterns_;
    Modulation modulation_;
};

// sqrt(eta_eff) * alpha_{symbol at mode}: the received amplitude on the
// requested arm of the beam splitter.
double amplitude(const Pattern& pattern, int mode, const Modulation& mod,
                 const ChannelParams& channel);

// All C(m, k) binary patterns with exactly k targets among m modes, ordered
// by their target-position sets (position-lexicographic, so (3,1) lists
// 100, 010, 001). Requires 1 <= k <= m-1 so a variable is actually encoded.
ImageSpace enumerate_ktpf(int m, int k, const Modulation& mod);

// Pattern list of enumerate_ktpf without the ImageSpace wrapper.
std::vector<Pattern> fixed_weight_patterns(int m, int k);

// True when the space is a complete fixed-weight orbit: every pattern has
// the same target count and all patterns of that count are present (the
// permutation-symmetry class that makes PGMs optimal for TPF ensembles).
bool is_gus_ktpf(const ImageSpace& space);

} // namespace qpatt

template <> struct std::hash<qpatt::Pattern> {
    std::size_t operator()(const qpatt::Pattern& p) const noexcept {
        // FNV-1a over the symbol bytes
        std::size_t h = 1469598103934665603ull;
        for (auto s : p.symbols()) {
            h ^= s;
            h *= 1099511628211ull;
        }
        return h;
    }
};
