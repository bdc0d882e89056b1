#include "qpatt/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace qpatt {

Pattern::Pattern(std::vector<std::uint8_t> symbols, int symbol_count)
    : symbols_(std::move(symbols)), symbol_count_(symbol_count) {
    if (symbols_.empty())
        throw std::invalid_argument("Pattern: at least one mode required");
    if (symbol_count_ < 2)
        throw std::invalid_argument("Pattern: symbol alphabet must have k >= 2");
    for (auto s : symbols_)
        if (s >= symbol_count_)
            throw std::invalid_argument("Pattern: symbol out of alphabet range");
}

std::uint8_t Pattern::symbol(int mode) const {
    if (mode < 0 || mode >= modes())
        throw std::out_of_range("Pattern: mode index out of range");
    return symbols_[static_cast<std::size_t>(mode)];
}

int Pattern::weight() const {
    return static_cast<int>(std::count_if(symbols_.begin(), symbols_.end(),
                                          [](std::uint8_t s) { return s != 0; }));
}

std::string Pattern::to_string() const {
    std::string out;
    out.reserve(symbols_.size());
    for (auto s : symbols_)
        out.push_back(static_cast<char>('0' + s));
    return out;
}

Pattern Pattern::from_string(const std::string& text) {
    std::vector<std::uint8_t> symbols;
    symbols.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1')
            throw std::invalid_argument("Pattern::from_string: expected only '0'/'1'");
        symbols.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return Pattern(std::move(symbols));
}

Modulation::Modulation(ModKind k, double ns) : kind(k), mean_photons(ns) {
    if (!(ns >= 0.0))
        throw std::invalid_argument("Modulation: mean photon number must be >= 0");
}

double Modulation::base_amplitude(std::uint8_t symbol) const {
    const double a = std::sqrt(mean_photons);
    switch (kind) {
    case ModKind::Bpsk:
        return symbol == 0 ? -a : a;
    case ModKind::Bam:
        return symbol == 0 ? 0.0 : a;
    }
    throw std::logic_error("Modulation: unknown kind");
}

ChannelParams::ChannelParams(double eta, ChannelSide s) : transmissivity(eta), side(s) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument("ChannelParams: transmissivity must lie in [0, 1]");
}

ImageSpace::ImageSpace(std::vector<Pattern> patterns, Modulation modulation)
    : patterns_(std::move(patterns)), modulation_(modulation) {
    if (patterns_.empty())
        throw std::invalid_argument("ImageSpace: at least one pattern required");
    const int m = patterns_.front().modes();
    for (const auto& p : patterns_)
        if (p.modes() != m)
            throw std::invalid_argument("ImageSpace: patterns differ in length");
    std::set<Pattern> distinct(patterns_.begin(), patterns_.end());
    if (distinct.size() != patterns_.size())
        throw std::invalid_argument("ImageSpace: duplicate patterns");
}

double amplitude(const Pattern& pattern, int mode, const Modulation& mod,
                 const ChannelParams& channel) {
    const double alpha = mod.base_amplitude(pattern.symbol(mode));
    return std::sqrt(channel.effective_transmissivity()) * alpha;
}

std::vector<Pattern> fixed_weight_patterns(int m, int k) {
    if (m < 2)
        throw std::invalid_argument("fixed_weight_patterns: need at least two modes");
    if (k < 1 || k > m - 1)
        throw std::invalid_argument(
            "fixed_weight_patterns: target count must satisfy 1 <= k <= m-1");

    std::vector<Pattern> out;
    // walk the k-subsets of {0..m-1} in lexicographic order
    std::vector<int> positions(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        positions[static_cast<std::size_t>(i)] = i;
    while (true) {
        std::vector<std::uint8_t> symbols(static_cast<std::size_t>(m), 0);
        for (int p : positions)
            symbols[static_cast<std::size_t>(p)] = 1;
        out.emplace_back(std::move(symbols));

        int i = k - 1;
        while (i >= 0 && positions[static_cast<std::size_t>(i)] == m - k + i)
            --i;
        if (i < 0)
            break;
        ++positions[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            positions[static_cast<std::size_t>(j)] = positions[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

ImageSpace enumerate_ktpf(int m, int k, const Modulation& mod) {
    return ImageSpace(fixed_weight_patterns(m, k), mod);
}

bool is_gus_ktpf(const ImageSpace& space) {
    const int w = space.pattern(0).weight();
    for (const auto& p : space.patterns())
        if (p.weight() != w)
            return false;
    const int m = space.modes();
    if (w < 1 || w > m - 1)
        return false;
    // complete orbit iff the cardinality matches C(m, w); patterns are distinct
    double expected = 1.0;
    for (int i = 0; i < w; ++i) {
        expected = expected * static_cast<double>(m - i) / static_cast<double>(i + 1);
        if (expected > 2.1e9) // cannot match any in-memory space
            return false;
    }
    return space.size() == static_cast<int>(expected + 0.5);
}

} // namespace qpatt
