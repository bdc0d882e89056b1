// Deterministic synthetic digit dataset in IDX format: segment-drawn digit
// glyphs with per-sample shifts, stroke-width jitter and pixel noise. Used
// to drive the degenerate-coding pipeline when no external dataset is on
// disk; any real IDX pair is a drop-in replacement.
#pragma once

#include <cstdint>
#include <string>

#include "qpatt/mnist.hpp"

namespace qpatt {

// `count` samples with balanced labels; streams are keyed by (seed, domain,
// index) so train/eval sets generated from different domains never share
// noise.
GrayscaleDataset make_synthetic_digits(int count, std::uint64_t seed,
                                       std::uint64_t index_offset = 0);

// Standard IDX file pair.
void write_idx(const std::string& images_path, const std::string& labels_path,
               const GrayscaleDataset& data);

// Writes train-images-idx3-ubyte / train-labels-idx1-ubyte /
// t10k-images-idx3-ubyte / t10k-labels-idx1-ubyte under dir.
void write_synthetic_idx_files(const std::string& dir, int train_count, int eval_count,
                               std::uint64_t seed);

} // namespace qpatt
