#include "qpatt/synthetic.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "qpatt/stream_rng.hpp"

namespace qpatt {

namespace {

constexpr int kSide = 28;

enum Segment { SegA = 1, SegB = 2, SegC = 4, SegD = 8, SegE = 16, SegF = 32, SegG = 64 };

// classic seven-segment encodings of 0..9
constexpr int kDigitSegments[10] = {
    SegA | SegB | SegC | SegD | SegE | SegF,        // 0
    SegB | SegC,                                    // 1
    SegA | SegB | SegG | SegE | SegD,               // 2
    SegA | SegB | SegG | SegC | SegD,               // 3
    SegF | SegG | SegB | SegC,                      // 4
    SegA | SegF | SegG | SegC | SegD,               // 5
    SegA | SegF | SegG | SegE | SegC | SegD,        // 6
    SegA | SegB | SegC,                             // 7
    SegA | SegB | SegC | SegD | SegE | SegF | SegG, // 8
    SegA | SegB | SegC | SegD | SegF | SegG,        // 9
};

void fill_rect(std::vector<std::uint8_t>& mask, int x0, int x1, int y0, int y1, int dx, int dy) {
    for (int y = y0 + dy; y < y1 + dy; ++y) {
        if (y < 0 || y >= kSide)
            continue;
        for (int x = x0 + dx; x < x1 + dx; ++x) {
            if (x < 0 || x >= kSide)
                continue;
            mask[static_cast<std::size_t>(y) * kSide + static_cast<std::size_t>(x)] = 1;
        }
    }
}

std::vector<std::uint8_t> draw_digit(int digit, int thickness, int dx, int dy) {
    std::vector<std::uint8_t> mask(kSide * kSide, 0);
    const int t = thickness;
    const int segments = kDigitSegments[digit];
    // glyph box roughly x in [6, 22], y in [4, 24]
    if (segments & SegA)
        fill_rect(mask, 7, 21, 4, 4 + t, dx, dy);
    if (segments & SegD)
        fill_rect(mask, 7, 21, 24 - t, 24, dx, dy);
    if (segments & SegG)
        fill_rect(mask, 7, 21, 14 - t / 2, 14 - t / 2 + t, dx, dy);
    if (segments & SegF)
        fill_rect(mask, 6, 6 + t, 4, 14, dx, dy);
    if (segments & SegB)
        fill_rect(mask, 22 - t, 22, 4, 14, dx, dy);
    if (segments & SegE)
        fill_rect(mask, 6, 6 + t, 14, 24, dx, dy);
    if (segments & SegC)
        fill_rect(mask, 22 - t, 22, 14, 24, dx, dy);
    return mask;
}

void write_u32_be(std::ostream& out, std::uint32_t v) {
    const unsigned char bytes[4] = {
        static_cast<unsigned char>(v >> 24),
        static_cast<unsigned char>(v >> 16),
        static_cast<unsigned char>(v >> 8),
        static_cast<unsigned char>(v),
    };
    out.write(reinterpret_cast<const char*>(bytes), 4);
}

} // namespace

GrayscaleDataset make_synthetic_digits(int count, std::uint64_t seed,
                                       std::uint64_t index_offset) {
    if (count < 1)
        throw std::invalid_argument("make_synthetic_digits: count must be positive");

    GrayscaleDataset data;
    data.rows = kSide;
    data.cols = kSide;
    data.images.reserve(static_cast<std::size_t>(count));
    data.labels.reserve(static_cast<std::size_t>(count));

    for (int i = 0; i < count; ++i) {
        StreamRng rng(seed, rng_domain::dataset, index_offset + static_cast<std::uint64_t>(i));
        const int digit = i % 10;
        const int thickness = 3 + static_cast<int>(rng.below(2));      // 3 or 4
        const int dx = static_cast<int>(rng.below(5)) - 2;             // -2..2
        const int dy = static_cast<int>(rng.below(5)) - 2;
        auto mask = draw_digit(digit, thickness, dx, dy);

        std::vector<std::uint8_t> image(mask.size());
        for (std::size_t p = 0; p < mask.size(); ++p) {
            bool on = mask[p] != 0;
            if (rng.uniform() < 0.015)
                on = !on;
            image[p] = on ? static_cast<std::uint8_t>(150 + rng.below(106))
                          : static_cast<std::uint8_t>(rng.below(100));
        }
        data.images.push_back(std::move(image));
        data.labels.push_back(static_cast<std::uint8_t>(digit));
    }
    return data;
}

void write_idx(const std::string& images_path, const std::string& labels_path,
               const GrayscaleDataset& data) {
    std::ofstream images(images_path, std::ios::binary);
    if (!images)
        throw std::runtime_error("write_idx: cannot open " + images_path);
    write_u32_be(images, 2051);
    write_u32_be(images, static_cast<std::uint32_t>(data.images.size()));
    write_u32_be(images, static_cast<std::uint32_t>(data.rows));
    write_u32_be(images, static_cast<std::uint32_t>(data.cols));
    for (const auto& image : data.images)
        images.write(reinterpret_cast<const char*>(image.data()),
                     static_cast<std::streamsize>(image.size()));

    std::ofstream labels(labels_path, std::ios::binary);
    if (!labels)
        throw std::runtime_error("write_idx: cannot open " + labels_path);
    write_u32_be(labels, 2049);
    write_u32_be(labels, static_cast<std::uint32_t>(data.labels.size()));
    labels.write(reinterpret_cast<const char*>(data.labels.data()),
                 static_cast<std::streamsize>(data.labels.size()));
}

void write_synthetic_idx_files(const std::string& dir, int train_count, int eval_count,
                               std::uint64_t seed) {
    std::filesystem::create_directories(dir);
    const auto base = std::filesystem::path(dir);
    // eval indices start far beyond any train index so the sets never share
    // a noise stream
    write_idx((base / "train-images-idx3-ubyte").string(),
              (base / "train-labels-idx1-ubyte").string(),
              make_synthetic_digits(train_count, seed, 0));
    write_idx((base / "t10k-images-idx3-ubyte").string(),
              (base / "t10k-labels-idx1-ubyte").string(),
              make_synthetic_digits(eval_count, seed, 1ull << 40));
}

} // namespace qpatt
