#include "qtrain/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qtrain/rng.hpp"

namespace qtrain {
namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::uint32_t read_be32(std::istream& in) {
    std::uint8_t b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw std::runtime_error("idx: truncated header");
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) |
           std::uint32_t{b[3]};
}

void write_be32(std::ostream& out, std::uint32_t v) {
    const std::uint8_t b[4] = {static_cast<std::uint8_t>(v >> 24),
                               static_cast<std::uint8_t>(v >> 16),
                               static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

// Per-class index buckets in encounter order, each seeded-shuffled.
std::vector<std::vector<std::size_t>> class_buckets(const std::vector<int>& labels,
                                                    int class_count, SplitRng& rng) {
    std::vector<std::vector<std::size_t>> buckets(class_count);
    for (std::size_t i = 0; i < labels.size(); ++i) buckets[labels[i]].push_back(i);
    for (auto& b : buckets) rng.shuffle(b);
    return buckets;
}

// Picks `want` indices, spread across classes as evenly as possible (extras
// go to the lowest class indices).
std::vector<std::size_t> stratified_pick(const std::vector<std::vector<std::size_t>>& buckets,
                                         std::size_t want) {
    const std::size_t classes = buckets.size();
    std::vector<std::size_t> take(classes, want / classes);
    for (std::size_t c = 0; c < want % classes; ++c) ++take[c];
    std::vector<std::size_t> picked;
    picked.reserve(want);
    for (std::size_t c = 0; c < classes; ++c) {
        if (take[c] > buckets[c].size())
            throw std::runtime_error("dataset: class too small for stratified pick");
        picked.insert(picked.end(), buckets[c].begin(), buckets[c].begin() + take[c]);
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

}  // namespace

DatasetSplit load_iris(const std::string& csv_path, std::uint64_t seed) {
    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error("iris: cannot open " + csv_path);

    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::vector<std::string> class_names;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> feats;
        std::string name;
        while (std::getline(ss, cell, ',')) {
            if (feats.size() < 4)
                feats.push_back(std::stod(cell));
            else
                name = cell;
        }
        if (feats.size() != 4 || name.empty())
            throw std::runtime_error("iris: malformed row: " + line);
        auto it = std::find(class_names.begin(), class_names.end(), name);
        if (it == class_names.end()) {
            class_names.push_back(name);
            it = class_names.end() - 1;
        }
        rows.push_back(std::move(feats));
        labels.push_back(static_cast<int>(it - class_names.begin()));
    }
    if (rows.size() != 150 || class_names.size() != 3)
        throw std::runtime_error("iris: expected 150 rows over 3 classes");

    SplitRng rng(seed);
    auto buckets = class_buckets(labels, 3, rng);
    // 100 train / 50 test, split per class (34/33/33 train by the even-spread
    // rule, the complements go to test).
    std::vector<std::size_t> take(3, 100 / 3);
    for (std::size_t c = 0; c < 100 % 3; ++c) ++take[c];

    DatasetSplit split;
    for (int c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < buckets[c].size(); ++i) {
            Dataset& dst = i < take[c] ? split.train : split.test;
            dst.features.push_back(rows[buckets[c][i]]);
            dst.labels.push_back(c);
        }
    }
    for (Dataset* d : {&split.train, &split.test}) {
        d->class_count = 3;
        d->sample_shape = {4, 1, 1};
    }

    // z-score with statistics of the training split only
    for (int k = 0; k < 4; ++k) {
        double mean = 0.0;
        for (const auto& f : split.train.features) mean += f[k];
        mean /= static_cast<double>(split.train.size());
        double var = 0.0;
        for (const auto& f : split.train.features) var += (f[k] - mean) * (f[k] - mean);
        var /= static_cast<double>(split.train.size());
        const double sd = std::sqrt(var);
        for (Dataset* d : {&split.train, &split.test})
            for (auto& f : d->features) f[k] = (f[k] - mean) / sd;
    }
    return split;
}

IdxImages read_idx_images(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("idx: cannot open " + path);
    if (read_be32(in) != kImageMagic) throw std::runtime_error("idx: bad image magic in " + path);
    IdxImages img;
    img.count = read_be32(in);
    img.rows = read_be32(in);
    img.cols = read_be32(in);
    img.pixels.resize(std::size_t{img.count} * img.rows * img.cols);
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (!in) throw std::runtime_error("idx: truncated image data in " + path);
    return img;
}

std::vector<std::uint8_t> read_idx_labels(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("idx: cannot open " + path);
    if (read_be32(in) != kLabelMagic) throw std::runtime_error("idx: bad label magic in " + path);
    std::vector<std::uint8_t> labels(read_be32(in));
    in.read(reinterpret_cast<char*>(labels.data()), static_cast<std::streamsize>(labels.size()));
    if (!in) throw std::runtime_error("idx: truncated label data in " + path);
    return labels;
}

void write_idx_images(const std::string& path, const IdxImages& images) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("idx: cannot write " + path);
    write_be32(out, kImageMagic);
    write_be32(out, images.count);
    write_be32(out, images.rows);
    write_be32(out, images.cols);
    out.write(reinterpret_cast<const char*>(images.pixels.data()),
              static_cast<std::streamsize>(images.pixels.size()));
}

void write_idx_labels(const std::string& path, const std::vector<std::uint8_t>& labels) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("idx: cannot write " + path);
    write_be32(out, kLabelMagic);
    write_be32(out, static_cast<std::uint32_t>(labels.size()));
    out.write(reinterpret_cast<const char*>(labels.data()),
              static_cast<std::streamsize>(labels.size()));
}

namespace {

Dataset mnist_split(const IdxImages& images, const std::vector<std::uint8_t>& raw_labels,
                    int limit, SplitRng& rng) {
    if (images.count != raw_labels.size())
        throw std::runtime_error("mnist: image/label count mismatch");
    std::vector<int> labels(raw_labels.begin(), raw_labels.end());
    const int classes = 10;

    std::vector<std::size_t> keep;
    if (limit > 0 && static_cast<std::size_t>(limit) < labels.size()) {
        auto buckets = class_buckets(labels, classes, rng);
        keep = stratified_pick(buckets, static_cast<std::size_t>(limit));
    } else {
        keep.resize(labels.size());
        for (std::size_t i = 0; i < keep.size(); ++i) keep[i] = i;
    }

    Dataset d;
    d.class_count = classes;
    d.sample_shape = {1, static_cast<int>(images.rows), static_cast<int>(images.cols)};
    const std::size_t px = std::size_t{images.rows} * images.cols;
    d.features.reserve(keep.size());
    for (std::size_t i : keep) {
        std::vector<double> f(px);
        const std::uint8_t* src = images.pixels.data() + i * px;
        for (std::size_t k = 0; k < px; ++k) f[k] = static_cast<double>(src[k]) / 255.0;
        d.features.push_back(std::move(f));
        d.labels.push_back(labels[i]);
    }
    return d;
}

}  // namespace

DatasetSplit load_mnist(const std::string& dir, int train_limit, int test_limit,
                        std::uint64_t seed) {
    SplitRng rng(seed);
    DatasetSplit split;
    split.train = mnist_split(read_idx_images(dir + "/train-images-idx3-ubyte"),
                              read_idx_labels(dir + "/train-labels-idx1-ubyte"), train_limit, rng);
    split.test = mnist_split(read_idx_images(dir + "/t10k-images-idx3-ubyte"),
                             read_idx_labels(dir + "/t10k-labels-idx1-ubyte"), test_limit, rng);
    return split;
}

}  // namespace qtrain
