// Dataset ingestion: Iris from CSV (stratified 100/50 split, z-scored with
// train statistics) and MNIST from big-endian IDX files (pixels scaled to
// [0,1], optional stratified subsampling).
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qtrain/network.hpp"

namespace qtrain {

struct Dataset {
    std::vector<std::vector<double>> features;
    std::vector<int> labels;
    int class_count = 0;
    TensorShape sample_shape;

    std::size_t size() const { return labels.size(); }
};

struct DatasetSplit {
    Dataset train;
    Dataset test;
};

// 150 rows of 4 floats + class name; class names map to indices in order of
// first appearance.
DatasetSplit load_iris(const std::string& csv_path, std::uint64_t seed);

// Raw IDX containers (image magic 0x00000803, label magic 0x00000801).
struct IdxImages {
    std::uint32_t count = 0, rows = 0, cols = 0;
    std::vector<std::uint8_t> pixels;  // count*rows*cols bytes
};

IdxImages read_idx_images(const std::string& path);
std::vector<std::uint8_t> read_idx_labels(const std::string& path);
void write_idx_images(const std::string& path, const IdxImages& images);
void write_idx_labels(const std::string& path, const std::vector<std::uint8_t>& labels);

// Expects the standard file names (train-images-idx3-ubyte, ...) inside dir.
// limit <= 0 keeps the full split; otherwise a seeded class-stratified
// subsample of that many samples is taken.
DatasetSplit load_mnist(const std::string& dir, int train_limit, int test_limit,
                        std::uint64_t seed);

}  // namespace qtrain
