// Minimal inference-only neural network: dense and conv2d layers with biases,
// max-pooling, relu/tanh/softmax activations. All trainable values live in a
// single flat weight vector with a canonical packing order, so the whole
// network can be driven by the quantum mapping.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qtrain {

struct DenseLayer {
    int in = 0;
    int out = 0;
};

struct Conv2dLayer {
    int in_channels = 0;
    int out_channels = 0;
    int kernel_h = 0;
    int kernel_w = 0;
};

struct MaxPool2dLayer {
    int window = 0;  // stride equals window
};

enum class ActivationKind { relu, tanh, softmax };

struct ActivationLayer {
    ActivationKind kind;
};

struct FlattenLayer {};

using Layer = std::variant<DenseLayer, Conv2dLayer, MaxPool2dLayer, ActivationLayer, FlattenLayer>;

// (channels, height, width); dense data uses channels = width = 1 semantics
// via the flat accessor below.
struct TensorShape {
    int channels = 1;
    int height = 1;
    int width = 1;

    int size() const { return channels * height * width; }
    bool operator==(const TensorShape&) const = default;
};

struct NetworkSpec {
    TensorShape input;
    std::vector<Layer> layers;

    int param_count() const;
    TensorShape output_shape() const;  // validates composition
    int class_count() const { return output_shape().size(); }
};

struct Prediction {
    std::vector<double> class_scores;
    int predicted_class = 0;
};

int layer_param_count(const Layer& layer);

// Canonical slot order: layers in declaration order; Dense packs the weight
// matrix row-major (out-major, in-minor) then biases; Conv2d packs filters as
// (out_ch, in_ch, row, col) then biases.
std::vector<std::string> pack_order(const NetworkSpec& spec);

std::vector<double> forward_raw(const NetworkSpec& spec, const std::vector<double>& weights,
                                const std::vector<double>& input);

// Forward pass ending in class scores; argmax ties resolve to the lowest
// class index.
Prediction forward(const NetworkSpec& spec, const std::vector<double>& weights,
                   const std::vector<double>& input);

// Parses the textual network description used in config files and weight
// headers, e.g. "input:4 dense:4:16 relu dense:16:3 softmax" or
// "input:1x28x28 conv:1:4:5:5 relu maxpool:2 flatten dense:128:44 ...".
NetworkSpec parse_network_spec(const std::string& text);
std::string format_network_spec(const NetworkSpec& spec);

}  // namespace qtrain
