// Portable trained-model file: a small text header (format version, network
// descriptor, weight count, final gamma) followed by one decimal weight per
// line at full round-trip precision. Reading and evaluating these files needs
// no quantum simulation at all.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "qtrain/dataset.hpp"
#include "qtrain/network.hpp"

namespace qtrain {

struct ExportedModel {
    NetworkSpec spec;
    double gamma = 0.0;
    std::vector<double> weights;
};

void save_model(const std::string& path, const ExportedModel& model);
ExportedModel load_model(const std::string& path);

struct EvalResult {
    double accuracy = 0.0;
    std::vector<std::vector<long long>> confusion;  // [true][predicted]
};

EvalResult evaluate_model(const ExportedModel& model, const Dataset& data);

}  // namespace qtrain
