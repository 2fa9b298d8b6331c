#include "qtrain/network.hpp"

#include <limits>
#include <sstream>

namespace qtrain {
namespace {

TensorShape layer_output_shape(const Layer& layer, const TensorShape& in) {
    if (const auto* d = std::get_if<DenseLayer>(&layer)) {
        if (in.size() != d->in)
            throw std::invalid_argument("network: dense input " + std::to_string(d->in) +
                                        " does not match incoming size " +
                                        std::to_string(in.size()));
        return {d->out, 1, 1};
    }
    if (const auto* c = std::get_if<Conv2dLayer>(&layer)) {
        if (in.channels != c->in_channels)
            throw std::invalid_argument("network: conv channel mismatch");
        const int oh = in.height - c->kernel_h + 1;
        const int ow = in.width - c->kernel_w + 1;
        if (oh < 1 || ow < 1) throw std::invalid_argument("network: conv kernel larger than input");
        return {c->out_channels, oh, ow};
    }
    if (const auto* p = std::get_if<MaxPool2dLayer>(&layer)) {
        if (p->window < 1) throw std::invalid_argument("network: bad pool window");
        if (in.height < p->window || in.width < p->window)
            throw std::invalid_argument("network: pool window larger than input");
        return {in.channels, in.height / p->window, in.width / p->window};
    }
    if (std::holds_alternative<FlattenLayer>(layer)) return {in.size(), 1, 1};
    return in;  // activation
}

}  // namespace

int layer_param_count(const Layer& layer) {
    if (const auto* d = std::get_if<DenseLayer>(&layer)) return d->in * d->out + d->out;
    if (const auto* c = std::get_if<Conv2dLayer>(&layer))
        return c->out_channels * c->in_channels * c->kernel_h * c->kernel_w + c->out_channels;
    return 0;
}

int NetworkSpec::param_count() const {
    int total = 0;
    for (const auto& layer : layers) total += layer_param_count(layer);
    return total;
}

TensorShape NetworkSpec::output_shape() const {
    TensorShape shape = input;
    for (const auto& layer : layers) shape = layer_output_shape(layer, shape);
    return shape;
}

std::vector<std::string> pack_order(const NetworkSpec& spec) {
    std::vector<std::string> slots;
    int layer_idx = 0;
    for (const auto& layer : spec.layers) {
        const std::string prefix = "L" + std::to_string(layer_idx) + ".";
        if (const auto* d = std::get_if<DenseLayer>(&layer)) {
            for (int o = 0; o < d->out; ++o)
                for (int i = 0; i < d->in; ++i)
                    slots.push_back(prefix + "W" + std::to_string(o) + "," + std::to_string(i));
            for (int o = 0; o < d->out; ++o) slots.push_back(prefix + "b" + std::to_string(o));
        } else if (const auto* c = std::get_if<Conv2dLayer>(&layer)) {
            for (int oc = 0; oc < c->out_channels; ++oc)
                for (int ic = 0; ic < c->in_channels; ++ic)
                    for (int r = 0; r < c->kernel_h; ++r)
                        for (int col = 0; col < c->kernel_w; ++col)
                            slots.push_back(prefix + "K" + std::to_string(oc) + "," +
                                            std::to_string(ic) + "," + std::to_string(r) + "," +
                                            std::to_string(col));
            for (int oc = 0; oc < c->out_channels; ++oc)
                slots.push_back(prefix + "b" + std::to_string(oc));
        }
        ++layer_idx;
    }
    return slots;
}

std::vector<double> forward_raw(const NetworkSpec& spec, const std::vector<double>& weights,
                                const std::vector<double>& input) {
    if (static_cast<int>(weights.size()) != spec.param_count())
        throw std::invalid_argument("network: weight vector length does not match param count");
    if (static_cast<int>(input.size()) != spec.input.size())
        throw std::invalid_argument("network: input size does not match spec");

    TensorShape shape = spec.input;
    std::vector<double> act = input;
    std::size_t w = 0;

    for (const auto& layer : spec.layers) {
        const TensorShape out_shape = layer_output_shape(layer, shape);
        if (const auto* d = std::get_if<DenseLayer>(&layer)) {
            std::vector<double> out(d->out);
            const double* wm = weights.data() + w;
            const double* bias = wm + static_cast<std::size_t>(d->in) * d->out;
            for (int o = 0; o < d->out; ++o) {
                double s = bias[o];
                const double* row = wm + static_cast<std::size_t>(o) * d->in;
                for (int i = 0; i < d->in; ++i) s += row[i] * act[i];
                out[o] = s;
            }
            act = std::move(out);
        } else if (const auto* c = std::get_if<Conv2dLayer>(&layer)) {
            // valid cross-correlation, stride 1
            std::vector<double> out(static_cast<std::size_t>(out_shape.size()));
            const int kh = c->kernel_h, kw = c->kernel_w;
            const std::size_t filter_sz = static_cast<std::size_t>(c->in_channels) * kh * kw;
            const double* kernels = weights.data() + w;
            const double* bias = kernels + filter_sz * c->out_channels;
            for (int oc = 0; oc < c->out_channels; ++oc) {
                const double* filt = kernels + filter_sz * oc;
                for (int oy = 0; oy < out_shape.height; ++oy)
                    for (int ox = 0; ox < out_shape.width; ++ox) {
                        double s = bias[oc];
                        for (int ic = 0; ic < c->in_channels; ++ic)
                            for (int r = 0; r < kh; ++r) {
                                const double* in_row =
                                    act.data() +
                                    (static_cast<std::size_t>(ic) * shape.height + oy + r) *
                                        shape.width +
                                    ox;
                                const double* f_row =
                                    filt + (static_cast<std::size_t>(ic) * kh + r) * kw;
                                for (int col = 0; col < kw; ++col) s += f_row[col] * in_row[col];
                            }
                        out[(static_cast<std::size_t>(oc) * out_shape.height + oy) *
                                out_shape.width +
                            ox] = s;
                    }
            }
            act = std::move(out);
        } else if (const auto* p = std::get_if<MaxPool2dLayer>(&layer)) {
            std::vector<double> out(static_cast<std::size_t>(out_shape.size()));
            const int win = p->window;
            for (int ch = 0; ch < shape.channels; ++ch)
                for (int oy = 0; oy < out_shape.height; ++oy)
                    for (int ox = 0; ox < out_shape.width; ++ox) {
                        double m = -std::numeric_limits<double>::infinity();
                        for (int r = 0; r < win; ++r)
                            for (int col = 0; col < win; ++col) {
                                const double v =
                                    act[(static_cast<std::size_t>(ch) * shape.height + oy * win +
                                         r) *
                                            shape.width +
                                        ox * win + col];
                                m = std::max(m, v);
                            }
                        out[(static_cast<std::size_t>(ch) * out_shape.height + oy) *
                                out_shape.width +
                            ox] = m;
                    }
            act = std::move(out);
        } else if (const auto* a = std::get_if<ActivationLayer>(&layer)) {
            switch (a->kind) {
                case ActivationKind::relu:
                    for (double& v : act) v = std::max(0.0, v);
                    break;
                case ActivationKind::tanh:
                    for (double& v : act) v = std::tanh(v);
                    break;
                case ActivationKind::softmax: {
                    const double m = *std::max_element(act.begin(), act.end());
                    double sum = 0.0;
                    for (double& v : act) {
                        v = std::exp(v - m);
                        sum += v;
                    }
                    for (double& v : act) v /= sum;
                    break;
                }
            }
        }
        shape = out_shape;
        w += layer_param_count(layer);
    }
    return act;
}

Prediction forward(const NetworkSpec& spec, const std::vector<double>& weights,
                   const std::vector<double>& input) {
    Prediction pred;
    pred.class_scores = forward_raw(spec, weights, input);
    pred.predicted_class = static_cast<int>(
        std::max_element(pred.class_scores.begin(), pred.class_scores.end()) -
        pred.class_scores.begin());
    return pred;
}

namespace {

std::vector<int> parse_int_fields(const std::string& token, const std::string& head) {
    std::vector<int> out;
    std::stringstream ss(token.substr(head.size()));
    std::string field;
    while (std::getline(ss, field, ':')) {
        if (field.empty()) continue;
        out.push_back(std::stoi(field));
    }
    return out;
}

}  // namespace

NetworkSpec parse_network_spec(const std::string& text) {
    NetworkSpec spec;
    bool have_input = false;
    std::stringstream ss(text);
    std::string token;
    while (ss >> token) {
        if (token.rfind("input:", 0) == 0) {
            std::string dims = token.substr(6);
            std::replace(dims.begin(), dims.end(), 'x', ' ');
            std::stringstream ds(dims);
            std::vector<int> v;
            int x;
            while (ds >> x) v.push_back(x);
            if (v.size() == 1)
                spec.input = {v[0], 1, 1};
            else if (v.size() == 3)
                spec.input = {v[0], v[1], v[2]};
            else
                throw std::invalid_argument("network spec: input wants 1 or 3 dims: " + token);
            have_input = true;
        } else if (token.rfind("dense:", 0) == 0) {
            const auto v = parse_int_fields(token, "dense:");
            if (v.size() != 2) throw std::invalid_argument("network spec: dense:in:out");
            spec.layers.push_back(DenseLayer{v[0], v[1]});
        } else if (token.rfind("conv:", 0) == 0) {
            const auto v = parse_int_fields(token, "conv:");
            if (v.size() != 4)
                throw std::invalid_argument("network spec: conv:in_ch:out_ch:kh:kw");
            spec.layers.push_back(Conv2dLayer{v[0], v[1], v[2], v[3]});
        } else if (token.rfind("maxpool:", 0) == 0) {
            const auto v = parse_int_fields(token, "maxpool:");
            if (v.size() != 1) throw std::invalid_argument("network spec: maxpool:window");
            spec.layers.push_back(MaxPool2dLayer{v[0]});
        } else if (token == "relu") {
            spec.layers.push_back(ActivationLayer{ActivationKind::relu});
        } else if (token == "tanh") {
            spec.layers.push_back(ActivationLayer{ActivationKind::tanh});
        } else if (token == "softmax") {
            spec.layers.push_back(ActivationLayer{ActivationKind::softmax});
        } else if (token == "flatten") {
            spec.layers.push_back(FlattenLayer{});
        } else {
            throw std::invalid_argument("network spec: unknown token '" + token + "'");
        }
    }
    if (!have_input) throw std::invalid_argument("network spec: missing input:...");
    spec.output_shape();  // validate composition
    return spec;
}

std::string format_network_spec(const NetworkSpec& spec) {
    std::ostringstream out;
    if (spec.input.height == 1 && spec.input.width == 1)
        out << "input:" << spec.input.channels;
    else
        out << "input:" << spec.input.channels << "x" << spec.input.height << "x"
            << spec.input.width;
    for (const auto& layer : spec.layers) {
        out << " ";
        if (const auto* d = std::get_if<DenseLayer>(&layer))
            out << "dense:" << d->in << ":" << d->out;
        else if (const auto* c = std::get_if<Conv2dLayer>(&layer))
            out << "conv:" << c->in_channels << ":" << c->out_channels << ":" << c->kernel_h << ":"
                << c->kernel_w;
        else if (const auto* p = std::get_if<MaxPool2dLayer>(&layer))
            out << "maxpool:" << p->window;
        else if (const auto* a = std::get_if<ActivationLayer>(&layer))
            out << (a->kind == ActivationKind::relu
                        ? "relu"
                        : a->kind == ActivationKind::tanh ? "tanh" : "softmax");
        else
            out << "flatten";
    }
    return out.str();
}

}  // namespace qtrain
