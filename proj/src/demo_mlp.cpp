#include "xbar/demo_mlp.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "xbar/config.hpp"
#include "xbar/errors.hpp"
#include "xbar/mvm.hpp"
#include "xbar/weight_file.hpp"

namespace xbar {

namespace {

struct Fixture {
    WeightFile layer1;
    WeightFile layer2;
    std::vector<std::vector<long long>> samples;
    std::vector<int> labels;
    int input_bits = 4;
    int activation_shift = 0;
};

Fixture load_fixture(const std::string& dir) {
    Fixture fx;
    fx.layer1 = read_weight_file(dir + "/layer1.xbw");
    fx.layer2 = read_weight_file(dir + "/layer2.xbw");
    if (fx.layer2.weights.rows != fx.layer1.weights.cols)
        throw ValidationError("fixture: layer2 rows must equal layer1 columns");

    std::ifstream meta_in(dir + "/meta.json");
    if (!meta_in) throw ValidationError("fixture: missing meta.json in " + dir);
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(meta_in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("fixture meta.json: " + std::string(e.what()));
    }
    for (const auto& item : meta.items())
        if (item.key() != "input_bits" && item.key() != "activation_shift")
            throw ValidationError("fixture meta.json: unknown key '" + item.key() + "'");
    if (!meta.contains("input_bits") || !meta["input_bits"].is_number_integer())
        throw ValidationError("fixture meta.json: integer 'input_bits' required");
    if (!meta.contains("activation_shift") || !meta["activation_shift"].is_number_integer())
        throw ValidationError("fixture meta.json: integer 'activation_shift' required");
    fx.input_bits = meta["input_bits"].get<int>();
    fx.activation_shift = meta["activation_shift"].get<int>();
    if (fx.input_bits < 1 || fx.input_bits > 16 || fx.activation_shift < 0 ||
        fx.activation_shift > 62)
        throw ValidationError("fixture meta.json: values out of range");

    std::ifstream in(dir + "/samples.txt");
    if (!in) throw ValidationError("fixture: missing samples.txt in " + dir);
    int n = 0, dim = 0;
    if (!(in >> n >> dim) || n < 1 || dim < 1)
        throw ValidationError("fixture samples.txt: malformed header");
    if (dim != fx.layer1.weights.rows)
        throw ValidationError("fixture: sample width must equal layer1 rows");

    const long long top = (1LL << fx.input_bits) - 1;
    const int classes = fx.layer2.weights.cols;
    fx.samples.assign(n, std::vector<long long>(dim));
    fx.labels.resize(n);
    for (int i = 0; i < n; ++i) {
        for (int d = 0; d < dim; ++d) {
            if (!(in >> fx.samples[i][d]))
                throw ValidationError("fixture samples.txt: truncated at sample " +
                                      std::to_string(i));
            if (fx.samples[i][d] < 0 || fx.samples[i][d] > top)
                throw ValidationError("fixture samples.txt: input out of range");
        }
        if (!(in >> fx.labels[i]))
            throw ValidationError("fixture samples.txt: missing label at sample " +
                                  std::to_string(i));
        if (fx.labels[i] < 0 || fx.labels[i] >= classes)
            throw ValidationError("fixture samples.txt: label out of range");
    }
    return fx;
}

std::vector<long long> requantize(const std::vector<long long>& raw, int shift,
                                  long long top) {
    std::vector<long long> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        long long v = std::max(0LL, raw[i]) >> shift;
        out[i] = std::min(v, top);
    }
    return out;
}

int argmax(const std::vector<long long>& v) {
    return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

std::vector<long long> exact_mvm(const IntMatrix& w, const std::vector<long long>& x) {
    std::vector<long long> out(w.cols, 0);
    for (int c = 0; c < w.cols; ++c) {
        long long acc = 0;
        for (int r = 0; r < w.rows; ++r) acc += w.at(r, c) * x[r];
        out[c] = acc;
    }
    return out;
}

}  // namespace

MlpDemoResult demo_mlp(const std::string& fixture_dir, const MlpDemoOptions& opts) {
    const Fixture fx = load_fixture(fixture_dir);
    const long long act_top = (1LL << fx.input_bits) - 1;

    ExperimentConfig cfg;  // default 7 nm SRAM wires and bias
    cfg.zero_parasitics = opts.zero_parasitics;
    const WireModel wire = effective_wire_model(cfg);
    const CellTechnology tech = effective_technology(cfg);

    MlpDemoResult result;
    result.n_samples = static_cast<int>(fx.samples.size());

    // exact integer reference
    int exact_hits = 0;
    for (std::size_t i = 0; i < fx.samples.size(); ++i) {
        const auto h = requantize(exact_mvm(fx.layer1.weights, fx.samples[i]),
                                  fx.activation_shift, act_top);
        const auto logits = exact_mvm(fx.layer2.weights, h);
        if (argmax(logits) == fx.labels[i]) ++exact_hits;
    }
    result.exact_accuracy = static_cast<double>(exact_hits) / result.n_samples;

    const auto run_mapping = [&](Mapping mapping) {
        MvmSetup l1;
        l1.weights = fx.layer1.weights;
        l1.bits_per_weight = fx.layer1.bits;
        l1.signed_weights = fx.layer1.is_signed;
        l1.mapping = mapping;
        l1.wire = wire;
        l1.tech = tech;
        l1.bias = cfg.bias;

        MvmSetup l2 = l1;
        l2.weights = fx.layer2.weights;
        l2.bits_per_weight = fx.layer2.bits;
        l2.signed_weights = fx.layer2.is_signed;

        CrossbarInstance x1 = build_crossbar(l1);
        CrossbarInstance x2 = build_crossbar(l2);
        const auto s1 = make_groups(fx.layer1.weights.rows, 1, Strategy::Full);
        const auto s2 = make_groups(fx.layer2.weights.rows, 1, Strategy::Full);
        const AdcPolicy adc;

        int hits = 0;
        for (std::size_t i = 0; i < fx.samples.size(); ++i) {
            const MvmReport r1 = mvm_execute(l1, x1, fx.samples[i], fx.input_bits, s1, adc);
            const auto h = requantize(r1.measured, fx.activation_shift, act_top);
            const MvmReport r2 = mvm_execute(l2, x2, h, fx.input_bits, s2, adc);
            if (argmax(r2.measured) == fx.labels[i]) ++hits;
        }
        return static_cast<double>(hits) / result.n_samples;
    };

    result.baseline_accuracy = run_mapping(Mapping::Baseline);
    result.wagonn_accuracy = run_mapping(Mapping::Wagonn);
    return result;
}

}  // namespace xbar
