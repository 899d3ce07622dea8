#pragma once

#include <string>

namespace xbar {

struct MlpDemoOptions {
    bool zero_parasitics = false;
};

struct MlpDemoResult {
    double exact_accuracy = 0.0;     // integer-arithmetic reference
    double baseline_accuracy = 0.0;  // non-ideal pipeline, rows as stored
    double wagonn_accuracy = 0.0;    // non-ideal pipeline, rows agglomerated
    int n_samples = 0;
};

// Classifies every fixture sample through the two-layer pipeline three ways.
// The fixture directory holds layer1.xbw, layer2.xbw, samples.txt
// ("<n> <dim>" header, then <dim> inputs and a label per line), and
// meta.json with input_bits and activation_shift. Hidden activations are
// relu'd, right-shifted by activation_shift, and clamped back to input_bits.
MlpDemoResult demo_mlp(const std::string& fixture_dir, const MlpDemoOptions& opts);

}  // namespace xbar
