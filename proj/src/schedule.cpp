#include "xbar/schedule.hpp"

#include "xbar/errors.hpp"

namespace xbar {

std::string strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Full: return "Full";
        case Strategy::ConsecutivePWA: return "ConsecutivePWA";
        case Strategy::StridedDPWA: return "StridedDPWA";
    }
    return "Full";
}

Strategy strategy_from_name(const std::string& name) {
    if (name == "Full") return Strategy::Full;
    if (name == "ConsecutivePWA") return Strategy::ConsecutivePWA;
    if (name == "StridedDPWA") return Strategy::StridedDPWA;
    throw ValidationError("unknown schedule strategy: " + name);
}

ActivationSchedule make_groups(int n_rows, int n_groups, Strategy strategy) {
    if (n_rows < 1) throw ValidationError("make_groups: n_rows must be positive");
    if (n_groups < 1) throw ValidationError("make_groups: n_groups must be positive");
    if (n_rows % n_groups != 0)
        throw ValidationError("make_groups: n_groups must divide n_rows");
    if (strategy == Strategy::Full && n_groups != 1)
        throw ValidationError("make_groups: Full schedule takes exactly one group");

    ActivationSchedule s;
    s.n_rows = n_rows;
    s.strategy = strategy;
    s.groups.resize(n_groups);
    const int per_group = n_rows / n_groups;

    for (int g = 0; g < n_groups; ++g) {
        s.groups[g].reserve(per_group);
        if (strategy == Strategy::StridedDPWA) {
            for (int k = 0; k < per_group; ++k) s.groups[g].push_back(g + k * n_groups);
        } else {
            for (int k = 0; k < per_group; ++k) s.groups[g].push_back(g * per_group + k);
        }
    }
    return s;
}

std::vector<std::uint8_t> masked_inputs(const std::vector<std::uint8_t>& x,
                                        const ActivationSchedule& schedule,
                                        int group_index) {
    if (static_cast<int>(x.size()) != schedule.n_rows)
        throw ValidationError("masked_inputs: input length must equal n_rows");
    if (group_index < 0 || group_index >= static_cast<int>(schedule.groups.size()))
        throw ValidationError("masked_inputs: group index out of range");

    std::vector<std::uint8_t> out(x.size(), 0);
    for (int r : schedule.groups[group_index]) out[r] = x[r];
    return out;
}

std::vector<long long> accumulate(const std::vector<std::vector<long long>>& cycle_outputs) {
    if (cycle_outputs.empty()) throw ValidationError("accumulate: no cycles given");
    std::vector<long long> total(cycle_outputs.front().size(), 0);
    for (const auto& cycle : cycle_outputs) {
        if (cycle.size() != total.size())
            throw ValidationError("accumulate: cycles disagree on column count");
        for (std::size_t c = 0; c < cycle.size(); ++c) total[c] += cycle[c];
    }
    return total;
}

}  // namespace xbar
