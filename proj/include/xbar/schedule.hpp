#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace xbar {

enum class Strategy { Full, ConsecutivePWA, StridedDPWA };

std::string strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);

// Groups partition 0..n_rows-1; one group fires per MVM cycle.
struct ActivationSchedule {
    int n_rows = 0;
    Strategy strategy = Strategy::Full;
    std::vector<std::vector<int>> groups;
};

// Full: one group of all rows (n_groups must be 1). ConsecutivePWA: blocks
// of n_rows/n_groups adjacent rows. StridedDPWA: group g = {g, g+G, g+2G,..}
// with stride G = n_groups, interleaving rows across groups.
ActivationSchedule make_groups(int n_rows, int n_groups, Strategy strategy);

// Input bits with every row outside the group forced to 0 (gate held low).
std::vector<std::uint8_t> masked_inputs(const std::vector<std::uint8_t>& x,
                                        const ActivationSchedule& schedule,
                                        int group_index);

// Element-wise sum of per-cycle ADC codes.
std::vector<long long> accumulate(const std::vector<std::vector<long long>>& cycle_outputs);

}  // namespace xbar
