#include "concap/rbcast.hpp"

#include "concap/errors.hpp"

namespace concap {

BroadcastOutcome reliable_broadcast(int sender, int bit, const BroadcastHooks& hooks) {
    if (sender < 0 || sender > 3)
        throw ShapeViolation("reliable_broadcast: sender out of range");
    if (bit != 0 && bit != 1)
        throw ShapeViolation("reliable_broadcast: bit must be 0 or 1");

    auto ship = [&](int round, int from, int to, int value) -> std::optional<int> {
        if (from == hooks.faulty && hooks.transform) return hooks.transform(round, from, to, value);
        return value;
    };

    BroadcastOutcome out;
    std::array<std::optional<int>, 4> direct;
    for (int to = 0; to < 4; ++to) {
        if (to == sender) continue;
        std::optional<int> m = ship(1, sender, to, bit);
        out.messages.push_back({1, sender, to, m});
        direct[to] = m;
    }

    // relay[to][from]: what `from` told `to` it heard from the sender.
    std::array<std::array<std::optional<int>, 4>, 4> relay;
    for (int from = 0; from < 4; ++from) {
        if (from == sender) continue;
        int heard = direct[from].value_or(kBroadcastDefaultBit);
        for (int to = 0; to < 4; ++to) {
            if (to == sender || to == from) continue;
            std::optional<int> m = ship(2, from, to, heard);
            out.messages.push_back({2, from, to, m});
            relay[to][from] = m;
        }
    }

    for (int node = 0; node < 4; ++node) {
        if (node == sender) {
            out.decided[node] = bit;
            continue;
        }
        int ones = direct[node].value_or(kBroadcastDefaultBit);
        for (int from = 0; from < 4; ++from)
            if (from != sender && from != node)
                ones += relay[node][from].value_or(kBroadcastDefaultBit);
        out.decided[node] = ones >= 2 ? 1 : 0;
    }
    return out;
}

} // namespace concap
