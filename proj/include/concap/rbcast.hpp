#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

namespace concap {

// Two-round exponential information gathering broadcast of a single bit,
// fixed at n = 4, f = 1. Round 1: the sender ships its bit to the other
// three. Round 2: each receiver relays what it heard to the other two.
// Receivers decide by majority of {direct, relay, relay}; missing messages
// count as the default bit 0.

inline constexpr int kBroadcastDefaultBit = 0;

// Control bits one invocation puts on each participating link (9 links:
// 3 sender->receiver plus 6 receiver->receiver).
constexpr int broadcast_cost_bits() { return 1; }

struct BroadcastHooks {
    int faulty = -1; // -1: all honest
    // Rewrites an outgoing message of the faulty node. nullopt withholds it.
    // `round` is 1 or 2, `value` the bit an honest node would send.
    std::function<std::optional<int>(int round, int from, int to, int value)> transform;
};

struct BroadcastMessage {
    int round = 0;
    int from = 0;
    int to = 0;
    std::optional<int> bit; // nullopt: withheld, no bits on the wire
};

struct BroadcastOutcome {
    std::array<int, 4> decided{};
    std::vector<BroadcastMessage> messages;
};

BroadcastOutcome reliable_broadcast(int sender, int bit, const BroadcastHooks& hooks = {});

} // namespace concap
