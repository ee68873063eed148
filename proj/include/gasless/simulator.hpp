#pragma once

#include "gasless/events.hpp"
#include "gasless/scenario.hpp"

namespace gasless {

struct SimOutcome {
    EventLog log;
};

// Deterministic discrete-event simulation at millisecond resolution.
// Genesis -> staking/spawn -> user load (gateway+relayer for gasless, direct
// mempool for traditional) -> block production -> checkpoints -> settlement.
SimOutcome run(const Scenario& scenario);

}  // namespace gasless
