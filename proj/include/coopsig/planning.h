#pragma once

#include <vector>

#include "coopsig/grid.h"

namespace coopsig {

enum class Agent { Signaler, Receiver };

const std::string& agent_name(Agent a);

// Exact 4-connected shortest-path step counts from one origin to every cell.
struct PathCostTable {
    Cell origin;
    int width = 0;
    int height = 0;
    std::vector<int> cost;  // row-major; kUnreachableCost for barrier/unreachable cells

    static constexpr int kUnreachableCost = -1;

    int at(Cell c) const { return cost[static_cast<size_t>(c.row) * width + c.col]; }
    bool reachable(Cell c) const { return at(c) != kUnreachableCost; }
};

// Breadth-first costs around barriers. Throws BadOrigin if the origin is out
// of bounds or a barrier cell.
PathCostTable path_costs(const GridSpec& grid, Cell origin);

// Shared compute-once cache (thread-safe). Only a handful of (grid, origin)
// pairs ever exist per run, so entries are compared by value, not hashed.
const PathCostTable& cached_path_costs(const GridSpec& grid, Cell origin);

inline const PathCostTable& signaler_costs(const GridSpec& grid) {
    return cached_path_costs(grid, grid.signaler_start());
}
inline const PathCostTable& receiver_costs(const GridSpec& grid) {
    return cached_path_costs(grid, grid.receiver_start());
}

// Step count from an agent's start to an item's cell.
int agent_item_cost(const Trial& trial, Agent actor, int item_id);

// 8 * [item == goal] - steps(actor start -> item cell). Throws Unreachable if
// no path exists (cannot happen on a connected grid; kept as a guard).
double action_utility(const Trial& trial, Agent actor, int item_id, int goal_id);

// The omniscient joint plan: which agent retrieves the target, at what utility.
struct CCPlan {
    Agent actor = Agent::Signaler;
    int item_id = 0;
    double utility = 0.0;
};

// Value iteration over the joint (signaler cell x receiver cell) state space
// with the concatenated 8-action set (move either agent in 4 directions),
// reward -1 per step and +8 on reaching the target, discount 1. Exact
// termination when a sweep changes no value. Ties between the agents break
// toward the signaler: greedy extraction enumerates her moves first, so on
// equal value she acts (she moves first and needs no communication).
CCPlan cc_solve_value_iteration(const Trial& trial);

// Same result, memoized per (grid, target cell) for use in hot loops.
CCPlan cc_solve(const Trial& trial);

// Noisy-rational choice: p_i proportional to exp(beta * u_i), computed with
// max-subtraction so large betas cannot overflow. beta = 0 is uniform.
std::vector<double> softmax(const std::vector<double>& utilities, double beta);

}  // namespace coopsig
