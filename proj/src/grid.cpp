#include "coopsig/grid.h"

#include <algorithm>
#include <queue>

namespace coopsig {

Dimension feature_dimension(Feature f) {
    return feature_index(f) < kNumShapes ? Dimension::Shape : Dimension::Color;
}

const std::string& feature_name(Feature f) {
    static const std::array<std::string, kNumFeatures> names = {
        "circle", "triangle", "square", "red", "green", "purple"};
    return names[static_cast<size_t>(feature_index(f))];
}

Feature feature_from_name(const std::string& name) {
    for (int i = 0; i < kNumFeatures; ++i) {
        if (feature_name(feature_at(i)) == name) return feature_at(i);
    }
    throw DataError("unknown feature name: '" + name + "'");
}

const std::string& barrier_condition_name(BarrierCondition c) {
    static const std::array<std::string, 3> names = {"rb", "sb", "custom"};
    return names[static_cast<size_t>(c)];
}

BarrierCondition barrier_condition_from_name(const std::string& name) {
    if (name == "rb") return BarrierCondition::RB;
    if (name == "sb") return BarrierCondition::SB;
    if (name == "custom") return BarrierCondition::Custom;
    throw DataError("unknown barrier condition: '" + name + "'");
}

namespace {

// Flood fill used only for the construction-time connectivity invariant; the
// cost-table BFS lives in planning and is validated against this independently.
std::vector<char> reachable_mask(int width, int height, const std::vector<char>& barrier_mask,
                                 Cell origin) {
    std::vector<char> seen(static_cast<size_t>(width) * height, 0);
    std::queue<Cell> frontier;
    seen[static_cast<size_t>(origin.row) * width + origin.col] = 1;
    frontier.push(origin);
    while (!frontier.empty()) {
        const Cell c = frontier.front();
        frontier.pop();
        const Cell neighbors[4] = {{c.row - 1, c.col}, {c.row + 1, c.col},
                                   {c.row, c.col - 1}, {c.row, c.col + 1}};
        for (const Cell& n : neighbors) {
            if (n.row < 0 || n.row >= height || n.col < 0 || n.col >= width) continue;
            const size_t idx = static_cast<size_t>(n.row) * width + n.col;
            if (seen[idx] || barrier_mask[idx]) continue;
            seen[idx] = 1;
            frontier.push(n);
        }
    }
    return seen;
}

}  // namespace

GridSpec::GridSpec(int width, int height, std::vector<Cell> barrier, Cell signaler_start,
                   Cell receiver_start, BarrierCondition condition)
    : width_(width),
      height_(height),
      barrier_(std::move(barrier)),
      signaler_start_(signaler_start),
      receiver_start_(receiver_start),
      condition_(condition) {
    if (width_ < 2 || height_ < 2)
        throw ConfigError("grid must be at least 2x2");
    std::sort(barrier_.begin(), barrier_.end());
    barrier_.erase(std::unique(barrier_.begin(), barrier_.end()), barrier_.end());
    barrier_mask_.assign(static_cast<size_t>(width_) * height_, 0);
    for (const Cell& c : barrier_) {
        if (!in_bounds(c)) throw ConfigError("barrier cell out of bounds");
        barrier_mask_[static_cast<size_t>(cell_index(c))] = 1;
    }
    if (!in_bounds(signaler_start_) || !in_bounds(receiver_start_))
        throw ConfigError("start cell out of bounds");
    if (signaler_start_ == receiver_start_)
        throw ConfigError("signaler and receiver starts must differ");
    if (is_barrier(signaler_start_) || is_barrier(receiver_start_))
        throw ConfigError("start cell lies on a barrier cell");

    // Every non-barrier cell must be reachable from both starts; a split arena
    // would make distances (and every utility built on them) undefined.
    for (Cell origin : {signaler_start_, receiver_start_}) {
        const std::vector<char> seen = reachable_mask(width_, height_, barrier_mask_, origin);
        for (int idx = 0; idx < num_cells(); ++idx) {
            if (!barrier_mask_[static_cast<size_t>(idx)] && !seen[static_cast<size_t>(idx)])
                throw ConfigError("grid is not fully connected from both starts");
        }
    }
}

GridSpec default_grid(BarrierCondition condition) {
    if (condition == BarrierCondition::Custom)
        throw ConfigError("default_grid requires rb or sb");
    const int barrier_row = condition == BarrierCondition::RB ? 2 : 5;
    std::vector<Cell> barrier;
    for (int col = 3; col <= 6; ++col) barrier.push_back({barrier_row, col});
    return GridSpec(10, 10, std::move(barrier), /*signaler_start=*/{9, 4},
                    /*receiver_start=*/{0, 4}, condition);
}

Trial::Trial(GridSpec grid, std::vector<Item> items, int target_id, uint64_t seed)
    : grid_(std::move(grid)), items_(std::move(items)), target_id_(target_id), seed_(seed) {
    const int n = static_cast<int>(items_.size());
    if (n < 2 || n > 9) throw BadArity("trial needs between 2 and 9 items");
    if (target_id_ < 0 || target_id_ >= n) throw DataError("target_id out of range");
    for (int i = 0; i < n; ++i) {
        const Item& item = items_[static_cast<size_t>(i)];
        if (item.id != i) throw DataError("item ids must be 0..n-1 in order");
        if (feature_dimension(item.shape) != Dimension::Shape ||
            feature_dimension(item.color) != Dimension::Color)
            throw DataError("item features must be one shape and one color");
        if (!grid_.in_bounds(item.cell) || grid_.is_barrier(item.cell))
            throw DataError("item cell must be a free in-bounds cell");
        if (item.cell == grid_.signaler_start() || item.cell == grid_.receiver_start())
            throw DataError("item cell may not be a start cell");
        for (int j = i + 1; j < n; ++j) {
            const Item& other = items_[static_cast<size_t>(j)];
            if (item.cell == other.cell) throw DataError("item cells must be distinct");
            if (item.shape == other.shape && item.color == other.color)
                throw DataError("item (shape,color) pairs must be distinct");
        }
    }
}

Trial sample_trial(RandomStream& rng, const GridSpec& grid, int n_items) {
    if (n_items < 2 || n_items > 9)
        throw BadArity("n_items must be in [2,9], got " + std::to_string(n_items));

    std::vector<Cell> free_cells;
    for (int row = 0; row < grid.height(); ++row) {
        for (int col = 0; col < grid.width(); ++col) {
            const Cell c{row, col};
            if (grid.is_barrier(c) || c == grid.signaler_start() || c == grid.receiver_start())
                continue;
            free_cells.push_back(c);
        }
    }
    if (static_cast<int>(free_cells.size()) < n_items)
        throw InsufficientSpace("grid has " + std::to_string(free_cells.size()) +
                                " free cells, needs " + std::to_string(n_items));

    const std::vector<int> cell_picks =
        rng.sample_without_replacement(static_cast<int>(free_cells.size()), n_items);
    const std::vector<int> pair_picks =
        rng.sample_without_replacement(kNumShapes * kNumColors, n_items);

    std::vector<Item> items;
    items.reserve(static_cast<size_t>(n_items));
    for (int i = 0; i < n_items; ++i) {
        const int shape = pair_picks[static_cast<size_t>(i)] / kNumColors;
        const int color = pair_picks[static_cast<size_t>(i)] % kNumColors;
        items.push_back(Item{i, free_cells[static_cast<size_t>(cell_picks[static_cast<size_t>(i)])],
                             feature_at(shape), feature_at(kNumShapes + color)});
    }
    const int target = rng.next_int(n_items);
    return Trial(grid, std::move(items), target, rng.key());
}

bool is_overloaded(const Trial& trial) {
    const Item& target = trial.target();
    bool shape_shared = false;
    bool color_shared = false;
    for (const Item& item : trial.items()) {
        if (item.id == target.id) continue;
        shape_shared = shape_shared || item.shape == target.shape;
        color_shared = color_shared || item.color == target.color;
    }
    return shape_shared && color_shared;
}

double overloaded_rate(const std::vector<Trial>& trials) {
    if (trials.empty()) throw EmptyGroup("overloaded_rate over zero trials");
    int count = 0;
    for (const Trial& t : trials) count += is_overloaded(t) ? 1 : 0;
    return static_cast<double>(count) / static_cast<double>(trials.size());
}

}  // namespace coopsig
