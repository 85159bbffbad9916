#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "coopsig/errors.h"
#include "coopsig/random.h"

namespace coopsig {

// ---------------------------------------------------------------------------
// Features: two dimensions (shape, color) with three values each. A signal is
// a single feature, so Feature doubles as the signal vocabulary (6 tokens).
// ---------------------------------------------------------------------------

enum class Feature : int {
    Circle = 0,
    Triangle = 1,
    Square = 2,
    Red = 3,
    Green = 4,
    Purple = 5,
};

inline constexpr int kNumFeatures = 6;
inline constexpr int kNumShapes = 3;
inline constexpr int kNumColors = 3;

enum class Dimension { Shape, Color };

Dimension feature_dimension(Feature f);
const std::string& feature_name(Feature f);
Feature feature_from_name(const std::string& name);  // throws DataError on unknown name

inline int feature_index(Feature f) { return static_cast<int>(f); }
inline Feature feature_at(int index) { return static_cast<Feature>(index); }

// ---------------------------------------------------------------------------
// Arena geometry
// ---------------------------------------------------------------------------

struct Cell {
    int row = 0;
    int col = 0;
    auto operator<=>(const Cell&) const = default;
};

enum class BarrierCondition { RB, SB, Custom };

const std::string& barrier_condition_name(BarrierCondition c);
BarrierCondition barrier_condition_from_name(const std::string& name);

// The arena: dimensions, impassable barrier cells, the two start cells.
// Construction validates bounds, start placement, and full connectivity
// (every non-barrier cell reachable from both starts), so downstream code
// never has to handle a split arena.
class GridSpec {
  public:
    GridSpec(int width, int height, std::vector<Cell> barrier, Cell signaler_start,
             Cell receiver_start, BarrierCondition condition);

    int width() const { return width_; }
    int height() const { return height_; }
    const std::vector<Cell>& barrier() const { return barrier_; }
    Cell signaler_start() const { return signaler_start_; }
    Cell receiver_start() const { return receiver_start_; }
    BarrierCondition condition() const { return condition_; }

    bool in_bounds(Cell c) const {
        return c.row >= 0 && c.row < height_ && c.col >= 0 && c.col < width_;
    }
    bool is_barrier(Cell c) const { return barrier_mask_[cell_index(c)] != 0; }
    int cell_index(Cell c) const { return c.row * width_ + c.col; }
    int num_cells() const { return width_ * height_; }

    bool operator==(const GridSpec&) const = default;

  private:
    int width_;
    int height_;
    std::vector<Cell> barrier_;  // sorted, deduplicated
    Cell signaler_start_;
    Cell receiver_start_;
    BarrierCondition condition_;
    std::vector<char> barrier_mask_;  // width*height lookup
};

// Canonical 10x10 arena: signaler (9,4), receiver (0,4); four barrier cells in
// row 2 (RB, near the receiver) or shifted three rows toward the signaler to
// row 5 (SB).
GridSpec default_grid(BarrierCondition condition);

// ---------------------------------------------------------------------------
// Items and trials
// ---------------------------------------------------------------------------

struct Item {
    int id = 0;
    Cell cell;
    Feature shape = Feature::Circle;  // shape-dimension feature
    Feature color = Feature::Red;     // color-dimension feature
    bool operator==(const Item&) const = default;
};

// One task instance. Construction enforces: 2..9 items, ids 0..n-1 in order,
// pairwise-distinct cells and (shape,color) pairs, items off barrier/start
// cells, valid feature dimensions, valid target.
class Trial {
  public:
    Trial(GridSpec grid, std::vector<Item> items, int target_id, uint64_t seed);

    const GridSpec& grid() const { return grid_; }
    const std::vector<Item>& items() const { return items_; }
    const Item& item(int id) const { return items_.at(static_cast<size_t>(id)); }
    int num_items() const { return static_cast<int>(items_.size()); }
    int target_id() const { return target_id_; }
    const Item& target() const { return items_[static_cast<size_t>(target_id_)]; }
    uint64_t seed() const { return seed_; }

    bool operator==(const Trial&) const = default;

  private:
    GridSpec grid_;
    std::vector<Item> items_;
    int target_id_;
    uint64_t seed_;
};

// Random trial: n_items distinct (shape,color) pairs drawn without replacement
// from the 9 possible pairs, cells drawn without replacement from free cells
// (non-barrier, non-start), target uniform. Deterministic given rng's key,
// which is recorded as the trial's seed.
Trial sample_trial(RandomStream& rng, const GridSpec& grid, int n_items);

// True iff every signal that is true of the target is also true of at least
// one other item — i.e. no signal picks the target out uniquely.
bool is_overloaded(const Trial& trial);

// Fraction of trials that are overloaded (empirical rate; the guarantee is
// provable only at n_items >= 8 under distinct-pair sampling).
double overloaded_rate(const std::vector<Trial>& trials);

}  // namespace coopsig
