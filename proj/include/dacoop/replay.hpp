#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "dacoop/common.hpp"
#include "dacoop/net.hpp"
#include "dacoop/random.hpp"

namespace dacoop {

// Binary indexed sum tree over leaf masses. Parents are recomputed from both
// children on every update, so internal sums never drift from the leaves.
class SumTree {
public:
    explicit SumTree(std::size_t capacity) : capacity_(capacity) {
        if (capacity == 0 || (capacity & (capacity - 1)) != 0)
            throw ConfigError("sum tree capacity must be a power of two");
        nodes_.assign(2 * capacity, 0.0);
    }

    std::size_t capacity() const { return capacity_; }
    double total() const { return nodes_[1]; }
    double leaf(std::size_t i) const { return nodes_[capacity_ + i]; }

    void set(std::size_t i, double value) {
        std::size_t node = capacity_ + i;
        nodes_[node] = value;
        node /= 2;
        while (node >= 1) {
            nodes_[node] = nodes_[2 * node] + nodes_[2 * node + 1];
            node /= 2;
        }
    }

    // Leaf index whose cumulative mass interval contains u, for u in [0, total).
    std::size_t find_prefix(double u) const {
        if (!(total() > 0.0)) throw SimError("sum tree is empty");
        u = std::min(u, std::nextafter(total(), 0.0));
        if (u < 0.0) u = 0.0;
        std::size_t node = 1;
        while (node < capacity_) {
            std::size_t left = 2 * node;
            if (u < nodes_[left]) {
                node = left;
            } else {
                u -= nodes_[left];
                node = left + 1;
            }
        }
        return node - capacity_;
    }

private:
    std::size_t capacity_;
    std::vector<double> nodes_;
};

struct ReplayTransition {
    EncodedObservation obs;
    int action = 0;
    double reward = 0.0;
    EncodedObservation next_obs;
    bool done = false;
    double priority = 0.0;  // raw priority; the tree stores priority^alpha
};

struct SampledBatch {
    std::vector<std::size_t> indices;
    std::vector<double> is_weights;
};

// Proportional prioritized replay with FIFO overwrite. New transitions enter
// at the current maximum raw priority so each is trained on at least once.
class PrioritizedReplay {
public:
    PrioritizedReplay(std::size_t capacity, double alpha)
        : tree_(capacity), alpha_(alpha), storage_(capacity) {}

    std::size_t size() const { return size_; }
    std::size_t capacity() const { return tree_.capacity(); }
    double max_raw_priority() const { return max_raw_priority_; }
    const SumTree& tree() const { return tree_; }
    const ReplayTransition& at(std::size_t i) const { return storage_[i]; }

    void push(ReplayTransition transition) {
        transition.priority = max_raw_priority_;
        std::size_t slot = next_;
        storage_[slot] = std::move(transition);
        tree_.set(slot, std::pow(max_raw_priority_, alpha_));
        next_ = (next_ + 1) % capacity();
        if (size_ < capacity()) ++size_;
    }

    void update_priority(std::size_t index, double raw_priority) {
        if (!(raw_priority > 0.0)) throw SimError("priority must be positive");
        storage_[index].priority = raw_priority;
        max_raw_priority_ = std::max(max_raw_priority_, raw_priority);
        tree_.set(index, std::pow(raw_priority, alpha_));
    }

    // Stratified proportional sampling; importance weights are normalized by
    // the largest weight in the batch.
    SampledBatch sample(std::size_t batch_size, double beta, RandomStream& rng) const {
        if (size_ < batch_size) throw SimError("replay underfilled");
        SampledBatch batch;
        batch.indices.reserve(batch_size);
        batch.is_weights.reserve(batch_size);
        double segment = tree_.total() / static_cast<double>(batch_size);
        double max_w = 0.0;
        for (std::size_t k = 0; k < batch_size; ++k) {
            double u = (static_cast<double>(k) + rng.uniform()) * segment;
            std::size_t idx = tree_.find_prefix(u);
            double prob = tree_.leaf(idx) / tree_.total();
            double w = std::pow(static_cast<double>(size_) * prob, -beta);
            batch.indices.push_back(idx);
            batch.is_weights.push_back(w);
            max_w = std::max(max_w, w);
        }
        for (auto& w : batch.is_weights) w /= max_w;
        return batch;
    }

private:
    SumTree tree_;
    double alpha_;
    std::vector<ReplayTransition> storage_;
    std::size_t next_ = 0;
    std::size_t size_ = 0;
    double max_raw_priority_ = 1.0;
};

}  // namespace dacoop
