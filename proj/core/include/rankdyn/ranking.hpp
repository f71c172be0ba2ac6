#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "rankdyn/config.hpp"
#include "rankdyn/model.hpp"
#include "rankdyn/rng.hpp"

namespace rankdyn {

/// Per-group popularity, click and highlight tallies and the rank orders they
/// induce (rank 1 = most popular).
///
/// A click by an agent of group g on item m with highlight flag h adds
/// w = 1 + eta*h to kappa[g][m] and lambda*w to kappa[other(g)][m]. After
/// each outcome both rankings are rebuilt: items are ordered by popularity,
/// and every set of items with exactly equal popularity is put in a fresh
/// uniformly random order. With lambda = 1 the two groups share one ranking
/// and a single tie shuffle.
class RankingState {
public:
    /// kappa = 0, counters = 0, uniformly random initial permutation(s).
    static RankingState init(const ModelConfig& cfg, CounterStream& stream);

    /// kappa = 0 with a given initial order (order[r-1] = item at rank r),
    /// used by both groups. Throws std::invalid_argument unless `order` is a
    /// permutation of 0..M-1.
    static RankingState from_order(const ModelConfig& cfg, std::span<const int> order);

    /// Applies one click (and optional highlight) by an agent of `group`,
    /// then reranks both groups.
    void record_outcome(Group group, int item, bool highlighted, CounterStream& stream);

    /// Recomputes the ranking of `group` from scratch and stores it.
    std::span<const int> rerank(Group group, CounterStream& stream);

    int size() const noexcept { return items_; }
    double eta() const noexcept { return eta_; }
    double lambda() const noexcept { return lambda_; }
    bool shared() const noexcept { return shared_; }

    std::span<const double> kappa(Group g) const noexcept { return kappa_[index_of(g)]; }
    std::span<const std::int64_t> clicks(Group g) const noexcept { return clicks_[index_of(g)]; }
    std::span<const std::int64_t> highlights(Group g) const noexcept {
        return highlights_[index_of(g)];
    }
    /// ranks(g)[m] in 1..M.
    std::span<const int> ranks(Group g) const noexcept { return ranks_[slot(g)]; }
    /// order(g)[r-1] is the item at rank r.
    std::span<const int> order(Group g) const noexcept { return order_[slot(g)]; }

    std::int64_t total_clicks() const noexcept;

private:
    RankingState(int items, double eta, double lambda);

    void promote(std::size_t g, int item);
    void shuffle_ties(std::size_t g, CounterStream& stream);
    void sync_ranks(std::size_t g);
    std::size_t slot(Group g) const noexcept { return shared_ ? 0 : index_of(g); }

    int items_;
    double eta_;
    double lambda_;
    bool shared_;
    std::array<std::vector<double>, 2> kappa_;
    std::array<std::vector<std::int64_t>, 2> clicks_;
    std::array<std::vector<std::int64_t>, 2> highlights_;
    // With a shared ranking only slot 0 of ranks_ and order_ is used.
    std::array<std::vector<int>, 2> ranks_;
    std::array<std::vector<int>, 2> order_;
};

}  // namespace rankdyn
