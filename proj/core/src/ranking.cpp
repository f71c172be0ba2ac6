#include "rankdyn/ranking.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace rankdyn {

RankingState::RankingState(int items, double eta, double lambda)
    : items_(items), eta_(eta), lambda_(lambda), shared_(lambda == 1.0) {
    const auto m = static_cast<std::size_t>(items);
    for (std::size_t g = 0; g < 2; ++g) {
        kappa_[g].assign(m, 0.0);
        clicks_[g].assign(m, 0);
        highlights_[g].assign(m, 0);
        ranks_[g].assign(m, 0);
        order_[g].resize(m);
        std::iota(order_[g].begin(), order_[g].end(), 0);
    }
}

RankingState RankingState::init(const ModelConfig& cfg, CounterStream& stream) {
    RankingState state(cfg.M, cfg.eta, cfg.lambda);
    stream.shuffle(state.order_[0].begin(), state.order_[0].end());
    state.sync_ranks(0);
    if (!state.shared_) {
        stream.shuffle(state.order_[1].begin(), state.order_[1].end());
        state.sync_ranks(1);
    }
    return state;
}

RankingState RankingState::from_order(const ModelConfig& cfg, std::span<const int> order) {
    RankingState state(cfg.M, cfg.eta, cfg.lambda);
    std::vector<int> sorted(order.begin(), order.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted != state.order_[0]) {
        throw std::invalid_argument("initial order is not a permutation of the items");
    }
    for (std::size_t g = 0; g < 2; ++g) {
        state.order_[g].assign(order.begin(), order.end());
        state.sync_ranks(g);
    }
    return state;
}

void RankingState::record_outcome(Group group, int item, bool highlighted, CounterStream& stream) {
    const std::size_t own = index_of(group);
    const std::size_t cross = index_of(other(group));
    const auto m = static_cast<std::size_t>(item);
    const double weight = highlighted ? 1.0 + eta_ : 1.0;

    kappa_[own][m] += weight;
    kappa_[cross][m] += lambda_ * weight;
    clicks_[own][m] += 1;
    highlights_[own][m] += highlighted ? 1 : 0;

    if (shared_) {
        promote(0, item);
        shuffle_ties(0, stream);
        sync_ranks(0);
        return;
    }
    promote(0, item);
    promote(1, item);
    shuffle_ties(0, stream);
    shuffle_ties(1, stream);
    sync_ranks(0);
    sync_ranks(1);
}

std::span<const int> RankingState::rerank(Group group, CounterStream& stream) {
    const std::size_t g = shared_ ? 0 : index_of(group);
    auto& order = order_[g];
    const auto& kappa = kappa_[g];
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&kappa](int a, int b) {
        return kappa[a] > kappa[b] || (kappa[a] == kappa[b] && a < b);
    });
    shuffle_ties(g, stream);
    sync_ranks(g);
    return ranks_[g];
}

std::int64_t RankingState::total_clicks() const noexcept {
    std::int64_t total = 0;
    for (const auto& per_group : clicks_) {
        total = std::accumulate(per_group.begin(), per_group.end(), total);
    }
    return total;
}

// Popularity only grows, so the clicked item can only move towards rank 1.
void RankingState::promote(std::size_t g, int item) {
    auto& order = order_[g];
    const auto& kappa = kappa_[g];
    auto pos = static_cast<std::size_t>(ranks_[g][static_cast<std::size_t>(item)] - 1);
    while (pos > 0 && kappa[order[pos - 1]] < kappa[order[pos]]) {
        std::swap(order[pos - 1], order[pos]);
        --pos;
    }
}

// Tied runs are first put in index order so the shuffle outcome depends only
// on the tied set and the stream, not on how the order was reached.
void RankingState::shuffle_ties(std::size_t g, CounterStream& stream) {
    auto& order = order_[g];
    const auto& kappa = kappa_[g];
    const std::size_t m = order.size();
    std::size_t begin = 0;
    while (begin < m) {
        std::size_t end = begin + 1;
        while (end < m && kappa[order[end]] == kappa[order[begin]]) ++end;
        if (end - begin > 1) {
            std::sort(order.begin() + static_cast<std::ptrdiff_t>(begin),
                      order.begin() + static_cast<std::ptrdiff_t>(end));
            stream.shuffle(order.begin() + static_cast<std::ptrdiff_t>(begin),
                           order.begin() + static_cast<std::ptrdiff_t>(end));
        }
        begin = end;
    }
}

void RankingState::sync_ranks(std::size_t g) {
    const auto& order = order_[g];
    for (std::size_t r = 0; r < order.size(); ++r) {
        ranks_[g][static_cast<std::size_t>(order[r])] = static_cast<int>(r) + 1;
    }
}

}  // namespace rankdyn
