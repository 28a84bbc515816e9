#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <random>
#include <span>
#include <unordered_map>

#include "alcs/grid.hpp"

namespace alcs {

/// Composite key for a sparse Q table: an ordered tuple of parts packed into
/// a fixed byte buffer. Parts: a grid position (2 bytes), a subtask sequence
/// (length + items), or a single symbol (subtask id or action id). Equality
/// is structural; tables check the part count (arity) on every access.
class QKey {
public:
    QKey& add_pos(GridPos p);
    QKey& add_symbol(std::uint8_t s);
    QKey& add_seq(const SubtaskSeq& seq);

    // Copy of this key with one extra symbol part; used to complete a prefix
    // with a candidate without rebuilding the whole key.
    QKey completed_with(std::uint8_t s) const {
        QKey k = *this;
        k.add_symbol(s);
        return k;
    }

    int arity() const { return arity_; }
    std::span<const std::uint8_t> bytes() const { return {bytes_.data(), len_}; }

    bool operator==(const QKey& o) const {
        return len_ == o.len_ && arity_ == o.arity_ &&
               std::memcmp(bytes_.data(), o.bytes_.data(), len_) == 0;
    }

private:
    void push(std::uint8_t b);

    std::uint8_t len_ = 0;
    std::uint8_t arity_ = 0;
    std::array<std::uint8_t, 22> bytes_{};
};

struct QKeyHash {
    std::size_t operator()(const QKey& k) const noexcept {
        // FNV-1a over the packed bytes
        std::uint64_t h = 1469598103934665603ULL;
        for (std::uint8_t b : k.bytes()) {
            h ^= b;
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h ^ (std::uint64_t(k.arity()) << 56));
    }
};

/// Sparse tabular value store: absent keys read as 0.0 and values are only
/// ever written through the TD rule value <- (1-lr)*value + lr*target.
class QTable {
public:
    explicit QTable(int arity) : arity_(arity) {}

    double get(const QKey& key) const;
    void td_set(const QKey& key, double target, double lr);

    int arity() const { return arity_; }
    std::size_t size() const { return entries_.size(); }
    const std::unordered_map<QKey, double, QKeyHash>& entries() const { return entries_; }

private:
    int arity_;
    std::unordered_map<QKey, double, QKeyHash> entries_;
};

/// Maximum stored value over prefix+candidate keys; candidates must be
/// non-empty and prefix arity must be table arity - 1.
double max_over(const QTable& table, const QKey& prefix, std::span<const std::uint8_t> candidates);

/// A maximizing candidate, ties broken uniformly at random via rng.
std::uint8_t argmax_over(const QTable& table, const QKey& prefix,
                         std::span<const std::uint8_t> candidates, std::mt19937_64& rng);

}  // namespace alcs
