#include "alcs/qcore.hpp"

#include <stdexcept>

#include "alcs/rng.hpp"

namespace alcs {

void QKey::push(std::uint8_t b) {
    if (len_ >= bytes_.size()) throw std::invalid_argument("QKey: key too long");
    bytes_[len_++] = b;
}

QKey& QKey::add_pos(GridPos p) {
    if (p.x < 0 || p.x > 255 || p.y < 0 || p.y > 255)
        throw std::invalid_argument("QKey: position out of byte range");
    push(static_cast<std::uint8_t>(p.x));
    push(static_cast<std::uint8_t>(p.y));
    arity_ += 1;
    return *this;
}

QKey& QKey::add_symbol(std::uint8_t s) {
    push(s);
    arity_ += 1;
    return *this;
}

QKey& QKey::add_seq(const SubtaskSeq& seq) {
    if (seq.size() > 15) throw std::invalid_argument("QKey: sequence longer than 15");
    push(static_cast<std::uint8_t>(seq.size()));
    for (SubtaskId s : seq) push(s);
    arity_ += 1;
    return *this;
}

double QTable::get(const QKey& key) const {
    if (key.arity() != arity_)
        throw std::invalid_argument("QTable: key arity " + std::to_string(key.arity()) +
                                    " does not match table arity " + std::to_string(arity_));
    auto it = entries_.find(key);
    return it == entries_.end() ? 0.0 : it->second;
}

void QTable::td_set(const QKey& key, double target, double lr) {
    if (key.arity() != arity_)
        throw std::invalid_argument("QTable: key arity " + std::to_string(key.arity()) +
                                    " does not match table arity " + std::to_string(arity_));
    if (!(lr > 0.0 && lr <= 1.0))
        throw std::invalid_argument("QTable: learning rate must be in (0,1]");
    double& slot = entries_[key];
    slot = (1.0 - lr) * slot + lr * target;
}

double max_over(const QTable& table, const QKey& prefix, std::span<const std::uint8_t> candidates) {
    if (candidates.empty()) throw std::invalid_argument("max_over: empty candidate set");
    double best = table.get(prefix.completed_with(candidates[0]));
    for (std::size_t i = 1; i < candidates.size(); ++i)
        best = std::max(best, table.get(prefix.completed_with(candidates[i])));
    return best;
}

std::uint8_t argmax_over(const QTable& table, const QKey& prefix,
                         std::span<const std::uint8_t> candidates, std::mt19937_64& rng) {
    if (candidates.empty()) throw std::invalid_argument("argmax_over: empty candidate set");
    std::array<std::uint8_t, 256> ties{};
    std::size_t n_ties = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        double v = table.get(prefix.completed_with(candidates[i]));
        if (i == 0 || v > best) {
            best = v;
            ties[0] = candidates[i];
            n_ties = 1;
        } else if (v == best) {
            ties[n_ties++] = candidates[i];
        }
    }
    if (n_ties == 1) return ties[0];
    return ties[uniform_below(rng, static_cast<std::uint32_t>(n_ties))];
}

}  // namespace alcs
