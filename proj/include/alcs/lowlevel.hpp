#pragma once

#include <optional>
#include <random>
#include <span>
#include <vector>

#include "alcs/qcore.hpp"

namespace alcs {

// One low-level experience: the environment transition re-rewarded for
// subtask p. r = 1 and done exactly when p is newly achieved at s_next.
struct LowExperience {
    GridPos s{};
    Action a = Action::up;
    GridPos s_next{};
    double r = 0.0;
    SubtaskId p = 0;
    bool done = false;
};

inline constexpr std::array<std::uint8_t, 4> kActionIds = {0, 1, 2, 3};

// Q_l key layout: (state, subtask, action).
inline QKey low_prefix(GridPos s, SubtaskId p) {
    QKey k;
    k.add_pos(s).add_symbol(p);
    return k;
}

// Binary subtask-achievement reward: 1 iff p = L(s_next) and p != L(s).
// Labels are the deduped values observed when each state was entered.
double subtask_reward(SubtaskId p, std::optional<SubtaskId> label_s,
                      std::optional<SubtaskId> label_s_next);

// One experience per vocabulary element, in vocabulary order, from a single
// environment transition. At most one has done=true.
std::vector<LowExperience> generate_low_experiences(GridPos s, Action a, GridPos s_next,
                                                    std::optional<SubtaskId> label_s,
                                                    std::optional<SubtaskId> label_s_next,
                                                    std::size_t vocab_size);

// Same, refilling a caller-owned buffer (training-loop hot path).
void generate_low_experiences(GridPos s, Action a, GridPos s_next, std::optional<SubtaskId> label_s,
                              std::optional<SubtaskId> label_s_next, std::size_t vocab_size,
                              std::vector<LowExperience>& out);

// Applies each experience once, in list order. done experiences use y = r;
// others bootstrap with gamma * max over next-state actions.
void update_q_l(QTable& q_low, std::span<const LowExperience> experiences, double alpha,
                double gamma);

// Epsilon-greedy action: a uniform random action from action_rng with
// probability epsilon, otherwise the Q_l argmax with ties from tie_rng.
Action select_action(const QTable& q_low, GridPos s, SubtaskId p, double epsilon,
                     std::mt19937_64& action_rng, std::mt19937_64& tie_rng);

}  // namespace alcs
