#include "alcs/lowlevel.hpp"

#include <stdexcept>

#include "alcs/rng.hpp"

namespace alcs {

double subtask_reward(SubtaskId p, std::optional<SubtaskId> label_s,
                      std::optional<SubtaskId> label_s_next) {
    return (label_s_next == p && label_s != p) ? 1.0 : 0.0;
}

void generate_low_experiences(GridPos s, Action a, GridPos s_next, std::optional<SubtaskId> label_s,
                              std::optional<SubtaskId> label_s_next, std::size_t vocab_size,
                              std::vector<LowExperience>& out) {
    out.clear();
    out.reserve(vocab_size);
    for (std::size_t i = 0; i < vocab_size; ++i) {
        SubtaskId p = static_cast<SubtaskId>(i);
        double r = subtask_reward(p, label_s, label_s_next);
        out.push_back({s, a, s_next, r, p, r > 0.0});
    }
}

std::vector<LowExperience> generate_low_experiences(GridPos s, Action a, GridPos s_next,
                                                    std::optional<SubtaskId> label_s,
                                                    std::optional<SubtaskId> label_s_next,
                                                    std::size_t vocab_size) {
    std::vector<LowExperience> out;
    generate_low_experiences(s, a, s_next, label_s, label_s_next, vocab_size, out);
    return out;
}

void update_q_l(QTable& q_low, std::span<const LowExperience> experiences, double alpha,
                double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("update_q_l: gamma must be in [0,1)");
    for (const LowExperience& e : experiences) {
        double y = e.done ? e.r : e.r + gamma * max_over(q_low, low_prefix(e.s_next, e.p), kActionIds);
        q_low.td_set(low_prefix(e.s, e.p).completed_with(static_cast<std::uint8_t>(e.a)), y, alpha);
    }
}

Action select_action(const QTable& q_low, GridPos s, SubtaskId p, double epsilon,
                     std::mt19937_64& action_rng, std::mt19937_64& tie_rng) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("select_action: epsilon must be in [0,1]");
    if (canonical(action_rng) > epsilon)
        return static_cast<Action>(argmax_over(q_low, low_prefix(s, p), kActionIds, tie_rng));
    return static_cast<Action>(uniform_below(action_rng, kNumActions));
}

}  // namespace alcs
