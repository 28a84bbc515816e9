#include "alcs/highlevel.hpp"

#include <stdexcept>

namespace alcs {

SubtaskId select_subtask(const QTable& q_high, GridPos s, const SubtaskSeq& seq,
                         std::span<const std::uint8_t> vocab_ids, std::mt19937_64& rng) {
    return argmax_over(q_high, high_prefix(s, seq), vocab_ids, rng);
}

SubtaskSeq extend_sequence(const SubtaskSeq& seq, std::optional<SubtaskId> label) {
    SubtaskSeq out = seq;
    if (label) out.push_back(*label);
    return out;
}

SubtaskSeq record_step(EpisodeBuffer& buffer, GridPos s, const SubtaskSeq& seq, SubtaskId p_chosen,
                       GridPos s_next, double r, std::optional<SubtaskId> label,
                       bool assume_achieved) {
    if (!label) {
        HighExperience e{s, seq, p_chosen, s_next, seq, r};
        if (assume_achieved)
            buffer.e_temp.push_back(std::move(e));
        else
            buffer.experience_h.push_back(std::move(e));
        return seq;
    }
    SubtaskId p_act = *label;
    SubtaskSeq seq_next = extend_sequence(seq, label);
    HighExperience e{s, seq, p_chosen, s_next, seq_next, r};
    if (assume_achieved) {
        buffer.e_temp.push_back(std::move(e));
        for (HighExperience& pending : buffer.e_temp) {
            pending.p = p_act;
            buffer.experience_h.push_back(std::move(pending));
        }
        buffer.e_temp.clear();
    } else {
        buffer.experience_h.push_back(std::move(e));
    }
    return seq_next;
}

void finalize_episode(QTable& q_high, EpisodeBuffer& buffer, std::span<const std::uint8_t> vocab_ids,
                      double beta, double gamma, bool seq_in_keys,
                      const HighUpdateObserver* observer) {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::invalid_argument("finalize_episode: gamma must be in [0,1)");
    static const SubtaskSeq kEmpty;
    // Newest experience first: each update runs after its successor's, so one
    // rewarded episode propagates credit along its whole chain in one pass.
    for (auto it = buffer.experience_h.rbegin(); it != buffer.experience_h.rend(); ++it) {
        const HighExperience& e = *it;
        const SubtaskSeq& key_seq = seq_in_keys ? e.seq : kEmpty;
        const SubtaskSeq& next_seq = seq_in_keys ? e.seq_next : kEmpty;
        double y = e.r + gamma * max_over(q_high, high_prefix(e.s_next, next_seq), vocab_ids);
        q_high.td_set(high_prefix(e.s, key_seq).completed_with(e.p), y, beta);
        if (observer && *observer) (*observer)(e, y);
    }
    buffer.clear();
}

}  // namespace alcs
