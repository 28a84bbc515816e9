#pragma once

#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "alcs/qcore.hpp"

namespace alcs {

// High-level experience ((s, p*), p, (s', p*'), r) with the environment
// reward. p is the pending choice until the assumed-choice flush rewrites it.
struct HighExperience {
    GridPos s{};
    SubtaskSeq seq;
    SubtaskId p = 0;
    GridPos s_next{};
    SubtaskSeq seq_next;
    double r = 0.0;
};

// Two-stage episode buffer: e_temp holds the experiences since the last
// achieved subtask; experience_h holds the finalized (relabeled) ones.
struct EpisodeBuffer {
    std::vector<HighExperience> e_temp;
    std::vector<HighExperience> experience_h;

    void clear() {
        e_temp.clear();
        experience_h.clear();
    }
};

// Q_h key layout: (state, sequence, subtask).
inline QKey high_prefix(GridPos s, const SubtaskSeq& seq) {
    QKey k;
    k.add_pos(s).add_seq(seq);
    return k;
}

// Greedy sequence-conditioned subtask choice; ties uniform via rng, no
// epsilon at the high level.
SubtaskId select_subtask(const QTable& q_high, GridPos s, const SubtaskSeq& seq,
                         std::span<const std::uint8_t> vocab_ids, std::mt19937_64& rng);

// seq + label appended when a label fired, otherwise seq unchanged.
SubtaskSeq extend_sequence(const SubtaskSeq& seq, std::optional<SubtaskId> label);

// Records one environment step and returns the sequence for the next step.
// When a label fires, every pending experience is moved to experience_h with
// its subtask rewritten to the achieved one (the assumed choice). With
// assume_achieved=false the experience keeps p_chosen and is finalized
// immediately (no relabeling).
SubtaskSeq record_step(EpisodeBuffer& buffer, GridPos s, const SubtaskSeq& seq, SubtaskId p_chosen,
                       GridPos s_next, double r, std::optional<SubtaskId> label,
                       bool assume_achieved = true);

// Observes each Q_h write during finalize_episode (test instrumentation).
using HighUpdateObserver = std::function<void(const HighExperience&, double target)>;

// Episode-end batch update of Q_h over experience_h, newest experience
// first, bootstrapping unconditionally from the successor (state, sequence);
// both buffer lists are cleared. With seq_in_keys=false all keys and
// bootstraps use the empty sequence.
void finalize_episode(QTable& q_high, EpisodeBuffer& buffer, std::span<const std::uint8_t> vocab_ids,
                      double beta, double gamma, bool seq_in_keys = true,
                      const HighUpdateObserver* observer = nullptr);

}  // namespace alcs
