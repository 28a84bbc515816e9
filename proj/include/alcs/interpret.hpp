#pragma once

#include <map>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "alcs/qcore.hpp"

namespace alcs {

/// Prefix tree of achieved-subtask sequences. Each node is reached by the
/// sequence on its root path; the incoming edge carries the maximum
/// environment reward observed when that subtask was achieved after that
/// prefix, plus an observation count. Depth is bounded by the episode step
/// cap and branching by |P|.
class RecordTree {
public:
    struct Node {
        std::uint64_t visits = 0;   // observations of the incoming edge
        double reward_max = 0.0;    // max environment reward on the incoming edge
        std::map<SubtaskId, std::unique_ptr<Node>> children;
    };

    /// Ensures the node seq_before + p_act exists, max-merges the edge reward
    /// and increments the observation count.
    void record_achievement(const SubtaskSeq& seq_before, SubtaskId p_act, double r);

    /// Node for seq, or nullptr if that sequence was never recorded. The
    /// empty sequence always resolves to the root.
    const Node* current_node(const SubtaskSeq& seq) const;

    /// Breadth-first search below the node seq + p_next (children in
    /// vocabulary order, FIFO) for the shallowest edge with recorded reward
    /// > 0. Returns the subtask labels strictly after p_next on that path,
    /// empty if p_next's own incoming edge already pays, nullopt if the node
    /// is absent or nothing pays within max_depth.
    std::optional<SubtaskSeq> plan_bfs(const SubtaskSeq& seq, SubtaskId p_next, int max_depth) const;

    /// Indented text form, one edge per line: `seq -> child [r=<max>, n=<count>]`.
    std::string serialize(const std::vector<std::string>& vocab) const;
    static RecordTree deserialize(const std::string& text, const std::vector<std::string>& vocab);

    std::uint64_t node_count() const;

private:
    Node root_;
};

// The three-part interpretation: what already happened, which subtask the
// agent pursues now, and the recorded path expected to reach reward.
struct Explanation {
    SubtaskSeq history;
    SubtaskId current = 0;
    std::optional<SubtaskSeq> plan;
};

// Pure read of the tree and Q_h; rng only breaks selection ties.
Explanation explain(const RecordTree& tree, const QTable& q_high, GridPos s, const SubtaskSeq& seq,
                    std::span<const std::uint8_t> vocab_ids, int max_depth, std::mt19937_64& rng);

std::string seq_to_string(const SubtaskSeq& seq, const std::vector<std::string>& vocab);
SubtaskSeq seq_from_string(const std::string& text, const std::vector<std::string>& vocab);

}  // namespace alcs
