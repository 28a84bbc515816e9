#include "alcs/interpret.hpp"

#include <deque>
#include <sstream>
#include <stdexcept>

#include "alcs/highlevel.hpp"
#include "alcs/text.hpp"

namespace alcs {

namespace {

RecordTree::Node* walk_create(RecordTree::Node* node, const SubtaskSeq& seq) {
    for (SubtaskId id : seq) {
        auto& child = node->children[id];
        if (!child) child = std::make_unique<RecordTree::Node>();
        node = child.get();
    }
    return node;
}

const RecordTree::Node* walk(const RecordTree::Node* node, const SubtaskSeq& seq) {
    for (SubtaskId id : seq) {
        auto it = node->children.find(id);
        if (it == node->children.end()) return nullptr;
        node = it->second.get();
    }
    return node;
}

}  // namespace

void RecordTree::record_achievement(const SubtaskSeq& seq_before, SubtaskId p_act, double r) {
    Node* parent = walk_create(&root_, seq_before);
    auto& child = parent->children[p_act];
    if (!child) {
        child = std::make_unique<Node>();
        child->reward_max = r;
    } else {
        child->reward_max = std::max(child->reward_max, r);
    }
    child->visits += 1;
}

const RecordTree::Node* RecordTree::current_node(const SubtaskSeq& seq) const {
    return walk(&root_, seq);
}

std::optional<SubtaskSeq> RecordTree::plan_bfs(const SubtaskSeq& seq, SubtaskId p_next,
                                               int max_depth) const {
    SubtaskSeq start_seq = seq;
    start_seq.push_back(p_next);
    const Node* start = walk(&root_, start_seq);
    if (!start) return std::nullopt;
    if (start->reward_max > 0.0) return SubtaskSeq{};

    struct Item {
        const Node* node;
        SubtaskSeq path;  // labels strictly after p_next
        int depth;
    };
    std::deque<Item> queue{{start, {}, 0}};
    while (!queue.empty()) {
        Item item = std::move(queue.front());
        queue.pop_front();
        if (item.depth >= max_depth) continue;
        for (const auto& [id, child] : item.node->children) {
            SubtaskSeq path = item.path;
            path.push_back(id);
            if (child->reward_max > 0.0) return path;
            queue.push_back({child.get(), std::move(path), item.depth + 1});
        }
    }
    return std::nullopt;
}

std::uint64_t RecordTree::node_count() const {
    std::uint64_t n = 0;
    std::deque<const Node*> queue{&root_};
    while (!queue.empty()) {
        const Node* node = queue.front();
        queue.pop_front();
        n += 1;
        for (const auto& [id, child] : node->children) queue.push_back(child.get());
    }
    return n;
}

namespace {

void serialize_rec(const RecordTree::Node* node, const SubtaskSeq& seq,
                   const std::vector<std::string>& vocab, std::ostringstream& out) {
    for (const auto& [id, child] : node->children) {
        out << std::string(2 * (seq.size() + 1), ' ') << seq_to_string(seq, vocab) << " -> "
            << vocab.at(id) << " [r=" << format_double(child->reward_max) << ", n=" << child->visits
            << "]\n";
        SubtaskSeq next = seq;
        next.push_back(id);
        serialize_rec(child.get(), next, vocab, out);
    }
}

}  // namespace

std::string RecordTree::serialize(const std::vector<std::string>& vocab) const {
    std::ostringstream out;
    out << "()\n";
    serialize_rec(&root_, {}, vocab, out);
    return out.str();
}

RecordTree RecordTree::deserialize(const std::string& text, const std::vector<std::string>& vocab) {
    RecordTree tree;
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        std::string line(trim(raw));
        if (line.empty() || line == "()") continue;
        auto arrow = line.find(" -> ");
        auto bracket = line.find(" [r=", arrow);
        auto comma = line.find(", n=", bracket);
        auto end = line.find(']', comma);
        if (arrow == std::string::npos || bracket == std::string::npos || comma == std::string::npos ||
            end == std::string::npos)
            throw std::invalid_argument("record tree: malformed line '" + line + "'");
        SubtaskSeq seq = seq_from_string(line.substr(0, arrow), vocab);
        std::string child_name = line.substr(arrow + 4, bracket - arrow - 4);
        double r = parse_double(line.substr(bracket + 4, comma - bracket - 4));
        std::int64_t n = parse_int(line.substr(comma + 4, end - comma - 4));

        Node* parent = walk_create(&tree.root_, seq);
        SubtaskId id = 0;
        bool found = false;
        for (std::size_t i = 0; i < vocab.size(); ++i)
            if (vocab[i] == child_name) {
                id = static_cast<SubtaskId>(i);
                found = true;
            }
        if (!found) throw std::invalid_argument("record tree: unknown subtask '" + child_name + "'");
        auto& child = parent->children[id];
        if (!child) child = std::make_unique<Node>();
        child->reward_max = r;
        child->visits = static_cast<std::uint64_t>(n);
    }
    return tree;
}

Explanation explain(const RecordTree& tree, const QTable& q_high, GridPos s, const SubtaskSeq& seq,
                    std::span<const std::uint8_t> vocab_ids, int max_depth, std::mt19937_64& rng) {
    Explanation ex;
    ex.history = seq;
    ex.current = select_subtask(q_high, s, seq, vocab_ids, rng);
    ex.plan = tree.plan_bfs(seq, ex.current, max_depth);
    return ex;
}

std::string seq_to_string(const SubtaskSeq& seq, const std::vector<std::string>& vocab) {
    if (seq.empty()) return "()";
    std::string out;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i) out += '-';
        out += vocab.at(seq[i]);
    }
    return out;
}

SubtaskSeq seq_from_string(const std::string& text, const std::vector<std::string>& vocab) {
    SubtaskSeq seq;
    std::string body(trim(text));
    if (body.empty() || body == "()") return seq;
    for (const std::string& part : split(body, '-')) {
        bool found = false;
        for (std::size_t i = 0; i < vocab.size(); ++i)
            if (vocab[i] == part) {
                seq.push_back(static_cast<SubtaskId>(i));
                found = true;
            }
        if (!found) throw std::invalid_argument("sequence: unknown subtask '" + part + "'");
    }
    return seq;
}

}  // namespace alcs
