#pragma once

#include <string>
#include <vector>

#include "alcs/interpret.hpp"
#include "alcs/qcore.hpp"

namespace alcs {

// Byte layouts of the packed keys used by the tables we ship.
enum class KeySchema {
    low,     // (state, subtask, action)   — Q_l and HER's goal table
    high,    // (state, sequence, subtask) — Q_h
    flat,    // (state, action)            — flat Q-learning
    option,  // (state, option)            — hrl / interrupting high level
};

int schema_arity(KeySchema schema);

// Tables dump as sorted text records `key-parts<TAB>value`, one per line,
// with doubles in shortest round-trip form; load(save(t)) is bit-exact.
void save_table(const QTable& table, KeySchema schema, const std::vector<std::string>& vocab,
                const std::string& path);
QTable load_table(KeySchema schema, const std::vector<std::string>& vocab, const std::string& path);

void save_tree(const RecordTree& tree, const std::vector<std::string>& vocab, const std::string& path);
RecordTree load_tree(const std::vector<std::string>& vocab, const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace alcs
