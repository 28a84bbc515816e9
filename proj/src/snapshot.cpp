#include "alcs/snapshot.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "alcs/text.hpp"

namespace alcs {

int schema_arity(KeySchema schema) {
    switch (schema) {
        case KeySchema::low: return 3;
        case KeySchema::high: return 3;
        case KeySchema::flat: return 2;
        case KeySchema::option: return 2;
    }
    return 0;
}

namespace {

std::string key_to_line(const QKey& key, KeySchema schema, const std::vector<std::string>& vocab) {
    auto b = key.bytes();
    std::ostringstream out;
    out << int(b[0]) << ',' << int(b[1]) << '\t';
    switch (schema) {
        case KeySchema::low:
            out << vocab.at(b[2]) << '\t' << action_name(static_cast<Action>(b[3]));
            break;
        case KeySchema::high: {
            SubtaskSeq seq(b.begin() + 3, b.begin() + 3 + b[2]);
            out << seq_to_string(seq, vocab) << '\t' << vocab.at(b[3 + b[2]]);
            break;
        }
        case KeySchema::flat:
            out << action_name(static_cast<Action>(b[2]));
            break;
        case KeySchema::option:
            out << vocab.at(b[2]);
            break;
    }
    return out.str();
}

QKey key_from_fields(const std::vector<std::string>& fields, KeySchema schema,
                     const std::vector<std::string>& vocab) {
    auto sub_id = [&vocab](const std::string& name) -> std::uint8_t {
        for (std::size_t i = 0; i < vocab.size(); ++i)
            if (vocab[i] == name) return static_cast<std::uint8_t>(i);
        throw std::invalid_argument("snapshot: unknown subtask '" + name + "'");
    };
    QKey k;
    k.add_pos(pos_from_string(fields[0]));
    switch (schema) {
        case KeySchema::low:
            k.add_symbol(sub_id(fields[1]));
            k.add_symbol(static_cast<std::uint8_t>(action_from_name(fields[2])));
            break;
        case KeySchema::high:
            k.add_seq(seq_from_string(fields[1], vocab));
            k.add_symbol(sub_id(fields[2]));
            break;
        case KeySchema::flat:
            k.add_symbol(static_cast<std::uint8_t>(action_from_name(fields[1])));
            break;
        case KeySchema::option:
            k.add_symbol(sub_id(fields[1]));
            break;
    }
    return k;
}

}  // namespace

void save_table(const QTable& table, KeySchema schema, const std::vector<std::string>& vocab,
                const std::string& path) {
    if (table.arity() != schema_arity(schema))
        throw std::invalid_argument("snapshot: table arity does not match schema");
    std::vector<std::string> lines;
    lines.reserve(table.size());
    for (const auto& [key, value] : table.entries())
        lines.push_back(key_to_line(key, schema, vocab) + '\t' + format_double(value));
    std::sort(lines.begin(), lines.end());
    std::string body;
    for (const auto& line : lines) {
        body += line;
        body += '\n';
    }
    write_text_file(path, body);
}

QTable load_table(KeySchema schema, const std::vector<std::string>& vocab, const std::string& path) {
    QTable table(schema_arity(schema));
    std::istringstream in(read_text_file(path));
    std::string line;
    const std::size_t n_fields = static_cast<std::size_t>(schema_arity(schema)) + 1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = split(line, '\t');
        if (fields.size() != n_fields)
            throw std::invalid_argument("snapshot: malformed record '" + line + "'");
        QKey key = key_from_fields(fields, schema, vocab);
        // lr = 1 writes the stored value exactly
        table.td_set(key, parse_double(fields.back()), 1.0);
    }
    return table;
}

void save_tree(const RecordTree& tree, const std::vector<std::string>& vocab, const std::string& path) {
    write_text_file(path, tree.serialize(vocab));
}

RecordTree load_tree(const std::vector<std::string>& vocab, const std::string& path) {
    return RecordTree::deserialize(read_text_file(path), vocab);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << content;
    if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

}  // namespace alcs
