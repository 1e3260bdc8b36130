#include "mmm/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace mmm {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = end + 1;
    }
    return lines;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_tokens(std::string_view text) {
    std::vector<std::string> out;
    std::istringstream in{std::string(text)};
    std::string token;
    while (in >> token) out.push_back(token);
    return out;
}

}  // namespace

TokenMode parse_token_mode(std::string_view name) {
    if (name == "chars") return TokenMode::kChars;
    if (name == "tokens") return TokenMode::kTokens;
    throw std::invalid_argument("unknown mode '" + std::string(name) + "' (use chars or tokens)");
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                                 ec.message());
    }
}

Alphabet parse_alphabet(std::string_view text) {
    std::vector<std::string> symbols;
    for (auto line : split_lines(text)) {
        line = trim(line);
        if (!line.empty()) symbols.emplace_back(line);
    }
    return Alphabet(std::move(symbols));
}

Sequence parse_sequence(std::string_view text, TokenMode mode,
                        const std::optional<Alphabet>& alphabet) {
    std::vector<std::string> tokens;
    if (mode == TokenMode::kTokens) {
        tokens = split_tokens(text);
    } else {
        for (auto& c : utf8_chars(text)) {
            if (c.size() == 1 && std::isspace(static_cast<unsigned char>(c[0]))) continue;
            tokens.push_back(std::move(c));
        }
    }

    Sequence seq;
    seq.symbols.reserve(tokens.size());
    if (alphabet) {
        seq.alphabet = *alphabet;
        for (const auto& t : tokens) seq.symbols.push_back(alphabet->index_of(t));
        return seq;
    }
    std::vector<std::string> order;
    std::unordered_map<std::string, Symbol> index;
    for (const auto& t : tokens) {
        auto [it, inserted] = index.emplace(t, static_cast<Symbol>(order.size()));
        if (inserted) order.push_back(t);
        seq.symbols.push_back(it->second);
    }
    if (order.size() < 2) {
        // A constant sample still needs a 2-symbol alphabet.
        throw std::invalid_argument("sequence uses fewer than 2 distinct symbols; "
                                    "declare the alphabet explicitly");
    }
    seq.alphabet = Alphabet(std::move(order));
    return seq;
}

std::string format_sequence(const Sequence& seq, TokenMode mode) {
    std::string out;
    if (mode == TokenMode::kChars) {
        if (!seq.alphabet.single_char()) {
            throw std::invalid_argument("chars mode needs single-character symbols");
        }
        for (Symbol s : seq.symbols) out += seq.alphabet.symbol(s);
    } else {
        for (std::size_t t = 0; t < seq.symbols.size(); ++t) {
            if (t > 0) out += ' ';
            out += seq.alphabet.symbol(seq.symbols[t]);
        }
    }
    out += '\n';
    return out;
}

ContextTree parse_tree(std::string_view text, const Alphabet& alphabet, TokenMode mode) {
    auto lines = split_lines(text);
    std::vector<Context> contexts;
    for (std::size_t k = 0; k < lines.size(); ++k) {
        const auto line = trim(lines[k]);
        if (line.empty()) {
            throw std::invalid_argument("blank line " + std::to_string(k + 1) +
                                        " in tree file (write EMPTY for the empty context)");
        }
        if (line == "EMPTY") {
            contexts.emplace_back();
        } else if (mode == TokenMode::kTokens) {
            Context c;
            for (const auto& t : split_tokens(line)) c.push_back(alphabet.index_of(t));
            contexts.push_back(std::move(c));
        } else {
            Context c;
            for (const auto& ch : utf8_chars(line)) c.push_back(alphabet.index_of(ch));
            contexts.push_back(std::move(c));
        }
    }
    return validate_tree(std::move(contexts), alphabet);
}

std::string format_partition(const Partition& p, const Alphabet& alphabet) {
    if (p.alphabet_size() != alphabet.size()) {
        throw std::invalid_argument("partition and alphabet sizes differ");
    }
    std::string out;
    for (const auto& cell : p.cells()) {
        for (std::size_t k = 0; k < cell.size(); ++k) {
            if (k > 0) out += ' ';
            out += state_string(cell[k], alphabet, p.order());
        }
        out += '\n';
    }
    return out;
}

Partition parse_partition(std::string_view text, const Alphabet& alphabet, int order) {
    std::vector<std::vector<StateId>> cells;
    for (auto line : split_lines(text)) {
        line = trim(line);
        if (line.empty()) continue;
        std::vector<StateId> cell;
        for (const auto& t : split_tokens(line)) cell.push_back(parse_state(t, alphabet, order));
        cells.push_back(std::move(cell));
    }
    return Partition::from_cells(alphabet.size(), order, cells);
}

nlohmann::json model_to_json(const PartitionModel& model) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& cell : model.partition.cells()) {
        nlohmann::json members = nlohmann::json::array();
        for (StateId s : cell) members.push_back(state_string(s, model.alphabet, model.order()));
        cells.push_back(std::move(members));
    }
    nlohmann::json probs = nlohmann::json::array();
    for (const auto& c : model.conditionals) {
        probs.push_back(std::vector<double>(c.probs().begin(), c.probs().end()));
    }
    return {{"alphabet", model.alphabet.symbols()},
            {"order", model.order()},
            {"cells", std::move(cells)},
            {"probs", std::move(probs)}};
}

PartitionModel model_from_json(const nlohmann::json& j) {
    Alphabet alphabet(j.at("alphabet").get<std::vector<std::string>>());
    const int order = j.at("order").get<int>();
    if (order < 1) throw std::invalid_argument("model order must be >= 1");
    std::vector<std::vector<StateId>> cells;
    for (const auto& cell : j.at("cells")) {
        std::vector<StateId> members;
        for (const auto& s : cell) members.push_back(parse_state(s.get<std::string>(), alphabet, order));
        cells.push_back(std::move(members));
    }
    auto partition = Partition::from_cells(alphabet.size(), order, cells);
    std::vector<ConditionalDistribution> conditionals;
    for (const auto& row : j.at("probs")) {
        conditionals.emplace_back(row.get<std::vector<double>>(), 1e-9);
    }
    return PartitionModel(std::move(alphabet), std::move(partition), std::move(conditionals));
}

std::string model_hash(const PartitionModel& model) {
    const std::string text = model_to_json(model).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace mmm
