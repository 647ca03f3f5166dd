#include "lgre/model_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lgre {

namespace {

struct Token {
    std::string text;
    std::size_t column;
};

// Splits one line into words and the punctuation ( ) , : with 1-based columns.
std::vector<Token> tokenize_line(const std::string& line, std::size_t line_no) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        const unsigned char c = static_cast<unsigned char>(line[i]);
        if (c == '#') break;
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        if (c == '(' || c == ')' || c == ',' || c == ':') {
            out.push_back({std::string(1, static_cast<char>(c)), i + 1});
            ++i;
            continue;
        }
        if (std::isalnum(c) || c == '_') {
            std::size_t j = i;
            while (j < line.size() &&
                   (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_')) {
                ++j;
            }
            out.push_back({line.substr(i, j - i), i + 1});
            i = j;
            continue;
        }
        throw ParseError(std::string("unexpected character '") + static_cast<char>(c) + "'",
                         line_no, i + 1);
    }
    return out;
}

bool is_identifier(const std::string& s) {
    return !s.empty() && (std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_');
}

class LineParser {
public:
    LineParser(std::vector<Token> tokens, std::size_t line_no, std::size_t line_length)
        : tokens_(std::move(tokens)), line_(line_no), end_column_(line_length + 1) {}

    bool done() const { return pos_ == tokens_.size(); }
    const Token& peek() const { return tokens_[pos_]; }

    const Token& next(const char* what) {
        if (done()) fail(std::string("expected ") + what + " before end of line", end_column_);
        return tokens_[pos_++];
    }

    void expect(const std::string& punct) {
        const Token& t = next(("'" + punct + "'").c_str());
        if (t.text != punct) fail("expected '" + punct + "', found '" + t.text + "'", t.column);
    }

    const Token& word(const char* what) {
        const Token& t = next(what);
        if (t.text.size() == 1 && std::string("(),:").find(t.text) != std::string::npos) {
            fail(std::string("expected ") + what + ", found '" + t.text + "'", t.column);
        }
        return t;
    }

    [[noreturn]] void fail(const std::string& message, std::size_t column) const {
        throw ParseError(message, line_, column);
    }

    std::size_t line() const { return line_; }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::size_t line_;
    std::size_t end_column_;
};

}  // namespace

RelationalModel parse_model(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool have_domain = false;
    std::vector<ElementId> domain;
    std::set<ElementId> declared;
    UnaryInterpretation unary;
    BinaryInterpretation binary;

    auto check_element = [&](LineParser& p, const Token& t) {
        if (declared.count(t.text) == 0) {
            p.fail("undeclared element '" + t.text + "'", t.column);
        }
    };
    auto check_relation_name = [&](LineParser& p, const Token& t) {
        if (!is_identifier(t.text)) p.fail("invalid relation name '" + t.text + "'", t.column);
        if (t.text == "T" || t.text == "some" || t.text == "ex") {
            p.fail("reserved word '" + t.text + "' cannot name a relation", t.column);
        }
        if (unary.count(t.text) != 0 || binary.count(t.text) != 0) {
            p.fail("relation '" + t.text + "' declared twice", t.column);
        }
    };

    while (std::getline(in, line)) {
        ++line_no;
        auto tokens = tokenize_line(line, line_no);
        if (tokens.empty()) continue;
        LineParser p(std::move(tokens), line_no, line.size());
        const Token keyword = p.word("keyword");

        if (!have_domain) {
            if (keyword.text != "domain") {
                p.fail("model must start with a 'domain:' line", keyword.column);
            }
            p.expect(":");
            while (!p.done()) {
                const Token& t = p.word("element name");
                if (!declared.insert(t.text).second) {
                    p.fail("duplicate element '" + t.text + "'", t.column);
                }
                domain.push_back(t.text);
            }
            if (domain.empty()) p.fail("domain must be nonempty", line.size() + 1);
            have_domain = true;
        } else if (keyword.text == "unary") {
            const Token name = p.word("relation name");
            check_relation_name(p, name);
            p.expect(":");
            auto& members = unary[name.text];
            while (!p.done()) {
                const Token& t = p.word("element name");
                check_element(p, t);
                members.insert(t.text);
            }
        } else if (keyword.text == "binary") {
            const Token name = p.word("relation name");
            check_relation_name(p, name);
            p.expect(":");
            auto& tuples = binary[name.text];
            while (!p.done()) {
                p.expect("(");
                const Token first = p.word("element name");
                check_element(p, first);
                p.expect(",");
                const Token second = p.word("element name");
                check_element(p, second);
                p.expect(")");
                tuples.emplace(first.text, second.text);
            }
        } else if (keyword.text == "domain") {
            p.fail("duplicate domain line", keyword.column);
        } else {
            p.fail("expected 'unary' or 'binary', found '" + keyword.text + "'", keyword.column);
        }
    }
    if (!have_domain) {
        throw ParseError("missing 'domain:' line", line_no + 1, 1);
    }
    try {
        return RelationalModel(std::move(domain), std::move(unary), std::move(binary));
    } catch (const ModelError& e) {
        throw ParseError(e.what(), 1, 1);
    }
}

std::string render_model(const RelationalModel& m) {
    std::ostringstream out;
    out << "domain:";
    for (const auto& v : m.domain()) out << ' ' << v;
    out << '\n';
    for (const auto& [p, members] : m.unary_interpretation()) {
        out << "unary " << p << ':';
        for (const auto& v : members) out << ' ' << v;
        out << '\n';
    }
    for (const auto& [r, tuples] : m.binary_interpretation()) {
        out << "binary " << r << ':';
        for (const auto& [u, v] : tuples) out << " (" << u << ',' << v << ')';
        out << '\n';
    }
    return out.str();
}

RelationalModel model_from_json(const std::string& text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what(), 1, e.byte);
    }
    try {
        std::vector<ElementId> domain = doc.at("domain").get<std::vector<ElementId>>();
        UnaryInterpretation unary;
        BinaryInterpretation binary;
        if (doc.contains("unary")) {
            for (const auto& [p, members] : doc.at("unary").items()) {
                auto& set = unary[p];
                for (const auto& v : members) set.insert(v.get<ElementId>());
            }
        }
        if (doc.contains("binary")) {
            for (const auto& [r, tuples] : doc.at("binary").items()) {
                auto& set = binary[r];
                for (const auto& t : tuples) {
                    if (!t.is_array() || t.size() != 2) {
                        throw ModelError("binary tuple of '" + r + "' must be a pair");
                    }
                    set.emplace(t[0].get<ElementId>(), t[1].get<ElementId>());
                }
            }
        }
        std::set<ElementId> seen;
        for (const auto& v : domain) {
            if (!seen.insert(v).second) throw ModelError("duplicate element '" + v + "'");
        }
        return RelationalModel(std::move(domain), std::move(unary), std::move(binary));
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed model document: ") + e.what(), 1, 1);
    } catch (const ModelError& e) {
        throw ParseError(e.what(), 1, 1);
    }
}

std::string model_to_json(const RelationalModel& m) {
    using nlohmann::json;
    json doc;
    doc["domain"] = m.domain();
    json unary = json::object();
    for (const auto& [p, members] : m.unary_interpretation()) {
        unary[p] = std::vector<ElementId>(members.begin(), members.end());
    }
    json binary = json::object();
    for (const auto& [r, tuples] : m.binary_interpretation()) {
        json list = json::array();
        for (const auto& [u, v] : tuples) list.push_back({u, v});
        binary[r] = list;
    }
    doc["unary"] = unary;
    doc["binary"] = binary;
    return doc.dump(2) + "\n";
}

namespace {

bool has_json_extension(const std::string& path) {
    return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

}  // namespace

RelationalModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open model file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return has_json_extension(path) ? model_from_json(buffer.str()) : parse_model(buffer.str());
}

void save_model(const RelationalModel& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write model file '" + path + "'");
    }
    out << (has_json_extension(path) ? model_to_json(m) : render_model(m));
}

}  // namespace lgre
