#include "astroturf/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "astroturf/error.hpp"

namespace astroturf::config {

namespace {

using nlohmann::json;

class TomlReader {
public:
    explicit TomlReader(std::string_view s) : s_(s) {}

    json run() {
        json root = json::object();
        json* table = &root;
        while (true) {
            skip_blank_lines();
            if (pos_ >= s_.size()) break;
            if (s_[pos_] == '[') {
                ++pos_;
                table = &root;
                for (const auto& part : dotted_key(']')) {
                    json& next = (*table)[part];
                    if (next.is_null()) next = json::object();
                    if (!next.is_object()) fail("table name collides with a value");
                    table = &next;
                }
                expect(']');
            } else {
                auto path = dotted_key('=');
                expect('=');
                skip_inline_ws();
                json* target = table;
                for (std::size_t i = 0; i + 1 < path.size(); ++i) {
                    json& next = (*target)[path[i]];
                    if (next.is_null()) next = json::object();
                    target = &next;
                }
                (*target)[path.back()] = value();
            }
            end_of_line();
        }
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        std::size_t line = 1;
        for (std::size_t i = 0; i < pos_ && i < s_.size(); ++i) line += s_[i] == '\n';
        throw DataError("config line " + std::to_string(line) + ": " + what);
    }

    void skip_inline_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }

    void skip_comment() {
        if (pos_ < s_.size() && s_[pos_] == '#') {
            while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
        }
    }

    void skip_blank_lines() {
        while (pos_ < s_.size()) {
            skip_inline_ws();
            skip_comment();
            if (pos_ < s_.size() && (s_[pos_] == '\n' || s_[pos_] == '\r')) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    // Whitespace, newlines and comments, used inside arrays.
    void skip_all_ws() {
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                ++pos_;
            } else if (c == '#') {
                skip_comment();
            } else {
                break;
            }
        }
    }

    void end_of_line() {
        skip_inline_ws();
        skip_comment();
        if (pos_ < s_.size() && s_[pos_] == '\r') ++pos_;
        if (pos_ < s_.size() && s_[pos_] != '\n') fail("unexpected trailing characters");
    }

    void expect(char c) {
        skip_inline_ws();
        if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::vector<std::string> dotted_key(char terminator) {
        std::vector<std::string> parts;
        while (true) {
            skip_inline_ws();
            if (pos_ < s_.size() && (s_[pos_] == '"' || s_[pos_] == '\'')) {
                parts.push_back(string_literal());
            } else {
                std::size_t start = pos_;
                while (pos_ < s_.size() &&
                       (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                        s_[pos_] == '-')) {
                    ++pos_;
                }
                if (pos_ == start) fail("expected key");
                parts.emplace_back(s_.substr(start, pos_ - start));
            }
            skip_inline_ws();
            if (pos_ < s_.size() && s_[pos_] == '.') {
                ++pos_;
                continue;
            }
            if (pos_ >= s_.size() || s_[pos_] != terminator) fail("malformed key");
            return parts;
        }
    }

    std::string string_literal() {
        char q = s_[pos_++];
        std::string out;
        while (pos_ < s_.size() && s_[pos_] != q) {
            char c = s_[pos_++];
            if (c == '\n') fail("newline in string");
            if (c == '\\' && q == '"' && pos_ < s_.size()) {
                char e = s_[pos_++];
                switch (e) {
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    case '\\': out += '\\'; break;
                    case '"': out += '"'; break;
                    default: fail("unsupported escape");
                }
            } else {
                out += c;
            }
        }
        if (pos_ >= s_.size()) fail("unterminated string");
        ++pos_;
        return out;
    }

    json value() {
        if (pos_ >= s_.size()) fail("missing value");
        char c = s_[pos_];
        if (c == '"' || c == '\'') return string_literal();
        if (c == '[') {
            ++pos_;
            json arr = json::array();
            while (true) {
                skip_all_ws();
                if (pos_ < s_.size() && s_[pos_] == ']') {
                    ++pos_;
                    return arr;
                }
                arr.push_back(value());
                skip_all_ws();
                if (pos_ < s_.size() && s_[pos_] == ',') {
                    ++pos_;
                } else if (pos_ < s_.size() && s_[pos_] == ']') {
                    ++pos_;
                    return arr;
                } else {
                    fail("expected ',' or ']' in array");
                }
            }
        }
        std::size_t start = pos_;
        while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != '#' &&
               s_[pos_] != '\n' && s_[pos_] != '\r' && s_[pos_] != ' ' && s_[pos_] != '\t') {
            ++pos_;
        }
        std::string tok(s_.substr(start, pos_ - start));
        if (tok == "true") return true;
        if (tok == "false") return false;
        if (tok == "inf" || tok == "+inf") return std::numeric_limits<double>::infinity();
        std::string clean;
        for (char ch : tok) {
            if (ch != '_') clean += ch;
        }
        if (clean.empty()) fail("missing value");
        bool is_float = clean.find_first_of(".eE") != std::string::npos;
        try {
            std::size_t used = 0;
            if (is_float) {
                double d = std::stod(clean, &used);
                if (used == clean.size()) return d;
            } else {
                long long v = std::stoll(clean, &used);
                if (used == clean.size()) return v;
            }
        } catch (const std::exception&) {
        }
        fail("bad value '" + tok + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

nlohmann::json parse_toml(std::string_view content) { return TomlReader(content).run(); }

nlohmann::json load_toml(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open config " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_toml(buf.str());
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

}  // namespace astroturf::config
