// Scenario documents: a flat, TOML-like key/value format with [table] and
// [[array-of-tables]] sections.
//
//   iterations = 1000
//   p_active = 0.3
//
//   [engine]
//   kind = "weighted_mean"
//
//   [[provider]]
//   id = "op1"
//   behavior = "camouflaged_negative"
//   percent = 30
//
//   [[service]]
//   relying_party = "rp1"
//   id = "web"
//   schedule = [[0, 0.9], [500, 0.3]]
//
// parse_scenario() reports every problem it finds, not just the first.
// emit_scenario() writes the canonical form, which parses back to an equal
// Scenario and is the input of the run fingerprint.

#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "romeo/behaviors.hpp"
#include "romeo/engines.hpp"
#include "romeo/scenario.hpp"

namespace romeo {

/// A scenario document that failed to parse or validate. what() lists every
/// error, one per line.
class ScenarioError : public ConfigError {
public:
    explicit ScenarioError(std::vector<std::string> errors)
        : ConfigError(join(errors)), errors_(std::move(errors)) {}

    const std::vector<std::string>& errors() const { return errors_; }

private:
    static std::string join(const std::vector<std::string>& errors) {
        std::string out;
        for (const auto& e : errors) {
            if (!out.empty()) out += '\n';
            out += e;
        }
        return out;
    }
    std::vector<std::string> errors_;
};

namespace text {

struct Value {
    enum class Type { String, Integer, Float, Bool, Array };

    Type type = Type::String;
    std::string string;
    std::int64_t integer = 0;
    double number = 0.0;
    bool boolean = false;
    std::vector<Value> items;
    int line = 0;
    int column = 0;

    bool is_number() const { return type == Type::Integer || type == Type::Float; }
    double as_double() const { return type == Type::Integer ? static_cast<double>(integer) : number; }
};

struct Table {
    std::vector<std::pair<std::string, Value>> entries;
    int line = 0;

    const Value* find(std::string_view key) const {
        for (const auto& [k, v] : entries) {
            if (k == key) return &v;
        }
        return nullptr;
    }
};

struct Document {
    Table root;
    std::map<std::string, Table> tables;
    std::map<std::string, std::vector<Table>> arrays;
};

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(int line, int column, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                             ": " + msg) {}
};

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Document parse() {
        Document doc;
        Table* current = &doc.root;
        while (true) {
            skip_blank_lines();
            if (eof()) break;
            if (peek() == '[') {
                current = header(doc);
            } else {
                key_value(*current);
            }
        }
        return doc;
    }

private:
    bool eof() const { return pos_ >= src_.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }
    char get() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        return c;
    }
    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(line_, column_, msg); }

    void skip_spaces() {
        while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) get();
    }
    void skip_comment() {
        if (peek() == '#') {
            while (!eof() && peek() != '\n') get();
        }
    }
    void skip_blank_lines() {
        while (!eof()) {
            skip_spaces();
            skip_comment();
            if (peek() == '\n') {
                get();
            } else {
                break;
            }
        }
    }
    // Whitespace, newlines and comments, as allowed inside arrays.
    void skip_layout() {
        while (!eof()) {
            skip_spaces();
            skip_comment();
            if (peek() == '\n') {
                get();
            } else {
                return;
            }
        }
    }
    void end_of_line() {
        skip_spaces();
        skip_comment();
        if (eof()) return;
        if (peek() != '\n') fail(std::string("unexpected character '") + peek() + "'");
        get();
    }

    static bool is_key_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
    }
    std::string bare_key() {
        std::string key;
        while (!eof() && is_key_char(peek())) key += get();
        if (key.empty()) fail("expected a key");
        return key;
    }

    Table* header(Document& doc) {
        int line = line_;
        get();
        bool array = peek() == '[';
        if (array) get();
        skip_spaces();
        std::string name = bare_key();
        skip_spaces();
        if (peek() != ']') fail("expected ']'");
        get();
        if (array) {
            if (peek() != ']') fail("expected ']]'");
            get();
        }
        end_of_line();
        if (array) {
            if (doc.tables.count(name)) fail("'" + name + "' is already a table");
            auto& list = doc.arrays[name];
            list.emplace_back();
            list.back().line = line;
            return &list.back();
        }
        if (doc.arrays.count(name)) fail("'" + name + "' is already an array of tables");
        if (!doc.tables.emplace(name, Table{}).second) fail("duplicate table [" + name + "]");
        doc.tables[name].line = line;
        return &doc.tables[name];
    }

    void key_value(Table& table) {
        int line = line_;
        int column = column_;
        std::string key = bare_key();
        skip_spaces();
        if (peek() != '=') fail("expected '=' after key '" + key + "'");
        get();
        skip_spaces();
        Value v = value();
        if (table.find(key)) throw SyntaxError(line, column, "duplicate key '" + key + "'");
        table.entries.emplace_back(std::move(key), std::move(v));
        end_of_line();
    }

    Value value() {
        Value v;
        v.line = line_;
        v.column = column_;
        char c = peek();
        if (c == '"') {
            v.type = Value::Type::String;
            v.string = quoted();
        } else if (c == '[') {
            v.type = Value::Type::Array;
            get();
            skip_layout();
            while (peek() != ']') {
                if (eof()) fail("unterminated array");
                v.items.push_back(value());
                skip_layout();
                if (peek() == ',') {
                    get();
                    skip_layout();
                } else if (peek() != ']') {
                    fail("expected ',' or ']' in array");
                }
            }
            get();
        } else if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string word = bare_key();
            if (word == "true" || word == "false") {
                v.type = Value::Type::Bool;
                v.boolean = word == "true";
            } else {
                throw SyntaxError(v.line, v.column, "unexpected word '" + word + "' (strings need quotes)");
            }
        } else {
            number(v);
        }
        return v;
    }

    std::string quoted() {
        get();
        std::string out;
        while (true) {
            if (eof() || peek() == '\n') fail("unterminated string");
            char c = get();
            if (c == '"') break;
            if (c == '\\') {
                if (eof()) fail("unterminated string");
                char e = get();
                switch (e) {
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                default: fail(std::string("unknown escape '\\") + e + "'");
                }
            } else {
                out += c;
            }
        }
        return out;
    }

    void number(Value& v) {
        std::size_t start = pos_;
        bool is_float = false;
        if (peek() == '+' || peek() == '-') get();
        while (!eof()) {
            char c = peek();
            if (std::isdigit(static_cast<unsigned char>(c))) {
                get();
            } else if (c == '.' || c == 'e' || c == 'E') {
                is_float = true;
                get();
                if ((c == 'e' || c == 'E') && (peek() == '+' || peek() == '-')) get();
            } else {
                break;
            }
        }
        std::string_view lexeme = src_.substr(start, pos_ - start);
        if (lexeme.empty() || lexeme == "+" || lexeme == "-") {
            throw SyntaxError(v.line, v.column, "expected a value");
        }
        std::string_view digits = lexeme.front() == '+' ? lexeme.substr(1) : lexeme;
        const char* first = digits.data();
        const char* last = digits.data() + digits.size();
        std::from_chars_result r{};
        if (is_float) {
            v.type = Value::Type::Float;
            r = std::from_chars(first, last, v.number);
        } else {
            v.type = Value::Type::Integer;
            r = std::from_chars(first, last, v.integer);
        }
        if (r.ec != std::errc{} || r.ptr != last) {
            throw SyntaxError(v.line, v.column, "malformed number '" + std::string(lexeme) + "'");
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

// Typed access to one table's fields; remembers which keys were read so that
// leftovers can be reported as unknown.
class Fields {
public:
    Fields(const Table& table, std::string where, std::vector<std::string>& errors)
        : table_(table), where_(std::move(where)), errors_(errors) {}

    const std::string& where() const { return where_; }
    bool has(std::string_view key) const { return table_.find(key) != nullptr; }

    std::optional<double> number(const std::string& key) {
        const Value* v = take(key);
        if (!v) return std::nullopt;
        if (!v->is_number()) return error(key, "expected a number", *v), std::nullopt;
        return v->as_double();
    }

    std::optional<std::uint64_t> count(const std::string& key) {
        const Value* v = take(key);
        if (!v) return std::nullopt;
        if (v->type != Value::Type::Integer) return error(key, "expected an integer", *v), std::nullopt;
        if (v->integer < 0) return error(key, "must be non-negative", *v), std::nullopt;
        return static_cast<std::uint64_t>(v->integer);
    }

    std::optional<std::string> string(const std::string& key) {
        const Value* v = take(key);
        if (!v) return std::nullopt;
        if (v->type != Value::Type::String) return error(key, "expected a string", *v), std::nullopt;
        return v->string;
    }

    const Value* raw(const std::string& key) { return take(key); }

    void require(const std::string& key) {
        if (!has(key)) errors_.push_back(where_ + key + ": required key is missing");
    }

    void error(const std::string& key, const std::string& msg, const Value& at) {
        errors_.push_back(where_ + key + ": " + msg + " (line " + std::to_string(at.line) + ")");
    }
    void error(const std::string& key, const std::string& msg) {
        errors_.push_back(where_ + key + ": " + msg);
    }

    /// Reports keys that were never read.
    void finish() {
        for (const auto& [k, v] : table_.entries) {
            if (!used_.count(k)) error(k, "unknown key", v);
        }
    }

private:
    const Value* take(const std::string& key) {
        used_.insert(key);
        return table_.find(key);
    }

    const Table& table_;
    std::string where_;
    std::vector<std::string>& errors_;
    std::set<std::string> used_;
};

inline std::optional<UserBehavior> user_behavior_from(std::string_view name) {
    if (name == "normal") return UserBehavior::Normal;
    if (name == "positive_rater") return UserBehavior::PositiveRater;
    if (name == "negative_rater") return UserBehavior::NegativeRater;
    return std::nullopt;
}

inline std::optional<ProviderBehavior> provider_behavior_from(Fields& f, std::string_view name) {
    if (name == "normal") return provider::Normal{};
    if (name == "positive_rater") return provider::PositiveRater{};
    if (name == "negative_rater") return provider::NegativeRater{};
    if (name == "camouflaged_positive" || name == "camouflaged_negative") {
        f.require("percent");
        double p = f.number("percent").value_or(0.0);
        if (name == "camouflaged_positive") return provider::CamouflagedPositive{p};
        return provider::CamouflagedNegative{p};
    }
    if (name == "sybil_positive" || name == "sybil_negative") {
        f.require("period");
        std::uint64_t k = f.count("period").value_or(1);
        if (name == "sybil_positive") return provider::SybilPositive{k};
        return provider::SybilNegative{k};
    }
    return std::nullopt;
}

inline std::optional<RelyingPartyBehavior> rp_behavior_from(Fields& f, std::string_view name) {
    if (name == "normal") return relying::Normal{};
    if (name == "malicious") return relying::Malicious{};
    if (name == "not_participative") return relying::NotParticipative{};
    if (name == "sybil") {
        f.require("period");
        return relying::Sybil{f.count("period").value_or(1)};
    }
    return std::nullopt;
}

inline std::optional<Rule> rule_from(Fields& f) {
    f.require("kind");
    auto kind = f.string("kind");
    if (!kind) return std::nullopt;
    if (*kind == "cap_count") {
        f.require("count");
        return rules::CapCount{static_cast<std::size_t>(f.count("count").value_or(1))};
    }
    if (*kind == "min_source_weight") {
        f.require("threshold");
        return rules::MinSourceWeight{f.number("threshold").value_or(0.0)};
    }
    if (*kind == "max_age") {
        f.require("age");
        return rules::MaxAge{f.count("age").value_or(0)};
    }
    if (*kind == "overload_cap") {
        f.require("trigger");
        f.require("cap");
        auto trigger = static_cast<std::size_t>(f.count("trigger").value_or(1));
        auto cap = static_cast<std::size_t>(f.count("cap").value_or(1));
        return rules::OverloadCap{trigger, cap};
    }
    f.error("kind", "unknown rule kind '" + *kind + "'");
    return std::nullopt;
}

inline std::optional<std::vector<double>> number_list(Fields& f, const std::string& key,
                                                      const Value& v) {
    if (v.type != Value::Type::Array) return f.error(key, "expected an array", v), std::nullopt;
    std::vector<double> out;
    for (const auto& item : v.items) {
        if (!item.is_number()) return f.error(key, "expected numbers", item), std::nullopt;
        out.push_back(item.as_double());
    }
    return out;
}

inline std::optional<std::vector<QualityPiece>> schedule_from(Fields& f, const Value& v) {
    if (v.type != Value::Type::Array) {
        return f.error("schedule", "expected [[start, quality], ...]", v), std::nullopt;
    }
    std::vector<QualityPiece> pieces;
    for (const auto& item : v.items) {
        if (item.type != Value::Type::Array || item.items.size() != 2 ||
            item.items[0].type != Value::Type::Integer || !item.items[1].is_number()) {
            return f.error("schedule", "each piece must be [start-iteration, quality]", item),
                   std::nullopt;
        }
        if (item.items[0].integer < 0) {
            return f.error("schedule", "start iteration must be non-negative", item), std::nullopt;
        }
        pieces.push_back({static_cast<Iteration>(item.items[0].integer), item.items[1].as_double()});
    }
    return pieces;
}

} // namespace text

/// Parses and validates a scenario document. Throws ScenarioError carrying
/// every problem found.
inline Scenario parse_scenario(std::string_view document) {
    using namespace text;
    Document doc;
    try {
        doc = Parser(document).parse();
    } catch (const SyntaxError& e) {
        throw ScenarioError({std::string("syntax error: ") + e.what()});
    }

    std::vector<std::string> errors;
    Scenario s;

    Fields root(doc.root, "", errors);
    root.require("iterations");
    if (auto v = root.count("iterations")) {
        s.iterations = *v;
        if (*v == 0) root.error("iterations", "must be a positive integer");
    }
    if (auto v = root.count("seed")) s.seed = *v;
    if (auto v = root.number("p_active")) s.p_active = *v;
    if (auto v = root.count("preference_dimension")) s.preference_dimension = *v;
    if (auto v = root.count("cache_ttl")) s.cache_ttl = *v;
    if (auto v = root.count("recommender_list_size")) s.recommender_list_size = *v;
    if (auto v = root.number("feedback_noise")) s.feedback_noise = *v;
    if (auto v = root.count("warmup")) s.warmup = *v;
    if (auto v = root.string("monitored_relying_party")) s.monitored_relying_party = *v;
    if (auto v = root.string("target")) {
        if (*v == "monitored") {
            s.target = TargetSelection::Monitored;
        } else if (*v == "uniform") {
            s.target = TargetSelection::Uniform;
        } else {
            root.error("target", "must be \"monitored\" or \"uniform\"");
        }
    }
    root.finish();

    for (const auto& [name, table] : doc.tables) {
        if (name != "engine") {
            errors.push_back("[" + name + "]: unknown table (line " + std::to_string(table.line) + ")");
            continue;
        }
        Fields f(table, "engine.", errors);
        if (auto kind = f.string("kind")) {
            if (*kind == "weighted_mean") {
                s.engine.kind = EngineKind::WeightedMean;
            } else if (*kind == "time_decay_weighted_mean") {
                s.engine.kind = EngineKind::TimeDecayWeightedMean;
            } else {
                f.error("kind", "unknown engine '" + *kind + "'");
            }
        }
        if (auto v = f.number("decay")) s.engine.decay = *v;
        if (auto v = f.number("default_score")) s.engine.default_score = *v;
        if (auto v = f.number("learning_rate")) s.engine.learning_rate = *v;
        f.finish();
    }

    static const std::set<std::string> known_arrays = {"rule", "provider", "user", "relying_party",
                                                       "service"};
    for (const auto& [name, list] : doc.arrays) {
        if (!known_arrays.count(name)) {
            errors.push_back("[[" + name + "]]: unknown section (line " +
                             std::to_string(list.front().line) + ")");
        }
    }
    auto section = [&](const std::string& name) -> const std::vector<Table>& {
        static const std::vector<Table> none;
        auto it = doc.arrays.find(name);
        return it == doc.arrays.end() ? none : it->second;
    };
    auto label = [](const std::string& name, std::size_t i) {
        return name + "[" + std::to_string(i) + "].";
    };

    const auto& rule_tables = section("rule");
    for (std::size_t i = 0; i < rule_tables.size(); ++i) {
        Fields f(rule_tables[i], label("rule", i), errors);
        if (auto r = rule_from(f)) s.rules.push_back(*r);
        f.finish();
    }

    const auto& provider_tables = section("provider");
    for (std::size_t i = 0; i < provider_tables.size(); ++i) {
        Fields f(provider_tables[i], label("provider", i), errors);
        ProviderSpec p;
        f.require("id");
        p.id = f.string("id").value_or("");
        if (auto b = f.string("behavior")) {
            if (auto parsed = provider_behavior_from(f, *b)) {
                p.behavior = *parsed;
            } else {
                f.error("behavior", "unknown provider behavior '" + *b + "'");
            }
        }
        f.finish();
        s.providers.push_back(std::move(p));
    }

    const auto& user_tables = section("user");
    for (std::size_t i = 0; i < user_tables.size(); ++i) {
        Fields f(user_tables[i], label("user", i), errors);
        UserGroup g;
        if (auto v = f.count("count")) g.count = *v;
        if (auto b = f.string("behavior")) {
            if (auto parsed = user_behavior_from(*b)) {
                g.behavior = *parsed;
            } else {
                f.error("behavior", "unknown user behavior '" + *b + "'");
            }
        }
        f.require("provider");
        g.provider = f.string("provider").value_or("");
        if (const Value* prefs = f.raw("preferences")) {
            if (prefs->type == Value::Type::String) {
                if (prefs->string != "uniform") {
                    f.error("preferences", "must be a vector or \"uniform\"", *prefs);
                }
            } else {
                g.preferences = number_list(f, "preferences", *prefs);
            }
        } else {
            g.preferences = std::vector<double>(s.preference_dimension, 0.5);
        }
        f.finish();
        s.users.push_back(std::move(g));
    }

    const auto& rp_tables = section("relying_party");
    for (std::size_t i = 0; i < rp_tables.size(); ++i) {
        Fields f(rp_tables[i], label("relying_party", i), errors);
        RelyingPartySpec rp;
        f.require("id");
        rp.id = f.string("id").value_or("");
        if (auto b = f.string("behavior")) {
            if (auto parsed = rp_behavior_from(f, *b)) {
                rp.behavior = *parsed;
            } else {
                f.error("behavior", "unknown relying party behavior '" + *b + "'");
            }
        }
        if (auto v = f.number("noise")) rp.noise = *v;
        f.finish();
        s.relying_parties.push_back(std::move(rp));
    }

    const auto& service_tables = section("service");
    for (std::size_t i = 0; i < service_tables.size(); ++i) {
        Fields f(service_tables[i], label("service", i), errors);
        ServiceSpec svc;
        f.require("relying_party");
        f.require("id");
        f.require("schedule");
        auto owner = f.string("relying_party");
        svc.id = f.string("id").value_or("");
        if (const Value* sched = f.raw("schedule")) {
            if (auto pieces = schedule_from(f, *sched)) svc.schedule = std::move(*pieces);
        }
        f.finish();
        if (!owner) continue;
        bool attached = false;
        for (auto& rp : s.relying_parties) {
            if (rp.id == *owner) {
                rp.services.push_back(std::move(svc));
                attached = true;
                break;
            }
        }
        if (!attached) f.error("relying_party", "undefined relying party '" + *owner + "'");
    }

    for (auto& e : validation_errors(s)) errors.push_back(std::move(e));
    if (!errors.empty()) throw ScenarioError(std::move(errors));
    return s;
}

namespace text {

inline std::string format_double(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    std::string out(buf, r.ptr);
    if (out.find_first_of(".eEn") == std::string::npos) out += ".0";
    return out;
}

inline std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
        }
    }
    return out + "\"";
}

} // namespace text

/// Canonical text of a scenario: every field explicit, fixed key order.
inline std::string emit_scenario(const Scenario& s) {
    using text::format_double;
    using text::quote;
    std::string out;
    auto line = [&](const std::string& key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };

    line("iterations", std::to_string(s.iterations));
    line("seed", std::to_string(s.seed));
    line("p_active", format_double(s.p_active));
    line("preference_dimension", std::to_string(s.preference_dimension));
    line("cache_ttl", std::to_string(s.cache_ttl));
    line("recommender_list_size", std::to_string(s.recommender_list_size));
    line("feedback_noise", format_double(s.feedback_noise));
    if (s.warmup) line("warmup", std::to_string(*s.warmup));
    if (!s.monitored_relying_party.empty()) {
        line("monitored_relying_party", quote(s.monitored_relying_party));
    }
    line("target", quote(s.target == TargetSelection::Uniform ? "uniform" : "monitored"));

    out += "\n[engine]\n";
    line("kind", quote(s.engine.kind == EngineKind::WeightedMean ? "weighted_mean"
                                                                 : "time_decay_weighted_mean"));
    line("decay", format_double(s.engine.decay));
    line("default_score", format_double(s.engine.default_score));
    line("learning_rate", format_double(s.engine.learning_rate));

    for (const Rule& rule : s.rules) {
        out += "\n[[rule]]\n";
        std::visit(
            [&](const auto& r) {
                using T = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<T, rules::CapCount>) {
                    line("kind", quote("cap_count"));
                    line("count", std::to_string(r.count));
                } else if constexpr (std::is_same_v<T, rules::MinSourceWeight>) {
                    line("kind", quote("min_source_weight"));
                    line("threshold", format_double(r.threshold));
                } else if constexpr (std::is_same_v<T, rules::MaxAge>) {
                    line("kind", quote("max_age"));
                    line("age", std::to_string(r.max_age));
                } else {
                    line("kind", quote("overload_cap"));
                    line("trigger", std::to_string(r.trigger));
                    line("cap", std::to_string(r.cap));
                }
            },
            rule);
    }

    for (const auto& p : s.providers) {
        out += "\n[[provider]]\n";
        line("id", quote(p.id));
        line("behavior", quote(behavior_name(p.behavior)));
        if (auto* c = std::get_if<provider::CamouflagedPositive>(&p.behavior)) {
            line("percent", format_double(c->percent));
        } else if (auto* c = std::get_if<provider::CamouflagedNegative>(&p.behavior)) {
            line("percent", format_double(c->percent));
        } else if (auto k = sybil_period(p.behavior)) {
            line("period", std::to_string(*k));
        }
    }

    for (const auto& g : s.users) {
        out += "\n[[user]]\n";
        line("count", std::to_string(g.count));
        line("behavior", quote(behavior_name(g.behavior)));
        line("provider", quote(g.provider));
        if (g.preferences) {
            std::string v = "[";
            for (std::size_t i = 0; i < g.preferences->size(); ++i) {
                if (i) v += ", ";
                v += format_double((*g.preferences)[i]);
            }
            line("preferences", v + "]");
        } else {
            line("preferences", quote("uniform"));
        }
    }

    for (const auto& rp : s.relying_parties) {
        out += "\n[[relying_party]]\n";
        line("id", quote(rp.id));
        line("behavior", quote(behavior_name(rp.behavior)));
        if (auto k = sybil_period(rp.behavior)) line("period", std::to_string(*k));
        if (rp.noise) line("noise", format_double(*rp.noise));
    }
    for (const auto& rp : s.relying_parties) {
        for (const auto& svc : rp.services) {
            out += "\n[[service]]\n";
            line("relying_party", quote(rp.id));
            line("id", quote(svc.id));
            std::string v = "[";
            for (std::size_t i = 0; i < svc.schedule.size(); ++i) {
                if (i) v += ", ";
                v += "[" + std::to_string(svc.schedule[i].start) + ", " +
                     format_double(svc.schedule[i].quality) + "]";
            }
            line("schedule", v + "]");
        }
    }
    return out;
}

/// 64-bit FNV-1a of the canonical scenario text and the seed, as 16 hex digits.
inline std::string scenario_fingerprint(const Scenario& s, std::uint64_t seed) {
    std::string data = emit_scenario(s) + "\nrun_seed = " + std::to_string(seed) + "\n";
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

} // namespace romeo
