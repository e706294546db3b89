#include "zwise/rules.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "zwise/errors.hpp"

// Rule file grammar, one rule per line ('#' comments, blank lines skipped):
//
//   rule       := id ':' body '=>' consequent
//   body       := 'default' | expr
//   expr       := term ('|' term)*           '|' is max
//   term       := factor ('&' factor)*       '&' is min, binds tighter
//   factor     := '(' expr ')' | aggregate | atom
//   atom       := component ':' level        e.g. IH:high
//   aggregate  := 'atleast' '(' k ',' atom {',' atom} [',' 'cutoff' '=' num] ')'
//               | 'exactly_one_low' '(' component {',' component} ')'
//               | 'all' '(' level ')'
//               | 'none' '(' level [',' 'cutoff' '=' num] ')'
//   consequent := 'Low' | 'Moderate' | 'High'

namespace zwise {

Antecedent Antecedent::atom(Component c, Level l) {
    Antecedent a;
    a.kind = Kind::Atom;
    a.leaf = {c, l};
    return a;
}

Antecedent Antecedent::all_of(std::vector<Antecedent> children) {
    if (children.empty()) throw ConfigError("AND needs at least one operand");
    Antecedent a;
    a.kind = Kind::And;
    a.children = std::move(children);
    return a;
}

Antecedent Antecedent::any_of(std::vector<Antecedent> children) {
    if (children.empty()) throw ConfigError("OR needs at least one operand");
    Antecedent a;
    a.kind = Kind::Or;
    a.children = std::move(children);
    return a;
}

Antecedent Antecedent::at_least_k_of(std::size_t k, std::vector<Atom> atoms, double cutoff) {
    if (k == 0 || k > atoms.size()) throw ConfigError("atleast: k must be in 1..|atoms|");
    if (!(cutoff >= 0.0 && cutoff <= 1.0)) throw ConfigError("atleast: cutoff outside [0,1]");
    Antecedent a;
    a.kind = Kind::AtLeastKOf;
    a.k = k;
    a.atoms = std::move(atoms);
    a.cutoff = cutoff;
    return a;
}

Antecedent Antecedent::exactly_one_low_of(std::vector<Component> members) {
    if (members.size() < 2) throw ConfigError("exactly_one_low needs at least two members");
    Antecedent a;
    a.kind = Kind::ExactlyOneLowOf;
    a.members = std::move(members);
    return a;
}

Antecedent Antecedent::all_equal(Level level) {
    Antecedent a;
    a.kind = Kind::AllEqual;
    a.level = level;
    return a;
}

Antecedent Antecedent::none_at_level(Level level, double cutoff) {
    if (!(cutoff >= 0.0 && cutoff <= 1.0)) throw ConfigError("none: cutoff outside [0,1]");
    Antecedent a;
    a.kind = Kind::NoneAtLevel;
    a.level = level;
    a.cutoff = cutoff;
    return a;
}

RuleBase::RuleBase(std::vector<Rule> rules) : rules_(std::move(rules)) {
    if (rules_.empty()) throw ConfigError("rule base is empty");
    std::set<std::string> ids;
    std::size_t defaults = 0;
    for (const auto& r : rules_) {
        if (r.id.empty()) throw ConfigError("rule with empty id");
        if (!ids.insert(r.id).second) throw ConfigError("duplicate rule id: " + r.id);
        if (r.is_default) ++defaults;
    }
    if (defaults != 1) {
        throw ConfigError("rule base needs exactly one default rule, found " +
                          std::to_string(defaults));
    }
}

namespace {

using K = Antecedent::Kind;

Antecedent a(Component c, Level l) { return Antecedent::atom(c, l); }

std::vector<Atom> level_atoms(Level l) {
    // Table order: IH, PT, Ref, Pro, REA.
    return {{Component::IH, l}, {Component::PT, l}, {Component::Ref, l},
            {Component::Pro, l}, {Component::REA, l}};
}

} // namespace

RuleBase RuleBase::builtin_default() {
    using C = Component;
    using L = Level;
    std::vector<Rule> r;
    auto add = [&r](std::string id, Antecedent ante, Level cons) {
        r.push_back({std::move(id), false, std::move(ante), cons});
    };

    add("R1", Antecedent::all_of({Antecedent::at_least_k_of(3, level_atoms(L::High)),
                                  Antecedent::any_of({a(C::Pro, L::High), a(C::REA, L::High)})}),
        L::High);
    add("R2", Antecedent::all_of({a(C::IH, L::High), a(C::PT, L::High), a(C::Ref, L::High)}),
        L::High);
    add("R3", Antecedent::all_of({a(C::PT, L::High), a(C::Pro, L::High), a(C::REA, L::High)}),
        L::High);
    add("R4", Antecedent::all_of({a(C::IH, L::High),
                                  Antecedent::any_of({a(C::Pro, L::High), a(C::REA, L::High)})}),
        L::High);
    add("R5",
        Antecedent::all_of({a(C::PT, L::Low), a(C::IH, L::High),
                            Antecedent::any_of(
                                {a(C::Pro, L::High), a(C::REA, L::High), a(C::Ref, L::High)})}),
        L::High);
    add("R6",
        Antecedent::all_of(
            {a(C::REA, L::Low), a(C::IH, L::High), a(C::PT, L::High), a(C::Pro, L::High)}),
        L::High);
    add("R7", Antecedent::all_of({Antecedent::at_least_k_of(3, level_atoms(L::Mod)),
                                  Antecedent::none_at_level(L::Low)}),
        L::Mod);
    add("R8", Antecedent::all_of({a(C::IH, L::Mod), a(C::PT, L::Mod), a(C::Ref, L::Mod)}),
        L::Mod);
    add("R9", Antecedent::all_of({a(C::Pro, L::Mod), a(C::REA, L::Mod), a(C::Ref, L::Mod)}),
        L::Mod);
    add("R10",
        Antecedent::all_of({Antecedent::any_of({a(C::IH, L::High), a(C::PT, L::High)}),
                            Antecedent::exactly_one_low_of({C::Pro, C::REA, C::Ref})}),
        L::Mod);
    add("R11",
        Antecedent::all_of(
            {a(C::PT, L::Mod), a(C::Pro, L::Mod), a(C::REA, L::Low), a(C::Ref, L::High)}),
        L::Mod);
    add("R12", Antecedent::all_of({a(C::IH, L::Mod), a(C::PT, L::High),
                                   Antecedent::any_of({a(C::Pro, L::Mod), a(C::REA, L::Mod)})}),
        L::Mod);
    add("R13", Antecedent::all_of({a(C::IH, L::Low), a(C::PT, L::Low), a(C::Ref, L::Low)}),
        L::Low);
    add("R14", Antecedent::all_of({a(C::Pro, L::Low), a(C::REA, L::Low), a(C::Ref, L::Low)}),
        L::Low);
    add("R15", Antecedent::all_of({a(C::Pro, L::Low), a(C::REA, L::Low)}), L::Low);
    add("R16", Antecedent::all_of({a(C::PT, L::Low), a(C::IH, L::Low)}), L::Low);
    add("R17", Antecedent::all_equal(L::Low), L::Low);
    add("R18", Antecedent::all_equal(L::Mod), L::Mod);
    add("R19", Antecedent::all_equal(L::High), L::High);
    add("R20", Antecedent::all_of({a(C::IH, L::Low), a(C::Pro, L::Low)}), L::Low);
    r.push_back({"R21", true, Antecedent{}, L::Mod});

    return RuleBase(std::move(r));
}

// ---------------------------------------------------------------------------
// parsing

namespace {

struct Token {
    enum class Type { Ident, Number, Colon, Amp, Pipe, LParen, RParen, Comma, Eq, Arrow, End };
    Type type;
    std::string text;
    double number = 0.0;
};

class Lexer {
public:
    Lexer(std::string_view s, const std::string& where) : s_(s), where_(where) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError(where_ + ": " + msg);
    }

private:
    void advance() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ >= s_.size()) {
            tok_ = {Token::Type::End, "", 0.0};
            return;
        }
        char c = s_[pos_];
        if (c == ':') { tok_ = {Token::Type::Colon, ":", 0.0}; ++pos_; return; }
        if (c == '&') { tok_ = {Token::Type::Amp, "&", 0.0}; ++pos_; return; }
        if (c == '|') { tok_ = {Token::Type::Pipe, "|", 0.0}; ++pos_; return; }
        if (c == '(') { tok_ = {Token::Type::LParen, "(", 0.0}; ++pos_; return; }
        if (c == ')') { tok_ = {Token::Type::RParen, ")", 0.0}; ++pos_; return; }
        if (c == ',') { tok_ = {Token::Type::Comma, ",", 0.0}; ++pos_; return; }
        if (c == '=' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '>') {
            tok_ = {Token::Type::Arrow, "=>", 0.0};
            pos_ += 2;
            return;
        }
        if (c == '=') { tok_ = {Token::Type::Eq, "=", 0.0}; ++pos_; return; }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t end = pos_;
            while (end < s_.size() &&
                   (std::isdigit(static_cast<unsigned char>(s_[end])) || s_[end] == '.')) {
                ++end;
            }
            std::string num(s_.substr(pos_, end - pos_));
            tok_ = {Token::Type::Number, num, std::stod(num)};
            pos_ = end;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_;
            while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) ||
                                       s_[end] == '_')) {
                ++end;
            }
            tok_ = {Token::Type::Ident, std::string(s_.substr(pos_, end - pos_)), 0.0};
            pos_ = end;
            return;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    std::string_view s_;
    std::string where_;
    std::size_t pos_ = 0;
    Token tok_;
};

class RuleParser {
public:
    explicit RuleParser(Lexer& lex) : lex_(lex) {}

    Antecedent expr() {
        std::vector<Antecedent> terms{term()};
        while (lex_.peek().type == Token::Type::Pipe) {
            lex_.take();
            terms.push_back(term());
        }
        if (terms.size() == 1) return std::move(terms.front());
        return Antecedent::any_of(std::move(terms));
    }

private:
    Antecedent term() {
        std::vector<Antecedent> factors{factor()};
        while (lex_.peek().type == Token::Type::Amp) {
            lex_.take();
            factors.push_back(factor());
        }
        if (factors.size() == 1) return std::move(factors.front());
        return Antecedent::all_of(std::move(factors));
    }

    Antecedent factor() {
        if (lex_.peek().type == Token::Type::LParen) {
            lex_.take();
            Antecedent e = expr();
            expect(Token::Type::RParen, ")");
            return e;
        }
        Token id = expect(Token::Type::Ident, "component or aggregate name");
        if (id.text == "atleast") return at_least();
        if (id.text == "exactly_one_low") return exactly_one_low();
        if (id.text == "all") return all_equal();
        if (id.text == "none") return none_at_level();
        // plain atom: component ':' level
        expect(Token::Type::Colon, ":");
        Token lvl = expect(Token::Type::Ident, "level");
        return Antecedent::atom(component_from_string(id.text), level_from_string(lvl.text));
    }

    Atom parse_atom() {
        Token comp = expect(Token::Type::Ident, "component");
        expect(Token::Type::Colon, ":");
        Token lvl = expect(Token::Type::Ident, "level");
        return {component_from_string(comp.text), level_from_string(lvl.text)};
    }

    Antecedent at_least() {
        expect(Token::Type::LParen, "(");
        Token k = expect(Token::Type::Number, "count");
        std::vector<Atom> atoms;
        double cutoff = 0.5;
        while (lex_.peek().type == Token::Type::Comma) {
            lex_.take();
            if (lex_.peek().type == Token::Type::Ident && lex_.peek().text == "cutoff") {
                lex_.take();
                expect(Token::Type::Eq, "=");
                cutoff = expect(Token::Type::Number, "cutoff value").number;
                break;
            }
            atoms.push_back(parse_atom());
        }
        expect(Token::Type::RParen, ")");
        return Antecedent::at_least_k_of(static_cast<std::size_t>(k.number), std::move(atoms),
                                         cutoff);
    }

    Antecedent exactly_one_low() {
        expect(Token::Type::LParen, "(");
        std::vector<Component> members;
        members.push_back(component_from_string(expect(Token::Type::Ident, "component").text));
        while (lex_.peek().type == Token::Type::Comma) {
            lex_.take();
            members.push_back(component_from_string(expect(Token::Type::Ident, "component").text));
        }
        expect(Token::Type::RParen, ")");
        return Antecedent::exactly_one_low_of(std::move(members));
    }

    Antecedent all_equal() {
        expect(Token::Type::LParen, "(");
        Level l = level_from_string(expect(Token::Type::Ident, "level").text);
        expect(Token::Type::RParen, ")");
        return Antecedent::all_equal(l);
    }

    Antecedent none_at_level() {
        expect(Token::Type::LParen, "(");
        Level l = level_from_string(expect(Token::Type::Ident, "level").text);
        double cutoff = 0.5;
        if (lex_.peek().type == Token::Type::Comma) {
            lex_.take();
            Token key = expect(Token::Type::Ident, "cutoff");
            if (key.text != "cutoff") lex_.fail("expected 'cutoff', got '" + key.text + "'");
            expect(Token::Type::Eq, "=");
            cutoff = expect(Token::Type::Number, "cutoff value").number;
        }
        expect(Token::Type::RParen, ")");
        return Antecedent::none_at_level(l, cutoff);
    }

    Token expect(Token::Type type, const std::string& what) {
        if (lex_.peek().type != type) {
            lex_.fail("expected " + what + ", got '" + lex_.peek().text + "'");
        }
        return lex_.take();
    }

    Lexer& lex_;
};

Rule parse_rule_line_unchecked(const std::string& line, const std::string& where) {
    Lexer lex(line, where);
    RuleParser parser(lex);

    Token id = lex.take();
    if (id.type != Token::Type::Ident) lex.fail("expected rule id");
    if (lex.take().type != Token::Type::Colon) lex.fail("expected ':' after rule id");

    Rule rule;
    rule.id = id.text;
    if (lex.peek().type == Token::Type::Ident && lex.peek().text == "default") {
        lex.take();
        rule.is_default = true;
    } else {
        rule.antecedent = parser.expr();
    }
    if (lex.take().type != Token::Type::Arrow) lex.fail("expected '=>' before consequent");
    Token cons = lex.take();
    if (cons.type != Token::Type::Ident) lex.fail("expected consequent label");
    rule.consequent = level_from_string(cons.text);
    if (lex.peek().type != Token::Type::End) lex.fail("trailing input after consequent");
    return rule;
}

// Level names and antecedent factory preconditions throw without location
// context; stamp the origin on whatever escapes the line.
Rule parse_rule_line(const std::string& line, const std::string& where) {
    try {
        return parse_rule_line_unchecked(line, where);
    } catch (const ConfigError& e) {
        std::string what = e.what();
        if (what.rfind(where + ":", 0) == 0) throw;
        throw ConfigError(where + ": " + what);
    }
}

} // namespace

RuleBase RuleBase::parse(std::istream& in, const std::string& origin) {
    std::vector<Rule> rules;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        rules.push_back(parse_rule_line(line, origin + ":" + std::to_string(lineno)));
    }
    return RuleBase(std::move(rules));
}

RuleBase RuleBase::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open rule file: " + path);
    return parse(in, path);
}

// ---------------------------------------------------------------------------
// serialization

namespace {

std::string level_text(Level l) {
    switch (l) {
        case Level::Low: return "low";
        case Level::Mod: return "mod";
        default: return "high";
    }
}

std::string atom_text(const Atom& a) {
    return std::string(to_string(a.component)) + ":" + level_text(a.level);
}

std::string cutoff_suffix(double cutoff) {
    if (cutoff == 0.5) return "";
    std::ostringstream os;
    os << ", cutoff=" << cutoff;
    return os.str();
}

// parent_is_and adds parens around OR children so the printed form reparses
// with '&' binding tighter than '|'.
std::string expr_text(const Antecedent& a, bool parent_is_and) {
    std::ostringstream os;
    switch (a.kind) {
        case K::Atom:
            return atom_text(a.leaf);
        case K::And: {
            for (std::size_t i = 0; i < a.children.size(); ++i) {
                if (i) os << " & ";
                os << expr_text(a.children[i], true);
            }
            return os.str();
        }
        case K::Or: {
            for (std::size_t i = 0; i < a.children.size(); ++i) {
                if (i) os << " | ";
                os << expr_text(a.children[i], false);
            }
            return parent_is_and ? "(" + os.str() + ")" : os.str();
        }
        case K::AtLeastKOf: {
            os << "atleast(" << a.k;
            for (const auto& at : a.atoms) os << ", " << atom_text(at);
            os << cutoff_suffix(a.cutoff) << ")";
            return os.str();
        }
        case K::ExactlyOneLowOf: {
            os << "exactly_one_low(";
            for (std::size_t i = 0; i < a.members.size(); ++i) {
                if (i) os << ", ";
                os << to_string(a.members[i]);
            }
            os << ")";
            return os.str();
        }
        case K::AllEqual:
            return "all(" + level_text(a.level) + ")";
        default:
            return "none(" + level_text(a.level) + cutoff_suffix(a.cutoff) + ")";
    }
}

} // namespace

std::string to_text(const Rule& rule) {
    std::string body = rule.is_default ? "default" : expr_text(rule.antecedent, false);
    return rule.id + ": " + body + " => " + std::string(wisdom_label(rule.consequent));
}

void write_rules(const RuleBase& base, std::ostream& out) {
    for (const auto& r : base.rules()) out << to_text(r) << "\n";
}

} // namespace zwise
