#include "bdicover/parser.hpp"

#include <cctype>
#include <sstream>

namespace bdicover {

ParseError::ParseError(int line_, int col_, const std::string& msg)
    : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                         std::to_string(col_) + ": " + msg),
      line(line_),
      col(col_) {}

namespace {

enum class Tok {
    Ident,    // foo, foo_bar, _
    Number,   // 20, 0.5
    String,   // "text"
    DotName,  // .print, .send, .emit
    Plus, Minus, Bang, Colon, Arrow, Semi, Dot, Comma,
    LParen, RParen, LBracket, RBracket, Amp,
    End
};

struct Token {
    Tok type = Tok::End;
    std::string text;
    int line = 1;
    int col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_ws_and_comments();
            Token t = next_token();
            out.push_back(t);
            if (t.type == Tok::End) break;
        }
        return out;
    }

private:
    [[noreturn]] void fail(const std::string& msg) { throw ParseError(line_, col_, msg); }

    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    char advance() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_ws_and_comments() {
        while (pos_ < src_.size()) {
            char c = peek();
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (pos_ < src_.size() && peek() != '\n') advance();
            } else {
                break;
            }
        }
    }

    Token make(Tok type, std::string text, int line, int col) {
        Token t;
        t.type = type;
        t.text = std::move(text);
        t.line = line;
        t.col = col;
        return t;
    }

    Token next_token() {
        if (pos_ >= src_.size()) return make(Tok::End, "", line_, col_);
        const int line = line_;
        const int col = col_;
        char c = peek();

        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string s;
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') s += advance();
            return make(Tok::Ident, s, line, col);
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string s;
            while (std::isdigit(static_cast<unsigned char>(peek()))) s += advance();
            if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
                s += advance();
                while (std::isdigit(static_cast<unsigned char>(peek()))) s += advance();
            }
            return make(Tok::Number, s, line, col);
        }
        if (c == '"') {
            advance();
            std::string s;
            while (true) {
                if (pos_ >= src_.size()) fail("unterminated string literal");
                char d = advance();
                if (d == '"') break;
                if (d == '\\' && peek() == '"') d = advance();
                s += d;
            }
            return make(Tok::String, s, line, col);
        }
        if (c == '.') {
            // A dot glued to a letter starts an internal action name; a free
            // dot terminates the statement.
            if (std::isalpha(static_cast<unsigned char>(peek(1)))) {
                advance();
                std::string s = ".";
                while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') s += advance();
                return make(Tok::DotName, s, line, col);
            }
            advance();
            return make(Tok::Dot, ".", line, col);
        }
        if (c == '<' && peek(1) == '-') {
            advance();
            advance();
            return make(Tok::Arrow, "<-", line, col);
        }

        advance();
        switch (c) {
            case '+': return make(Tok::Plus, "+", line, col);
            case '-': return make(Tok::Minus, "-", line, col);
            case '!': return make(Tok::Bang, "!", line, col);
            case ':': return make(Tok::Colon, ":", line, col);
            case ';': return make(Tok::Semi, ";", line, col);
            case ',': return make(Tok::Comma, ",", line, col);
            case '(': return make(Tok::LParen, "(", line, col);
            case ')': return make(Tok::RParen, ")", line, col);
            case '[': return make(Tok::LBracket, "[", line, col);
            case ']': return make(Tok::RBracket, "]", line, col);
            case '&': return make(Tok::Amp, "&", line, col);
            default: fail(std::string("unexpected character '") + c + "'");
        }
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    Parser(std::vector<Token> toks, std::string agent_name)
        : toks_(std::move(toks)), agent_name_(std::move(agent_name)) {}

    Agent run() {
        Agent agent;
        agent.name = agent_name_;
        while (peek().type != Tok::End) {
            parse_statement(agent);
        }
        int ordinal = 0;
        for (auto& p : agent.plans) {
            p.ordinal = ++ordinal;
            p.id = agent_name_ + "/" + std::to_string(ordinal);
        }
        return agent;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        if (i >= toks_.size()) i = toks_.size() - 1;  // End token
        return toks_[i];
    }

    Token eat(Tok type, const std::string& what) {
        const Token& t = peek();
        if (t.type != type) {
            throw ParseError(t.line, t.col, "expected " + what + ", found '" + t.text + "'");
        }
        ++pos_;
        return t;
    }

    bool accept(Tok type) {
        if (peek().type == type) {
            ++pos_;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail_here(const std::string& msg) {
        throw ParseError(peek().line, peek().col, msg);
    }

    std::string parse_term() {
        const Token& t = peek();
        if (t.type == Tok::Ident || t.type == Tok::Number) {
            ++pos_;
            return t.text;
        }
        fail_here("expected an argument term, found '" + t.text + "'");
    }

    Belief parse_belief_atom() {
        Token name = eat(Tok::Ident, "a belief name");
        Belief b;
        b.functor = name.text;
        if (accept(Tok::LParen)) {
            b.args.push_back(parse_term());
            while (accept(Tok::Comma)) b.args.push_back(parse_term());
            eat(Tok::RParen, "')'");
        }
        if (accept(Tok::LBracket)) {
            Token key = eat(Tok::Ident, "'source'");
            if (key.text != "source") {
                throw ParseError(key.line, key.col, "only source(...) annotations are supported");
            }
            eat(Tok::LParen, "'('");
            Token who = eat(Tok::Ident, "an agent name");
            b.source = who.text;
            eat(Tok::RParen, "')'");
            eat(Tok::RBracket, "']'");
        }
        return b;
    }

    Goal parse_goal_atom() {
        Token name = eat(Tok::Ident, "a goal name");
        Goal g;
        g.name = name.text;
        if (accept(Tok::LParen)) {
            g.args.push_back(parse_term());
            while (accept(Tok::Comma)) g.args.push_back(parse_term());
            eat(Tok::RParen, "')'");
        }
        return g;
    }

    std::vector<ContextLiteral> parse_context() {
        std::vector<ContextLiteral> ctx;
        if (peek().type == Tok::Ident && peek().text == "true") {
            ++pos_;
            return ctx;
        }
        while (true) {
            ContextLiteral lit;
            if (peek().type == Tok::Ident && peek().text == "not") {
                ++pos_;
                lit.negated = true;
            }
            lit.pattern = parse_belief_atom();
            ctx.push_back(std::move(lit));
            if (!accept(Tok::Amp)) break;
        }
        return ctx;
    }

    Action parse_action() {
        const Token& t = peek();
        Action act;
        if (t.type == Tok::Plus) {
            ++pos_;
            act.kind = ActionKind::AddBelief;
            act.belief = parse_belief_atom();
            return act;
        }
        if (t.type == Tok::Minus) {
            ++pos_;
            act.kind = ActionKind::DeleteBelief;
            act.belief = parse_belief_atom();
            return act;
        }
        if (t.type == Tok::Bang) {
            ++pos_;
            act.kind = ActionKind::CreateGoal;
            act.goal = parse_goal_atom();
            return act;
        }
        if (t.type == Tok::Ident && t.text == "add_time") {
            ++pos_;
            eat(Tok::LParen, "'('");
            Token n = eat(Tok::Number, "a number of seconds");
            act.kind = ActionKind::AdvanceTime;
            act.seconds = std::stod(n.text);
            eat(Tok::RParen, "')'");
            return act;
        }
        if (t.type == Tok::DotName) {
            if (t.text == ".print") {
                ++pos_;
                eat(Tok::LParen, "'('");
                Token s = eat(Tok::String, "a string literal");
                act.kind = ActionKind::Print;
                act.text = s.text;
                eat(Tok::RParen, "')'");
                return act;
            }
            if (t.text == ".send") {
                ++pos_;
                eat(Tok::LParen, "'('");
                Token target = eat(Tok::Ident, "a target agent name");
                eat(Tok::Comma, "','");
                Token perf = eat(Tok::Ident, "the performative 'tell'");
                if (perf.text != "tell") {
                    throw ParseError(perf.line, perf.col,
                                     "only the tell performative is supported, found '" + perf.text + "'");
                }
                eat(Tok::Comma, "','");
                act.kind = ActionKind::SendBelief;
                act.target = target.text;
                act.belief = parse_belief_atom();
                eat(Tok::RParen, "')'");
                return act;
            }
            if (t.text == ".emit") {
                ++pos_;
                eat(Tok::LParen, "'('");
                Token label = eat(Tok::Ident, "an emit label");
                act.kind = ActionKind::Emit;
                act.label = label.text;
                while (accept(Tok::Comma)) act.args.push_back(parse_term());
                eat(Tok::RParen, "')'");
                return act;
            }
            throw ParseError(t.line, t.col, "unknown action '" + t.text + "'");
        }
        if (t.type == Tok::Ident) {
            throw ParseError(t.line, t.col, "unknown action '" + t.text + "'");
        }
        fail_here("expected an action, found '" + t.text + "'");
    }

    void parse_plan(Agent& agent, Polarity polarity) {
        Plan plan;
        plan.trigger.polarity = polarity;
        if (accept(Tok::Bang)) {
            if (polarity == Polarity::Delete) {
                fail_here("goal triggers only support the add polarity");
            }
            plan.trigger.kind = EventKind::GoalEvent;
            plan.trigger.goal = parse_goal_atom();
        } else {
            plan.trigger.kind = EventKind::BeliefEvent;
            plan.trigger.belief = parse_belief_atom();
        }
        eat(Tok::Colon, "':'");
        plan.context = parse_context();
        eat(Tok::Arrow, "'<-'");
        plan.body.push_back(parse_action());
        while (accept(Tok::Semi)) {
            if (peek().type == Tok::Dot) break;  // tolerate "a; b;." trailing semicolon
            plan.body.push_back(parse_action());
        }
        eat(Tok::Dot, "'.' to end the plan");
        agent.plans.push_back(std::move(plan));
    }

    void parse_statement(Agent& agent) {
        const Token& t = peek();
        if (t.type == Tok::Plus) {
            ++pos_;
            parse_plan(agent, Polarity::Add);
            return;
        }
        if (t.type == Tok::Minus) {
            ++pos_;
            parse_plan(agent, Polarity::Delete);
            return;
        }
        if (t.type == Tok::Bang) {
            ++pos_;
            Goal g = parse_goal_atom();
            eat(Tok::Dot, "'.' to end the initial goal");
            agent.initial_goals.push_back(std::move(g));
            return;
        }
        if (t.type == Tok::Ident) {
            Belief b = parse_belief_atom();
            eat(Tok::Dot, "'.' to end the initial belief");
            agent.initial_beliefs.push_back(std::move(b));
            return;
        }
        fail_here("expected a belief, '!goal.', or a plan, found '" + t.text + "'");
    }

    std::vector<Token> toks_;
    std::string agent_name_;
    std::size_t pos_ = 0;
};

} // namespace

Agent parse_plans(const std::string& text, const std::string& agent_name) {
    Lexer lexer(text);
    Parser parser(lexer.run(), agent_name);
    return parser.run();
}

} // namespace bdicover
