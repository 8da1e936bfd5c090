#include "mvset/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "mvset/error.hpp"

namespace mvset {

struct Expression::Node {
    enum class Kind { number, var_x, var_y, neg, add, sub, mul, div, pow, call };
    Kind kind = Kind::number;
    double value = 0.0;
    std::string function;
    std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, std::vector<NodePtr> args = {}, double v = 0.0, std::string fn = {}) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = k;
    n->value = v;
    n->function = std::move(fn);
    n->args = std::move(args);
    return n;
}

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse() {
        NodePtr n = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw ConfigError("bad expression '" + s_ + "': " + why + " at offset " + std::to_string(pos_));
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) lhs = make(Kind::add, {lhs, term()});
            else if (accept('-')) lhs = make(Kind::sub, {lhs, term()});
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) lhs = make(Kind::mul, {lhs, unary()});
            else if (accept('/')) lhs = make(Kind::div, {lhs, unary()});
            else return lhs;
        }
    }

    // Unary minus binds looser than ^ so that -x^2 == -(x^2).
    NodePtr unary() {
        if (accept('-')) return make(Kind::neg, {unary()});
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make(Kind::pow, {base, unary()});
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        const char c = s_[pos_];
        if (accept('(')) {
            NodePtr inner = expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            pos_ += static_cast<std::size_t>(end - begin);
            return make(Kind::number, {}, v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            const std::string name = s_.substr(start, pos_ - start);
            if (name == "x") return make(Kind::var_x);
            if (name == "y") return make(Kind::var_y);
            if (name == "pi") return make(Kind::number, {}, std::numbers::pi);
            if (name == "e") return make(Kind::number, {}, std::numbers::e);
            static const std::vector<std::pair<std::string, int>> functions = {
                {"sin", 1}, {"cos", 1}, {"tan", 1}, {"exp", 1}, {"log", 1}, {"sqrt", 1},
                {"abs", 1}, {"pos", 1}, {"min", 2}, {"max", 2}};
            for (const auto& [fn, arity] : functions) {
                if (fn != name) continue;
                if (!accept('(')) fail("expected '(' after " + name);
                std::vector<NodePtr> args{expr()};
                while (accept(',')) args.push_back(expr());
                if (!accept(')')) fail("expected ')'");
                if (static_cast<int>(args.size()) != arity) fail("wrong argument count for " + name);
                return make(Kind::call, std::move(args), 0.0, name);
            }
            fail("unknown identifier '" + name + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

double eval(const Expression::Node& n, Point p) {
    switch (n.kind) {
        case Kind::number: return n.value;
        case Kind::var_x: return p.x;
        case Kind::var_y: return p.y;
        case Kind::neg: return -eval(*n.args[0], p);
        case Kind::add: return eval(*n.args[0], p) + eval(*n.args[1], p);
        case Kind::sub: return eval(*n.args[0], p) - eval(*n.args[1], p);
        case Kind::mul: return eval(*n.args[0], p) * eval(*n.args[1], p);
        case Kind::div: return eval(*n.args[0], p) / eval(*n.args[1], p);
        case Kind::pow: {
            const double b = eval(*n.args[0], p);
            const double e = eval(*n.args[1], p);
            if (e == 2.0) return b * b;
            return std::pow(b, e);
        }
        case Kind::call: {
            const double a = eval(*n.args[0], p);
            const std::string& f = n.function;
            if (f == "sin") return std::sin(a);
            if (f == "cos") return std::cos(a);
            if (f == "tan") return std::tan(a);
            if (f == "exp") return std::exp(a);
            if (f == "log") return std::log(a);
            if (f == "sqrt") return std::sqrt(a);
            if (f == "abs") return std::abs(a);
            if (f == "pos") return a > 0.0 ? a : 0.0;
            const double b = eval(*n.args[1], p);
            if (f == "min") return std::min(a, b);
            return std::max(a, b);
        }
    }
    return 0.0;
}

}  // namespace

Expression::Expression(const std::string& source) : source_(source), root_(Parser(source).parse()) {}

double Expression::operator()(Point p) const { return eval(*root_, p); }

}  // namespace mvset
