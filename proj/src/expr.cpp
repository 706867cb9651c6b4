#include "fracbvp/expr.hpp"

#include "fracbvp/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <utility>

namespace fracbvp::expr {
namespace {

using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Op op, std::vector<NodePtr> args = {}) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->args = std::move(args);
    return n;
}

NodePtr make_number(double v) {
    auto n = std::make_shared<Node>();
    n->op = Op::Number;
    n->value = v;
    return n;
}

NodePtr make_call(Func f, std::vector<NodePtr> args) {
    auto n = std::make_shared<Node>();
    n->op = Op::Call;
    n->func = f;
    n->args = std::move(args);
    return n;
}

struct FuncInfo {
    const char* name;
    Func func;
    std::size_t arity;
};

constexpr FuncInfo kFunctions[] = {
    {"exp", Func::Exp, 1},  {"ln", Func::Ln, 1},   {"sqrt", Func::Sqrt, 1},
    {"abs", Func::Abs, 1},  {"min", Func::Min, 2}, {"max", Func::Max, 2},
};

const FuncInfo& info_of(Func f) {
    for (const auto& fi : kFunctions) {
        if (fi.func == f) {
            return fi;
        }
    }
    return kFunctions[0];
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse_all() {
        skip_ws();
        if (pos_ == text_.size()) {
            throw SyntaxError(pos_, "empty expression");
        }
        NodePtr e = parse_sum();
        skip_ws();
        if (pos_ != text_.size()) {
            throw SyntaxError(pos_, std::string("unexpected '") + text_[pos_] + "'");
        }
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            throw SyntaxError(pos_, std::string("expected '") + c + "'" + found());
        }
    }

    std::string found() const {
        if (pos_ >= text_.size()) {
            return " but reached end of input";
        }
        return std::string(" but found '") + text_[pos_] + "'";
    }

    NodePtr parse_sum() {
        NodePtr lhs = parse_product();
        for (;;) {
            if (accept('+')) {
                lhs = make(Op::Add, {lhs, parse_product()});
            } else if (accept('-')) {
                lhs = make(Op::Sub, {lhs, parse_product()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_product() {
        NodePtr lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                lhs = make(Op::Mul, {lhs, parse_unary()});
            } else if (accept('/')) {
                lhs = make(Op::Div, {lhs, parse_unary()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_unary() {
        if (accept('-')) {
            return make(Op::Neg, {parse_unary()});
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (accept('^')) {
            return make(Op::Pow, {base, parse_unary()});
        }
        return base;
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) {
            throw SyntaxError(pos_, "unexpected end of input");
        }
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return parse_number();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            return parse_identifier();
        }
        if (accept('(')) {
            NodePtr inner = parse_sum();
            expect(')');
            return inner;
        }
        throw SyntaxError(pos_, std::string("unexpected '") + c + "'");
    }

    NodePtr parse_number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t mantissa = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            mantissa += digits();
        }
        if (mantissa == 0) {
            throw SyntaxError(start, "malformed number");
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            const std::size_t save = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
                ++pos_;
            }
            if (digits() == 0) {
                throw SyntaxError(save, "malformed exponent");
            }
        }
        if (pos_ < text_.size() &&
            (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            throw SyntaxError(pos_, "implicit multiplication is not allowed");
        }
        const std::string lexeme(text_.substr(start, pos_ - start));
        const double v = std::strtod(lexeme.c_str(), nullptr);
        if (!std::isfinite(v)) {
            throw SyntaxError(start, "number out of range");
        }
        return make_number(v);
    }

    NodePtr parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view name = text_.substr(start, pos_ - start);
        if (name == "t") {
            return make(Op::VarT);
        }
        if (name == "y") {
            return make(Op::VarY);
        }
        for (const auto& fi : kFunctions) {
            if (name == fi.name) {
                return parse_call(fi, start);
            }
        }
        throw UnknownIdentifier(start, std::string(name));
    }

    NodePtr parse_call(const FuncInfo& fi, std::size_t start) {
        if (!accept('(')) {
            throw SyntaxError(pos_, std::string("expected '(' after ") + fi.name);
        }
        std::vector<NodePtr> args;
        args.push_back(parse_sum());
        while (accept(',')) {
            args.push_back(parse_sum());
        }
        expect(')');
        if (args.size() != fi.arity) {
            throw SyntaxError(start, std::string(fi.name) + " takes " + std::to_string(fi.arity) +
                                         " argument(s), got " + std::to_string(args.size()));
        }
        return make_call(fi.func, std::move(args));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

double checked(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw EvalError(std::string(what) + " produced a non-finite value");
    }
    return v;
}

double evaluate(const Node& n, double t, double y) {
    switch (n.op) {
        case Op::Number:
            return n.value;
        case Op::VarT:
            return t;
        case Op::VarY:
            return y;
        case Op::Neg:
            return -evaluate(*n.args[0], t, y);
        case Op::Add:
            return checked(evaluate(*n.args[0], t, y) + evaluate(*n.args[1], t, y), "addition");
        case Op::Sub:
            return checked(evaluate(*n.args[0], t, y) - evaluate(*n.args[1], t, y), "subtraction");
        case Op::Mul:
            return checked(evaluate(*n.args[0], t, y) * evaluate(*n.args[1], t, y), "multiplication");
        case Op::Div: {
            const double num = evaluate(*n.args[0], t, y);
            const double den = evaluate(*n.args[1], t, y);
            if (den == 0.0) {
                throw EvalError("division by zero");
            }
            return checked(num / den, "division");
        }
        case Op::Pow: {
            const double base = evaluate(*n.args[0], t, y);
            const double ex = evaluate(*n.args[1], t, y);
            if (base == 0.0 && ex < 0.0) {
                throw EvalError("zero raised to a negative power");
            }
            if (base < 0.0 && ex != std::round(ex)) {
                throw EvalError("negative base raised to a non-integer power");
            }
            return checked(std::pow(base, ex), "power");
        }
        case Op::Call: {
            const double a = evaluate(*n.args[0], t, y);
            switch (n.func) {
                case Func::Exp:
                    return checked(std::exp(a), "exp");
                case Func::Ln:
                    if (a <= 0.0) {
                        throw EvalError("ln of a non-positive argument");
                    }
                    return std::log(a);
                case Func::Sqrt:
                    if (a < 0.0) {
                        throw EvalError("sqrt of a negative argument");
                    }
                    return std::sqrt(a);
                case Func::Abs:
                    return std::abs(a);
                case Func::Min:
                    return std::min(a, evaluate(*n.args[1], t, y));
                case Func::Max:
                    return std::max(a, evaluate(*n.args[1], t, y));
            }
            break;
        }
    }
    throw EvalError("corrupt expression tree");
}

bool uses(const Node& n, Op var) {
    if (n.op == var) {
        return true;
    }
    for (const auto& a : n.args) {
        if (uses(*a, var)) {
            return true;
        }
    }
    return false;
}

bool same(const Node& a, const Node& b) {
    if (a.op != b.op || a.args.size() != b.args.size()) {
        return false;
    }
    if (a.op == Op::Number && a.value != b.value) {
        return false;
    }
    if (a.op == Op::Call && a.func != b.func) {
        return false;
    }
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (!same(*a.args[i], *b.args[i])) {
            return false;
        }
    }
    return true;
}

void print_to(const Node& n, std::string& out) {
    auto binary = [&](const char* op) {
        out += '(';
        print_to(*n.args[0], out);
        out += op;
        print_to(*n.args[1], out);
        out += ')';
    };
    switch (n.op) {
        case Op::Number: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", n.value);
            out += buf;
            return;
        }
        case Op::VarT:
            out += 't';
            return;
        case Op::VarY:
            out += 'y';
            return;
        case Op::Neg:
            out += "(-";
            print_to(*n.args[0], out);
            out += ')';
            return;
        case Op::Add:
            return binary(" + ");
        case Op::Sub:
            return binary(" - ");
        case Op::Mul:
            return binary(" * ");
        case Op::Div:
            return binary(" / ");
        case Op::Pow:
            return binary("^");
        case Op::Call:
            out += info_of(n.func).name;
            out += '(';
            for (std::size_t i = 0; i < n.args.size(); ++i) {
                if (i > 0) {
                    out += ", ";
                }
                print_to(*n.args[i], out);
            }
            out += ')';
            return;
    }
}

}  // namespace

double Expr::operator()(double t, double y) const {
    return evaluate(*root_, t, y);
}

bool Expr::uses_t() const noexcept {
    return uses(*root_, Op::VarT);
}

bool Expr::uses_y() const noexcept {
    return uses(*root_, Op::VarY);
}

bool operator==(const Expr& a, const Expr& b) {
    return same(*a.root_, *b.root_);
}

Expr parse(std::string_view text) {
    return Expr(Parser(text).parse_all());
}

double eval(const Expr& e, double t, double y) {
    return e(t, y);
}

std::string print(const Expr& e) {
    std::string out;
    print_to(e.root(), out);
    return out;
}

}  // namespace fracbvp::expr
