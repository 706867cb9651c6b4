#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace fracbvp::expr {

enum class Op { Number, VarT, VarY, Neg, Add, Sub, Mul, Div, Pow, Call };

enum class Func { Exp, Ln, Sqrt, Abs, Min, Max };

struct Node {
    Op op;
    double value = 0.0;  // Number only
    Func func = Func::Exp;  // Call only
    std::vector<std::shared_ptr<const Node>> args;
};

/// Immutable parsed expression in the variables t and y.
///
/// Grammar (whitespace ignored):
///   sum     := product (('+' | '-') product)*
///   product := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?          right-associative
///   primary := number | 't' | 'y' | name '(' args ')' | '(' sum ')'
class Expr {
public:
    explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

    const Node& root() const noexcept { return *root_; }

    /// Evaluate at (t, y). Domain violations throw EvalError.
    double operator()(double t, double y) const;

    bool uses_t() const noexcept;
    bool uses_y() const noexcept;

    friend bool operator==(const Expr& a, const Expr& b);

private:
    std::shared_ptr<const Node> root_;
};

/// Throws SyntaxError (0-based column) or UnknownIdentifier.
Expr parse(std::string_view text);

double eval(const Expr& e, double t, double y);

/// Fully parenthesized text that parses back to an identical tree.
std::string print(const Expr& e);

}  // namespace fracbvp::expr
