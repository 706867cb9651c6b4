#include "doctest.h"

#include "fracbvp/errors.hpp"
#include "fracbvp/expr.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <string>

using namespace fracbvp;
using expr::eval;
using expr::parse;

TEST_CASE("basic evaluation") {
    CHECK(eval(parse("2*(3+4)"), 0, 0) == 14.0);
    CHECK(eval(parse("y^2 + sqrt(y)"), 0, 4) == 18.0);
    CHECK(eval(parse("(1/100)*t*(y^0.5 + y^2)"), 1.25, 1) == doctest::Approx(0.025).epsilon(1e-15));
    CHECK(eval(parse("exp(t)"), 0, 0) == 1.0);
    CHECK(eval(parse("  min( t , y ) + max(t,y) "), 2, 5) == 7.0);
    CHECK(eval(parse("abs(-3) + ln(1)"), 0, 0) == 3.0);
    CHECK(eval(parse("1.5e2 + .5"), 0, 0) == 150.5);
}

TEST_CASE("precedence and associativity") {
    CHECK(eval(parse("-t^2"), 3, 0) == -9.0);
    CHECK(eval(parse("2^3^2"), 0, 0) == 512.0);
    CHECK(eval(parse("2^-1"), 0, 0) == 0.5);
    CHECK(eval(parse("8-3-2"), 0, 0) == 3.0);
    CHECK(eval(parse("8/4/2"), 0, 0) == 1.0);
    CHECK(eval(parse("1+2*3"), 0, 0) == 7.0);
    CHECK(eval(parse("--2"), 0, 0) == 2.0);
    CHECK(eval(parse("-2*3"), 0, 0) == -6.0);
}

TEST_CASE("domain violations raise EvalError") {
    CHECK_THROWS_AS(eval(parse("sqrt(y)"), 0, -1), EvalError);
    CHECK_THROWS_AS(eval(parse("ln(y)"), 0, 0), EvalError);
    CHECK_THROWS_AS(eval(parse("y^-1"), 0, 0), EvalError);
    CHECK_THROWS_AS(eval(parse("y^0.5"), 0, -4), EvalError);
    CHECK_THROWS_AS(eval(parse("1/y"), 0, 0), EvalError);
    CHECK_THROWS_AS(eval(parse("exp(y)"), 0, 1e4), EvalError);
    // Limit value at the floor of the cone.
    CHECK(eval(parse("y^0.5"), 0, 0) == 0.0);
    CHECK(eval(parse("(-2)^3"), 0, 0) == -8.0);
}

TEST_CASE("syntax errors carry the column") {
    auto column = [](const char* text) -> long {
        try {
            parse(text);
        } catch (const SyntaxError& e) {
            return static_cast<long>(e.position());
        }
        return -1;
    };
    CHECK(column("2t") == 1);
    CHECK(column("1 + ") == 4);
    CHECK(column("(1 + 2") == 6);
    CHECK(column("1 + * 2") == 4);
    CHECK(column("") == 0);
    CHECK(column("sqrt(1, 2)") == 0);
    CHECK(column("3 4") == 2);
    CHECK(column("exp 2") == 4);
    CHECK_THROWS_AS(parse("x + 1"), UnknownIdentifier);
    CHECK_THROWS_AS(parse("sin(t)"), UnknownIdentifier);
    try {
        parse("t + foo");
    } catch (const UnknownIdentifier& e) {
        CHECK(e.position() == 4);
        CHECK(e.name() == "foo");
    }
}

TEST_CASE("variable usage") {
    CHECK(parse("exp(t)").uses_t());
    CHECK_FALSE(parse("exp(t)").uses_y());
    CHECK(parse("t*y").uses_y());
}

namespace {

// Random well-formed expression paired with its value at (t, y), computed
// while the text is generated.
struct Sample {
    std::string text;
    double value;
};

class Generator {
public:
    Generator(std::mt19937& rng, double t, double y) : rng_(rng), t_(t), y_(y) {}

    Sample operator()(int depth) {
        std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 11);
        switch (pick(rng_)) {
            case 0: {
                std::uniform_real_distribution<double> u(0.0, 5.0);
                char buf[40];
                std::snprintf(buf, sizeof buf, "%.17g", u(rng_));
                return {buf, std::strtod(buf, nullptr)};
            }
            case 1:
                return {"t", t_};
            case 2:
                return {"y", y_};
            case 3: {
                auto a = (*this)(depth - 1), b = (*this)(depth - 1);
                return {"(" + a.text + " + " + b.text + ")", a.value + b.value};
            }
            case 4: {
                auto a = (*this)(depth - 1), b = (*this)(depth - 1);
                return {"(" + a.text + " - " + b.text + ")", a.value - b.value};
            }
            case 5: {
                auto a = (*this)(depth - 1), b = (*this)(depth - 1);
                return {"(" + a.text + ")*(" + b.text + ")", a.value * b.value};
            }
            case 6: {
                auto a = (*this)(depth - 1), b = (*this)(depth - 1);
                return {a.text + "/(1 + (" + b.text + ")^2)", a.value / (1.0 + b.value * b.value)};
            }
            case 7: {
                auto a = (*this)(depth - 1);
                return {"-" + wrap(a.text), -a.value};
            }
            case 8: {
                auto a = (*this)(depth - 1);
                return {"sqrt(abs(" + a.text + "))", std::sqrt(std::abs(a.value))};
            }
            case 9: {
                auto a = (*this)(depth - 1);
                return {"exp(min(max(" + a.text + ", -3), 3))",
                        std::exp(std::min(std::max(a.value, -3.0), 3.0))};
            }
            case 10: {
                auto a = (*this)(depth - 1);
                return {"ln(1 + abs(" + a.text + "))", std::log(1.0 + std::abs(a.value))};
            }
            default: {
                auto a = (*this)(depth - 1);
                return {"abs(" + a.text + ")^1.5", std::pow(std::abs(a.value), 1.5)};
            }
        }
    }

private:
    static std::string wrap(const std::string& s) { return "(" + s + ")"; }

    std::mt19937& rng_;
    double t_;
    double y_;
};

}  // namespace

TEST_CASE("random expressions agree with the generator's reference values") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(-2.0, 3.0);
    for (int i = 0; i < 1000; ++i) {
        const double t = u(rng);
        const double y = u(rng);
        const Sample s = Generator(rng, t, y)(4);
        CAPTURE(s.text);
        const double got = eval(parse(s.text), t, y);
        REQUIRE(std::abs(got - s.value) <= 1e-12 * std::max(1.0, std::abs(s.value)));
    }
}

TEST_CASE("print then parse reproduces the tree") {
    std::mt19937 rng(5);
    for (int i = 0; i < 300; ++i) {
        const Sample s = Generator(rng, 0.5, 0.25)(4);
        const expr::Expr e = parse(s.text);
        const expr::Expr again = parse(expr::print(e));
        REQUIRE(again == e);
        REQUIRE(expr::print(again) == expr::print(e));
    }
    CHECK(expr::print(parse("-t^2")) == "(-(t^2))");
    CHECK_FALSE(parse("t+y") == parse("y+t"));
}
