#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "expr_reference.hpp"
#include "fihde/expr.hpp"

using namespace fihde;

TEST_CASE("basic parses and evaluation") {
    Expr e = Expr::parse("v - 0.5*w");
    CHECK(e.eval(0, 1, 4) == doctest::Approx(-1.0));
    CHECK(e.str() == "v - 0.5 * w");

    CHECK(Expr::parse("v").eval(0, 3, 7) == 3.0);
    CHECK(Expr::parse("s + v*w").eval(1, 2, 3) == 7.0);
    CHECK(Expr::parse("exp(-s)*v - w/2").eval(0, 1, 4) == doctest::Approx(-1.0));
}

TEST_CASE("power is right-associative and binds above unary minus") {
    CHECK(Expr::parse("2^3^2").eval(0, 0, 0) == 512.0);
    CHECK(Expr::parse("-2^2").eval(0, 0, 0) == -4.0);
    CHECK(Expr::parse("2^-3").eval(0, 0, 0) == 0.125);
    CHECK(Expr::parse("(-2)^2").eval(0, 0, 0) == 4.0);
}

TEST_CASE("whitespace is insignificant") {
    Expr a = Expr::parse("s+v * w");
    Expr b = Expr::parse("  s  +v*w ");
    CHECK(a.identical(b));
}

TEST_CASE("syntax errors carry byte offsets") {
    try {
        Expr::parse("sin(s");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.byte_offset == 5);
        CHECK(std::string(e.what()).find("')'") != std::string::npos);
    }
    try {
        Expr::parse("v + q");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.byte_offset == 4);
        CHECK(std::string(e.what()).find("'q'") != std::string::npos);
    }
    CHECK_THROWS_AS(Expr::parse("1 + "), SyntaxError);
    CHECK_THROWS_AS(Expr::parse("min(1)"), SyntaxError);
    CHECK_THROWS_AS(Expr::parse("sin(1, 2)"), SyntaxError);
    CHECK_THROWS_AS(Expr::parse("1 2"), SyntaxError);
    CHECK_THROWS_AS(Expr::parse(""), SyntaxError);
}

TEST_CASE("evaluation faults name the offending node") {
    try {
        Expr::parse("1/(v - 2)").eval(0, 2, 0);
        FAIL("expected EvalError");
    } catch (const EvalError& e) {
        CHECK(std::string(e.what()).find("division by zero") != std::string::npos);
        CHECK(std::string(e.what()).find("v - 2") != std::string::npos);
    }
    CHECK_THROWS_AS(Expr::parse("log(v)").eval(0, -1, 0), EvalError);
    CHECK_THROWS_AS(Expr::parse("log(v)").eval(0, 0, 0), EvalError);
    CHECK_THROWS_AS(Expr::parse("sqrt(v)").eval(0, -1, 0), EvalError);
    CHECK_THROWS_AS(Expr::parse("v^0.5").eval(0, -2, 0), EvalError);
    CHECK_THROWS_AS(Expr::parse("0^(-1)").eval(0, 0, 0), EvalError);
    // IEEE semantics otherwise: overflow is not a fault.
    CHECK(std::isinf(Expr::parse("exp(v)").eval(0, 1000, 0)));
}

TEST_CASE("variable usage reporting") {
    Expr e = Expr::parse("0.1 + sin(s)*v");
    CHECK(e.uses_s());
    CHECK(e.uses_v());
    CHECK(!e.uses_w());
    CHECK(Expr::parse("2").uses_s() == false);
}

TEST_CASE("print round-trip preserves structure on crafted cases") {
    for (const char* text : {
             "v - 0.5*w", "2^3^2",
             "s - (v - w)", "s - v - w", "(s + v) * w", "s / (v / w)",
             "(2^3)^2", "-(s + v)", "-s + v", "s * -v", "2 - -3",
             "min(s, max(v, w))", "(-2)^2", "tanh(s)^2",
         }) {
        Expr e = Expr::parse(text);
        Expr round = Expr::parse(e.str());
        CHECK(round.identical(e));
        // And printing is a fixed point after one round.
        CHECK(round.str() == e.str());
    }
    // Structural inequality across different groupings.
    CHECK(!Expr::parse("s - (v - w)").identical(Expr::parse("s - v - w")));
}

TEST_CASE("round-trip and reference agreement on random expressions") {
    std::mt19937_64 rng(20240817u);
    std::uniform_real_distribution<double> point(-3.0, 3.0);
    int faults = 0;
    for (int iter = 0; iter < 2000; ++iter) {
        exprgen::Tree tree = exprgen::random_tree(rng, 4);
        std::string text = exprgen::to_text(tree);

        Expr parsed = Expr::parse(text);
        Expr reparsed = Expr::parse(parsed.str());
        CHECK(reparsed.identical(parsed));

        double s = point(rng), v = point(rng), w = point(rng);
        bool ref_threw = false, prod_threw = false;
        double ref = 0, prod = 0;
        try {
            ref = exprgen::reference_eval(tree, s, v, w);
        } catch (const exprgen::ReferenceFault&) {
            ref_threw = true;
        }
        try {
            prod = parsed.eval(s, v, w);
        } catch (const EvalError&) {
            prod_threw = true;
        }
        CHECK(ref_threw == prod_threw);
        if (!ref_threw && !prod_threw) {
            CHECK(exprgen::bitwise_equal(ref, prod));
        } else {
            ++faults;
        }
    }
    // The generator must exercise both sides of the fault boundary.
    CHECK(faults > 0);
    CHECK(faults < 2000);
}

TEST_CASE("parse errors are deterministic") {
    for (int i = 0; i < 3; ++i) {
        try {
            Expr::parse("3 * (s + ");
        } catch (const SyntaxError& e) {
            CHECK(e.byte_offset == 9);
        }
    }
}
