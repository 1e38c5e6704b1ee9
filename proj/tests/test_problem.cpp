#include <random>
#include <string>

#include "doctest.h"
#include "shishkin/error.hpp"
#include "shishkin/problem.hpp"
#include "shishkin/problem_io.hpp"
#include "support.hpp"

using namespace shishkin;

namespace {

ProblemSpec constant_problem(const SquareMatrix& a, double horizon = 1.0,
                             std::vector<double> eps = {0.01, 0.1}) {
    const Vector zero(a.size(), 0.0), ones(a.size(), 1.0);
    return ProblemSpec::constant(a, zero, ones, horizon, PerturbationVector(std::move(eps)));
}

Condition failing_condition(const ProblemSpec& spec) {
    try {
        validate(spec);
    } catch (const ValidationError& e) {
        return e.condition();
    }
    FAIL("validation unexpectedly passed");
    return Condition::Finite;
}

}  // namespace

TEST_CASE("eps must be strictly increasing in (0, 1]") {
    CHECK_NOTHROW(PerturbationVector({0.01, 0.1, 1.0}));
    auto cond = [](std::vector<double> eps) {
        try {
            PerturbationVector p(std::move(eps));
        } catch (const ValidationError& e) {
            return e.condition();
        }
        return Condition::Finite;
    };
    CHECK(cond({0.1, 0.1}) == Condition::EpsCoincident);
    CHECK(cond({0.2, 0.1}) == Condition::EpsOrder);
    CHECK(cond({0.0, 0.1}) == Condition::EpsRange);
    CHECK(cond({0.1, 1.5}) == Condition::EpsRange);
    CHECK(cond({}) == Condition::EpsRange);
}

TEST_CASE("time polynomials") {
    CHECK(TimePolynomial({2, 1})(1.0) == 3);
    CHECK(TimePolynomial({1, 0, 1})(2.0) == 5);
    CHECK(TimePolynomial(std::vector<double>{})(4.0) == 0);
    CHECK(TimePolynomial({3, 0, 0}).is_constant());
    CHECK_FALSE(TimePolynomial({3, 0, 1e-300}).is_constant());
    CHECK_NOTHROW(TimePolynomial(std::vector<double>(17, 1.0)));
    CHECK_THROWS_AS(TimePolynomial(std::vector<double>(18, 1.0)), ParseError);
    CHECK_THROWS_AS(TimePolynomial({1.0, std::nan("")}), ParseError);
}

TEST_CASE("eval_A and eval_f") {
    const ProblemSpec c = constant_problem({{2, -1}, {-1, 2}});
    CHECK(c.eval_A(0.7) == SquareMatrix{{2, -1}, {-1, 2}});
    CHECK(c.eval_f(0.3) == Vector{0, 0});

    using P = TimePolynomial;
    ProblemSpec v({{P({2, 1}), P({-1})}, {P({-1}), P({1, 0, 1})}}, {P({1, 2}), P({0, 0, 1})},
                  Vector{0, 0}, 3.0, PerturbationVector({0.01, 0.1}));
    CHECK(v.eval_A(1.0)(0, 0) == 3);
    CHECK(v.eval_A(2.0)(1, 1) == 5);
    CHECK(v.eval_f(0.5)[0] == 2);
    CHECK(v.eval_f(3.0)[1] == 9);
    CHECK_THROWS_AS(v.eval_A(3.5), DomainError);
    CHECK_THROWS_AS(v.eval_f(-0.1), DomainError);
    CHECK_FALSE(v.has_constant_matrix());
    CHECK(c.has_constant_coefficients());
}

TEST_CASE("problem dimensions are checked") {
    using P = TimePolynomial;
    const PerturbationVector eps({0.01, 0.1});
    CHECK_THROWS_AS(ProblemSpec({{P({1}), P({0})}}, {P({1}), P({1})}, Vector{0, 0}, 1.0, eps),
                    ParseError);
    CHECK_THROWS_AS(ProblemSpec({{P({1}), P({0})}, {P({0}), P({1})}}, {P({1})}, Vector{0, 0}, 1.0, eps),
                    ParseError);
    CHECK_THROWS_AS(ProblemSpec({{P({1}), P({0})}, {P({0}), P({1})}}, {P({1}), P({1})}, Vector{0, 0},
                                0.0, eps),
                    ParseError);
    CHECK_THROWS_AS(ProblemSpec({{P({1})}}, {P({1})}, Vector{0}, 1.0, eps), ParseError);
}

TEST_CASE("validate: alpha and the horizon") {
    const ValidatedProblem vp = validate(constant_problem({{2, -1}, {-1, 2}}));
    CHECK(vp.alpha() == 1.0);
    CHECK(vp.sample_count() == kDefaultSampleCount);
    CHECK(failing_condition(constant_problem({{2, -1}, {-1, 2}}, 0.1)) == Condition::Horizon);
    CHECK_THROWS_AS(validate(constant_problem({{2, -1}, {-1, 2}}), 1), Error);
}

TEST_CASE("validate: (a1) violations carry row, column and time") {
    try {
        validate(constant_problem({{1, -2}, {0, 1}}));
        FAIL("expected dominance failure");
    } catch (const ValidationError& e) {
        CHECK(e.condition() == Condition::DominanceA1);
        CHECK(e.row() == 0u);
        CHECK(e.t() == 0.0);
        CHECK(std::string(e.what()).find("(a1)-dominance] in row 1") != std::string::npos);
    }
    try {
        validate(constant_problem({{2, 1}, {-1, 2}}));
        FAIL("expected sign failure");
    } catch (const ValidationError& e) {
        CHECK(e.condition() == Condition::SignA1);
        CHECK(std::string(e.what()).find("entry (1,2)") != std::string::npos);
    }
}

TEST_CASE("validate catches a violation that appears later in time") {
    using P = TimePolynomial;
    // a_22 = 2 - 2t loses dominance for t > 0.5.
    ProblemSpec spec({{P({2}), P({-1})}, {P({-1}), P({2, -2})}}, {P({0}), P({0})}, Vector{1, 1}, 1.0,
                     PerturbationVector({0.01, 0.1}));
    try {
        validate(spec, 11);
        FAIL("expected dominance failure");
    } catch (const ValidationError& e) {
        CHECK(e.condition() == Condition::DominanceA1);
        CHECK(e.row() == 1u);
        CHECK(*e.t() == doctest::Approx(0.5));
    }
}

TEST_CASE("validated matrices re-check at finer sampling") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto vp = testsupport::random_problem(rng, testsupport::pick(rng, 1, 5));
        for (int s = 0; s <= 500; ++s) {
            const SquareMatrix a = vp.spec().eval_A(s / 500.0);
            for (std::size_t i = 0; i < vp.size(); ++i) {
                double sum = 0.0;
                for (std::size_t j = 0; j < vp.size(); ++j) {
                    if (i != j) CHECK(a(i, j) <= 0.0);
                    sum += a(i, j);
                }
                CHECK(a(i, i) > 0.0);
                CHECK(sum >= vp.alpha() * (1 - 1e-12));
            }
        }
        CHECK(validate(vp.spec(), 128).alpha() == vp.alpha());
    }
}

TEST_CASE("problem JSON round trip") {
    const char* text = R"({
      "n": 2, "T": 1.0, "eps": [0.01, 0.1], "u0": [1.0, 1.0],
      "A": [[[2], [-1]], [[-1], [2, 1]]],
      "f": [[0], [1, 0, 1]]
    })";
    const ProblemSpec spec = parse_problem_json(text);
    CHECK(spec.size() == 2);
    CHECK(spec.eval_A(1.0)(1, 1) == 3);
    CHECK(spec.eval_f(1.0)[1] == 2);
    const ProblemSpec again = parse_problem_json(problem_to_json(spec));
    CHECK(again.eval_A(0.5) == spec.eval_A(0.5));
    CHECK(again.eval_f(0.5) == spec.eval_f(0.5));
    CHECK(again.horizon() == spec.horizon());
}

TEST_CASE("problem JSON errors") {
    CHECK_THROWS_AS(parse_problem_json("{"), ParseError);
    CHECK_THROWS_AS(parse_problem_json("[]"), ParseError);
    CHECK_THROWS_AS(parse_problem_json(R"({"n":1,"T":1,"eps":[1],"u0":[0],"A":[[[1]]],"f":[[0]],"x":1})"),
                    ParseError);
    CHECK_THROWS_AS(parse_problem_json(R"({"n":1,"T":1,"eps":[1],"u0":[0],"A":[[[1]]]})"), ParseError);
    CHECK_THROWS_AS(parse_problem_json(R"({"n":2,"T":1,"eps":[1],"u0":[0],"A":[[[1]]],"f":[[0]]})"),
                    ParseError);
    CHECK_THROWS_AS(parse_problem_json(R"({"n":1,"T":1,"eps":[1],"u0":["a"],"A":[[[1]]],"f":[[0]]})"),
                    ParseError);
    CHECK_THROWS_AS(parse_problem_json(R"({"n":2,"T":1,"eps":[0.5,0.5],"u0":[0,0],
        "A":[[[1],[0]],[[0],[1]]],"f":[[0],[0]]})"),
                    ValidationError);
    try {
        load_problem(SHISHKIN_PROBLEM_DIR "/does_not_exist.json");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("does_not_exist.json") != std::string::npos);
    }
}

TEST_CASE("bundled problem files load and validate") {
    CHECK(validate(load_problem(SHISHKIN_PROBLEM_DIR "/layer2.json")).alpha() == 1.0);
    CHECK(validate(load_problem(SHISHKIN_PROBLEM_DIR "/oracle2.json")).alpha() == 2.0);
    CHECK(validate(load_problem(SHISHKIN_PROBLEM_DIR "/variable3.json")).alpha() == 2.0);
    CHECK_THROWS_AS(validate(load_problem(SHISHKIN_PROBLEM_DIR "/not_dominant.json")), ValidationError);
}
