#include "mouldkit/operators.hpp"

#include "test_support.hpp"

#include <doctest.h>

using namespace mouldkit;

namespace {

TruncatedPoly x_pow(int k) { return poly_monomial(DegVec{k}, Scalar(1)); }

PreparedDiffeo quad_1d(Scalar mu, Scalar a, int trunc) {
    return testkit::one_dim_diffeo(mu, {{2, a}}, trunc);
}

OperatorSeries random_graded_op(testkit::Rng& rng, int nu, int trunc, int max_letter_weight = 2) {
    OperatorSeries p = op_zero(nu, trunc);
    auto letters = all_valid_letters(nu, max_letter_weight);
    auto monos = enumerate_monomials(nu, trunc);
    std::uniform_int_distribution<int> pct(0, 99);
    for (const auto& d : letters)
        for (const auto& m : monos) {
            DegVec out(m.size());
            bool ok = true;
            for (size_t i = 0; i < m.size(); ++i) {
                out[i] = m[i] + d[i];
                if (out[i] < 0)
                    ok = false;
            }
            if (!ok || total_degree(out) > trunc)
                continue;
            if (pct(rng) < 40)
                p.add_part_entry(d, m, testkit::random_scalar(rng, false));
        }
    return p;
}

}  // namespace

TEST_CASE("polynomial substitution") {
    std::vector<TruncatedPoly> g{poly_add(x_pow(1), x_pow(2))};
    CHECK(poly_substitute(x_pow(1), g, 3) == poly_add(x_pow(1), x_pow(2)));
    // (x + x^2)^2 truncated at 3
    TruncatedPoly sq = poly_substitute(x_pow(2), g, 3);
    TruncatedPoly expect = poly_add(x_pow(2), poly_scale(Scalar(2), x_pow(3)));
    CHECK(sq == expect);
    // identity substitution
    TruncatedPoly phi = poly_add(poly_scale(Scalar(Rational(3, 7)), x_pow(1)), x_pow(3));
    CHECK(poly_substitute(phi, map_identity(1), 4) == phi);

    std::vector<TruncatedPoly> with_const{poly_add(x_pow(0), x_pow(1))};
    CHECK_THROWS_AS(poly_substitute(x_pow(1), with_const, 3), std::invalid_argument);
}

TEST_CASE("linear-part action on polynomials") {
    MultiplierVector mu{Scalar(2)};
    CHECK(flin_apply(mu, x_pow(3)) == poly_scale(Scalar(8), x_pow(3)));

    MultiplierVector res{Scalar(2), Scalar(Rational(1, 2))};
    TruncatedPoly xy = poly_monomial(DegVec{1, 1}, Scalar(1));
    CHECK(flin_apply(res, xy) == xy);

    testkit::Rng rng(41);
    for (int k = 0; k < 20; ++k) {
        TruncatedPoly a, b;
        for (int t = 0; t < 3; ++t) {
            a.add_term(DegVec{std::uniform_int_distribution<int>(0, 3)(rng)},
                       testkit::random_scalar(rng, false));
            b.add_term(DegVec{std::uniform_int_distribution<int>(0, 3)(rng)},
                       testkit::random_scalar(rng, false));
        }
        CHECK(flin_apply(mu, poly_mul(a, b, 6)) ==
              poly_mul(flin_apply(mu, a), flin_apply(mu, b), 6));
    }
}

TEST_CASE("homogeneous decomposition of a 1-d quadratic diffeo") {
    // f = 2x + x^2: the shifted components come from (x + x^2/4)^m
    PreparedDiffeo f = quad_1d(Scalar(2), Scalar(1), 4);
    OperatorSeries p = extract_B(f);
    CHECK(p.constant == Scalar(1));

    const HomOperator* b1 = p.part({1});
    REQUIRE(b1 != nullptr);
    // binomial oracle: beta_{k,m} = C(m,k) (1/4)^k
    for (int m = 1; m <= 3; ++m)
        CHECK(b1->entry({m}) == Scalar(Rational(m, 4)));
    const HomOperator* b2 = p.part({2});
    REQUIRE(b2 != nullptr);
    CHECK(b2->entry({2}) == Scalar(Rational(1, 16)));

    // h = 0 has no components
    PreparedDiffeo lin = testkit::one_dim_diffeo(Scalar(2), {}, 4);
    CHECK(extract_B(lin) == op_identity(1, 4));
}

TEST_CASE("reconstruction: phi o f = F_lin (Id + sum B)(phi) exactly") {
    testkit::Rng rng(42);
    MultiplierVector mu{Scalar(2), Scalar(Rational(1, 2))};
    for (int k = 0; k < 5; ++k) {
        PreparedDiffeo f = testkit::random_diffeo(rng, mu, 5, 4);
        OperatorSeries p = extract_B(f);
        PolyMap fm = diffeo_map(f);
        for (const DegVec& m : enumerate_monomials(f.nu, f.trunc)) {
            TruncatedPoly direct = poly_substitute(poly_monomial(m, Scalar(1)), fm, f.trunc);
            TruncatedPoly via_op = flin_apply(mu, op_apply(p, poly_monomial(m, Scalar(1))));
            CHECK(direct == via_op);
        }
        // automorphism property on random polynomial pairs
        for (int t = 0; t < 3; ++t) {
            TruncatedPoly a, b;
            auto monos = enumerate_monomials(f.nu, 2);
            for (const auto& mm : monos) {
                a.add_term(mm, testkit::random_scalar(rng, false));
                b.add_term(mm, testkit::random_scalar(rng, false));
            }
            TruncatedPoly lhs = flin_apply(mu, op_apply(p, poly_mul(a, b, f.trunc)));
            TruncatedPoly rhs = poly_mul(flin_apply(mu, op_apply(p, a)),
                                         flin_apply(mu, op_apply(p, b)), f.trunc);
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("operator product, exp, log, inverse") {
    testkit::Rng rng(43);
    for (int k = 0; k < 8; ++k) {
        OperatorSeries a = random_graded_op(rng, 1, 4);
        OperatorSeries b = random_graded_op(rng, 1, 4);
        OperatorSeries c = random_graded_op(rng, 1, 4);
        CHECK(op_mul(op_mul(a, b), c) == op_mul(a, op_mul(b, c)));

        CHECK(op_log(op_exp(a)) == a);

        OperatorSeries u = op_add(op_identity(1, 4), a);
        CHECK(op_mul(u, op_inverse(u)) == op_identity(1, 4));
    }
    CHECK(op_exp(op_zero(1, 4)) == op_identity(1, 4));

    OperatorSeries not_unipotent = op_zero(1, 4);
    CHECK_THROWS_AS(op_log(not_unipotent), std::invalid_argument);
    CHECK_THROWS_AS(op_inverse(op_zero(1, 4)), std::invalid_argument);
    CHECK_THROWS_AS(op_exp(op_identity(1, 4)), std::invalid_argument);
}

TEST_CASE("derivation alphabet via the operator logarithm") {
    // h = 0: empty series
    PreparedDiffeo lin = testkit::one_dim_diffeo(Scalar(2), {}, 4);
    CHECK(extract_D(lin) == op_zero(1, 4));

    // one component whose square truncates away: log(1+B) = B
    PreparedDiffeo f = quad_1d(Scalar(2), Scalar(1), 2);
    OperatorSeries b = extract_B(f);
    OperatorSeries d = extract_D(f);
    OperatorSeries bparts = b;
    bparts.constant = Scalar();
    CHECK(d == bparts);
}

TEST_CASE("alphabet bridge: operator log equals the Log I mould expansion") {
    testkit::Rng rng(44);
    MultiplierVector mu{Scalar(2), Scalar(Rational(1, 2))};
    for (int k = 0; k < 3; ++k) {
        PreparedDiffeo f = testkit::random_diffeo(rng, mu, 4, 4);
        OperatorSeries p = extract_B(f);
        OperatorSeries d = extract_D(p);
        auto ctx = make_context(f.nu, f.mu, f.trunc, alphabet_of(p));
        Mould log_id = mould_log(mould_add(mould_one(ctx), mould_id(ctx)));
        CHECK(mould_expand(log_id, p) == d);
    }
}

TEST_CASE("mould expansion basics") {
    PreparedDiffeo f = quad_1d(Scalar(2), Scalar(1), 4);
    OperatorSeries p = extract_B(f);
    auto ctx = make_context(1, f.mu, 4, alphabet_of(p));

    CHECK(mould_expand(mould_one(ctx), p) == op_identity(1, 4));

    OperatorSeries parts_only = p;
    parts_only.constant = Scalar();
    CHECK(mould_expand(mould_id(ctx), p) == parts_only);

    // Exp I expanded equals the operator exponential of the part sum
    CHECK(mould_expand(length1_exp(mould_id(ctx)), p) == op_exp(parts_only));
}

TEST_CASE("the e^Delta twist matches its operator realization") {
    testkit::Rng rng(49);
    MultiplierVector mu{Scalar(2), Scalar(Rational(1, 2))};
    PreparedDiffeo f = testkit::random_diffeo(rng, mu, 4, 3);
    OperatorSeries p = extract_B(f);
    auto ctx = make_context(f.nu, mu, f.trunc, alphabet_of(p));
    for (int k = 0; k < 5; ++k) {
        Mould m = testkit::random_mould(ctx, rng, testkit::random_scalar(rng, false));
        CHECK(mould_expand(mould_edelta(m), p) == flin_twist(mould_expand(m, p), mu));
    }
}

TEST_CASE("conjugation: mould route equals operator route") {
    testkit::Rng rng(45);
    for (int k = 0; k < 5; ++k) {
        PreparedDiffeo f = quad_1d(Scalar(2), testkit::random_nonzero_rational(rng), 4);
        OperatorSeries p = extract_B(f);
        auto ctx = make_context(1, f.mu, 4, alphabet_of(p));

        Mould theta = testkit::random_mould(ctx, rng, Scalar(1));
        OperatorSeries theta_op = mould_expand(theta, p);

        OperatorSeries via_ops = conjugate_operator(theta_op, p, f.mu);
        Mould c = conjugation_mould(theta);
        CHECK(mould_expand(c, p) == via_ops);

        // conjugating back returns the original series
        OperatorSeries forth = op_mul(op_mul(theta_op, p), op_inverse(theta_op));
        OperatorSeries back = op_mul(op_mul(op_inverse(theta_op), forth), theta_op);
        CHECK(back == p);

        CHECK(conjugate_operator(op_identity(1, 4), p, f.mu) == p);
    }
    OperatorSeries singular = op_zero(1, 4);
    CHECK_THROWS_AS(conjugate_operator(singular, op_identity(1, 4), {Scalar(2)}),
                    std::invalid_argument);
}

TEST_CASE("commutation with the linear part") {
    MultiplierVector mu{Scalar(2), Scalar(Rational(1, 2))};
    OperatorSeries id = op_identity(2, 4);
    CHECK(commutes_with_flin(id, mu));

    OperatorSeries bad = id;
    bad.add_part_entry({1, 0}, {1, 0}, Scalar(1));  // nonresonant degree
    CHECK_FALSE(commutes_with_flin(bad, mu));

    OperatorSeries good = id;
    good.add_part_entry({1, 1}, {1, 0}, Scalar(1));  // resonant degree
    good.add_part_entry({2, 2}, {1, 0}, Scalar(Rational(1, 3)));
    CHECK(commutes_with_flin(good, mu));

    // matrix characterization == degree characterization on random series
    testkit::Rng rng(46);
    for (int k = 0; k < 10; ++k) {
        OperatorSeries p = random_graded_op(rng, 2, 3);
        bool by_matrix = commutes_with_flin(p, mu);
        bool by_degree = true;
        for (const auto& [d, op] : p.parts)
            if (!multiplier_power(mu, d).is_one())
                by_degree = false;
        CHECK(by_matrix == by_degree);
    }
}

TEST_CASE("operator to map round-trip") {
    testkit::Rng rng(47);
    MultiplierVector mu{Scalar(2), Scalar(Rational(1, 2))};
    PreparedDiffeo f = testkit::random_diffeo(rng, mu, 5, 4);
    OperatorSeries p = extract_B(f);
    CHECK(operator_to_map(p, mu) == diffeo_map(f));
    CHECK(operator_to_map(op_identity(2, 5), mu) ==
          diffeo_map(PreparedDiffeo{2, mu, {TruncatedPoly{}, TruncatedPoly{}}, 5}));
}

TEST_CASE("truncated BCH identities") {
    testkit::Rng rng(48);

    // commuting case: scalar multiples
    OperatorSeries a = random_graded_op(rng, 1, 4);
    OperatorSeries b = op_scale(Scalar(Rational(5, 3)), a);
    CHECK(bch_star(a, b, 4) == op_add(a, b));

    for (int k = 0; k < 6; ++k) {
        OperatorSeries p = random_graded_op(rng, 1, 4, 1);
        OperatorSeries q = random_graded_op(rng, 1, 4, 1);

        // weight-1 parts at truncation 4 kill every bracket beyond depth 3
        CHECK(op_mul(op_exp(p), op_exp(q)) == op_exp(bch_star(p, q, 4)));

        // exp(A) B exp(-A) = sum of iterated brackets over factorials
        OperatorSeries lhs =
            op_mul(op_mul(op_exp(p), q), op_exp(op_scale(Scalar(-1L), p)));
        OperatorSeries rhs = op_zero(1, 4);
        OperatorSeries bracket = q;
        Rational fact(1);
        for (int m = 0; m <= 4; ++m) {
            if (m > 0) {
                fact *= m;
                bracket = op_commutator(p, bracket);
            }
            rhs = op_add(rhs, op_scale(Scalar(Rational(1) / fact), bracket));
        }
        CHECK(lhs == rhs);
    }

    CHECK_THROWS_AS(bch_star(a, b, 5), std::invalid_argument);
    CHECK_THROWS_AS(bch_star(op_identity(1, 4), op_zero(1, 4), 2), std::invalid_argument);
}
