#include <doctest.h>

#include "nfmodel/interval.hpp"
#include "nfmodel/mat.hpp"
#include "nfmodel/poly.hpp"
#include "nfmodel/util.hpp"

using namespace nfmodel;

TEST_SUITE("util") {
    TEST_CASE("rational parsing and formatting") {
        CHECK(parse_rational("3/4") == mpq_class(3, 4));
        CHECK(parse_rational("-12") == mpq_class(-12));
        CHECK(parse_rational("2.5") == mpq_class(5, 2));
        CHECK_THROWS_AS(parse_rational("x"), input_error);
        CHECK(format_decimal(mpq_class(1, 8), 6) == "0.125");
        CHECK(format_decimal(mpq_class(0)) == "0");
        CHECK(format_decimal(mpq_class(-3)) == "-3");
        CHECK(format_decimal(mpq_class(1, mpz_class("100000000000000000000")), 4) == "1e-20");
    }

    TEST_CASE("integer helpers") {
        CHECK(round_div(7, 2) == 4);   // ties up
        CHECK(round_div(-7, 2) == -3);
        CHECK(floor_div(-7, 2) == -4);
        CHECK(isqrt_floor(mpz_class(99)) == 9);
        CHECK(isqrt_ceil(mpz_class(99)) == 10);
        bool exact = false;
        CHECK(root_floor(mpz_class(1000), 3, &exact) == 10);
        CHECK(exact);
        CHECK(root_ceil(mpz_class(1001), 3, &exact) == 11);
        CHECK_FALSE(exact);
        CHECK(binomial(12, 6) == 924);
    }

    TEST_CASE("deterministic rng") {
        Rng a(42), b(42);
        for (int i = 0; i < 100; ++i) CHECK(a.below(1000) == b.below(1000));
        Rng c(7);
        for (int i = 0; i < 1000; ++i) {
            int64_t v = c.range(-6, 6);
            CHECK(v >= -6);
            CHECK(v <= 6);
        }
    }
}

TEST_SUITE("mat") {
    TEST_CASE("rank: zero and Vandermonde") {
        ZMat z(3, 4);
        CHECK(bareiss_rank(z) == 0);
        ZMat v(3, 3);
        long nodes[3] = {1, 2, 3};
        for (size_t i = 0; i < 3; ++i)
            for (size_t j = 0; j < 3; ++j) v(i, j) = pow_z(nodes[i], j);
        CHECK(bareiss_rank(v) == 3);
    }

    TEST_CASE("determinant") {
        ZMat m(2, 2);
        m(0, 0) = 2;
        m(0, 1) = 0;
        m(1, 0) = 0;
        m(1, 1) = 4;
        CHECK(bareiss_det(m) == 8);
        ZMat s(3, 3);
        // singular: rows 0 and 2 equal
        s(0, 0) = 1;
        s(0, 1) = 2;
        s(0, 2) = 3;
        s(1, 0) = 4;
        s(1, 1) = 5;
        s(1, 2) = 6;
        s(2, 0) = 1;
        s(2, 1) = 2;
        s(2, 2) = 3;
        CHECK(bareiss_det(s) == 0);
    }

    TEST_CASE("hnf and kernel") {
        ZMat m(1, 2);
        m(0, 0) = 2;
        m(0, 1) = 4;
        ZMat k = kernel_basis(m);
        REQUIRE(k.rows() == 1);
        CHECK(k(0, 0) == 2);
        CHECK(k(0, 1) == -1);
        CHECK(kernel_basis(ZMat::identity(4)).rows() == 0);

        // U*A = H with unimodular U
        Rng rng(11);
        for (int trial = 0; trial < 20; ++trial) {
            ZMat a(3, 4);
            for (size_t i = 0; i < 3; ++i)
                for (size_t j = 0; j < 4; ++j) a(i, j) = rng.range(-9, 9);
            auto [h, u] = hnf_rows(a);
            CHECK(mat_mul(u, a) == h);
            mpz_class du = bareiss_det(u);
            CHECK((du == 1 || du == -1));
        }
    }

    TEST_CASE("solve and inverse") {
        QMat a(2, 2);
        a(0, 0) = 1;
        a(0, 1) = 2;
        a(1, 0) = 3;
        a(1, 1) = 4;
        auto inv = inverse(a);
        REQUIRE(inv.has_value());
        QMat prod = mat_mul(*inv, a);
        CHECK(prod == to_rational(ZMat::identity(2)));
        QMat sing(2, 2);
        sing(0, 0) = 1;
        sing(0, 1) = 2;
        sing(1, 0) = 2;
        sing(1, 1) = 4;
        CHECK_FALSE(inverse(sing).has_value());
    }
}

TEST_SUITE("poly") {
    TEST_CASE("discriminants") {
        CHECK(poly_discriminant({-2, 0, 1}) == 8);
        CHECK(poly_discriminant({1, 0, 1}) == -4);
        CHECK(poly_discriminant({-1, -1, 0, 1}) == -23);
        CHECK(poly_discriminant({1, -2, 1}) == 0);  // (x-1)^2
    }

    TEST_CASE("sturm real root counts") {
        CHECK(count_real_roots({-2, 0, 1}) == 2);
        CHECK(count_real_roots({1, 0, 1}) == 0);
        CHECK(count_real_roots({-1, -1, 0, 1}) == 1);
        CHECK(count_real_roots({1, 0, 0, 0, -1, 0, 1, 0, 1}) == 0);  // cyclotomic-20
    }

    TEST_CASE("division invariant") {
        Rng rng(5);
        for (int t = 0; t < 30; ++t) {
            QPoly a(6), b(3);
            for (auto& c : a) c = rng.range(-9, 9);
            for (auto& c : b) c = rng.range(-9, 9);
            poly_trim(a);
            poly_trim(b);
            if (b.empty()) continue;
            auto [q, r] = poly_divrem(a, b);
            CHECK(poly_add(poly_mul(q, b), r) == a);
            CHECK(poly_degree(r) < poly_degree(b));
        }
    }
}

TEST_SUITE("interval") {
    TEST_CASE("arithmetic encloses point operations") {
        Rng rng(9);
        for (int t = 0; t < 200; ++t) {
            mpq_class a(rng.range(-50, 50), 1 + rng.below(9));
            mpq_class b(rng.range(-50, 50), 1 + rng.below(9));
            a.canonicalize();
            b.canonicalize();
            mpq_class ra(1, 1 + rng.below(64)), rb(1, 1 + rng.below(64));
            QInterval A = QInterval::from_mid_rad(a, ra), B = QInterval::from_mid_rad(b, rb);
            CHECK((A + B).contains(a + b));
            CHECK((A - B).contains(a - b));
            CHECK((A * B).contains(a * b));
            if (!B.contains_zero()) CHECK((A / B).contains(mpq_class(a / b)));
            CHECK(square_i(A).contains(mpq_class(a * a)));
            CHECK(abs_i(A).contains(abs_q(a)));
            QInterval R = round_out(A, 16);
            CHECK(R.lo <= A.lo);
            CHECK(R.hi >= A.hi);
        }
    }

    TEST_CASE("sqrt enclosure") {
        mpq_class two(2);
        mpq_class lo = sqrt_lower(two, 80), hi = sqrt_upper(two, 80);
        CHECK(lo * lo <= 2);
        CHECK(hi * hi >= 2);
        CHECK(hi - lo < pow2_q(-70));
    }

    TEST_CASE("complex box division encloses") {
        QBox a(mpq_class(3), mpq_class(-2));
        QBox b(QInterval(mpq_class(1), mpq_class(2)), QInterval(mpq_class(1), mpq_class(1)));
        QBox q = a / b;
        // check a sample w = 1.5 + i: a/w = (3-2i)(1.5-i)/(1.5^2+1)
        mpq_class den = mpq_class(13, 4);
        mpq_class re = (mpq_class(3) * mpq_class(3, 2) + mpq_class(-2) * 1) / den;
        mpq_class im = (mpq_class(-2) * mpq_class(3, 2) - mpq_class(3) * 1) / den;
        CHECK(q.re.contains(re));
        CHECK(q.im.contains(im));
    }
}
