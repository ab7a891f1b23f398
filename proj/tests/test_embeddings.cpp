#include <doctest.h>

#include "corpus.hpp"
#include "nfmodel/embeddings.hpp"
#include "oracles.hpp"

using namespace nfmodel;

namespace {

NumberField power_basis_field(const ZPoly& f) {
    FieldDesc d;
    d.defining_polynomial = f;
    d.assume_power_basis_maximal = true;
    return parse_field(d);
}

const ZPoly kSqrt2 = {-2, 0, 1};
const ZPoly kGauss = {1, 0, 1};
const ZPoly kPlastic = {-1, -1, 0, 1};

bool interval_near(const QInterval& iv, double x, double tol) {
    return iv.lo.get_d() <= x + tol && iv.hi.get_d() >= x - tol;
}

}  // namespace

TEST_SUITE("embeddings") {
    TEST_CASE("complex_roots: x^2+1 at 64 bits") {
        auto r = complex_roots(kGauss, 64);
        CHECK(r.reals.empty());
        REQUIRE(r.complex_pairs.size() == 1);
        const QBox& b = r.complex_pairs[0];
        CHECK(b.re.contains(mpq_class(0)));  // exact root i
        CHECK(b.im.contains(mpq_class(1)));
        CHECK(r.max_radius <= pow2_q(-64));
    }

    TEST_CASE("complex_roots: x^2-2 against the Newton oracle") {
        auto r = complex_roots(kSqrt2, 64);
        REQUIRE(r.reals.size() == 2);
        double lo = oracles::newton_root(kSqrt2, -1.5);
        double hi = oracles::newton_root(kSqrt2, 1.5);
        CHECK(interval_near(r.reals[0], lo, 1e-12));
        CHECK(interval_near(r.reals[1], hi, 1e-12));
        CHECK(r.reals[0].mid() < r.reals[1].mid());  // ascending
        CHECK(r.max_radius <= pow2_q(-64));
        CHECK(r.reals[0].disjoint(r.reals[1]));
    }

    TEST_CASE("complex_roots: x^3-x-1 real root and pair modulus") {
        auto r = complex_roots(kPlastic, 64);
        REQUIRE(r.reals.size() == 1);
        REQUIRE(r.complex_pairs.size() == 1);
        double rho = oracles::newton_root(kPlastic, 1.3);
        CHECK(interval_near(r.reals[0], rho, 1e-12));
        CHECK(r.complex_pairs[0].im.lo > 0);
        // |sigma|^2 = 1/rho since the root product is 1
        double mod_sq = r.complex_pairs[0].abs_sq().mid().get_d();
        CHECK(std::abs(mod_sq - 1.0 / rho) < 1e-9);
    }

    TEST_CASE("complex_roots: input validation") {
        CHECK_THROWS_AS(complex_roots({-1, 1, -1, 2}, 64), input_error);  // non-monic
        CHECK_THROWS_AS(complex_roots({5}, 64), input_error);             // constant
        auto r = complex_roots(kSqrt2, 32);
        CHECK(r.precision == 32);
        CHECK(r.max_radius <= pow2_q(-32));
    }

    TEST_CASE("embed: examples") {
        NumberField K = power_basis_field(kSqrt2);
        auto roots = complex_roots(K.f, 128);
        auto one = embed(K.one(), roots, K);
        CHECK(one.sup_norm.lo == 1);
        CHECK(one.sup_norm.hi == 1);
        QVec c(2);
        c[1] = 1;
        auto sq2 = embed(FieldElement(c), roots, K);
        CHECK(sq2.sup_norm.lo.get_d() > 1.41421);
        CHECK(sq2.sup_norm.hi.get_d() < 1.41422);

        NumberField K3 = power_basis_field(kPlastic);
        auto roots3 = complex_roots(K3.f, 128);
        QVec t(3);
        t[1] = 1;
        auto th = embed(FieldElement(t), roots3, K3);
        double rho = oracles::newton_root(kPlastic, 1.3);
        CHECK(std::abs(th.sup_norm.mid().get_d() - rho) < 1e-12);
    }

    TEST_CASE("canonical_gram: quadratic fields") {
        NumberField K = power_basis_field(kSqrt2);
        auto roots = complex_roots(K.f, 128);
        CanonicalGram g = canonical_gram(K, roots);
        // totally real: equals the trace form
        long expected[2][2] = {{2, 0}, {0, 4}};
        for (size_t i = 0; i < 2; ++i)
            for (size_t j = 0; j < 2; ++j)
                CHECK(abs_q(g.mid(i, j) - expected[i][j]) <= g.error_bound);
        CHECK(g.det_enclosure.contains(mpq_class(8)));

        NumberField Ki = power_basis_field(kGauss);
        auto ri = complex_roots(Ki.f, 128);
        CanonicalGram gi = canonical_gram(Ki, ri);
        long exp_i[2][2] = {{2, 0}, {0, 2}};
        for (size_t i = 0; i < 2; ++i)
            for (size_t j = 0; j < 2; ++j)
                CHECK(abs_q(gi.mid(i, j) - exp_i[i][j]) <= gi.error_bound);
        CHECK(gi.det_enclosure.contains(mpq_class(4)));
    }

    TEST_CASE("canonical_gram: det enclosure contains |disc|, width shrinks with precision") {
        auto polys = corpus::random_fields(5, 555);
        polys.push_back(kPlastic);
        for (const auto& f : polys) {
            NumberField K = corpus::field_of(f);
            auto r128 = complex_roots(K.f, 128);
            auto r256 = complex_roots(K.f, 256);
            CanonicalGram g1 = canonical_gram(K, r128);
            CanonicalGram g2 = canonical_gram(K, r256);
            mpq_class dabs(abs_disc(K));
            CHECK(g1.det_enclosure.contains(dabs));
            CHECK(g2.det_enclosure.contains(dabs));
            CHECK(g2.det_enclosure.width() * 2 <= g1.det_enclosure.width());
        }
    }

    TEST_CASE("property: nonzero integers have sup-norm at least 1") {
        auto polys = corpus::random_fields(4, 808);
        Rng rng(606);
        for (const auto& f : polys) {
            NumberField K = corpus::field_of(f);
            auto roots = complex_roots(K.f, 128);
            for (int t = 0; t < 8; ++t) {
                QVec c(K.n);
                bool zero = true;
                for (size_t i = 0; i < K.n; ++i) {
                    c[i] = rng.range(-999, 999);
                    if (c[i] != 0) zero = false;
                }
                if (zero) c[0] = 1;
                auto e = embed(FieldElement(c), roots, K);
                CHECK(e.sup_norm.hi >= 1);
                CHECK(e.sup_norm.lo > 1 - pow2_q(-64));
            }
        }
    }

    TEST_CASE("property: embedding is numerically multiplicative") {
        NumberField K = power_basis_field(kPlastic);
        auto roots = complex_roots(K.f, 128);
        Rng rng(17);
        for (int t = 0; t < 10; ++t) {
            QVec av(K.n), bv(K.n);
            for (size_t i = 0; i < K.n; ++i) {
                av[i] = rng.range(-9, 9);
                bv[i] = rng.range(-9, 9);
            }
            FieldElement a(av), b(bv);
            auto ea = embed(a, roots, K);
            auto eb = embed(b, roots, K);
            auto eab = embed(element_mul(a, b, K), roots, K);
            for (size_t i = 0; i < K.r1; ++i) {
                QInterval prod = ea.real_components[i] * eb.real_components[i];
                CHECK_FALSE(prod.disjoint(eab.real_components[i]));
            }
            for (size_t i = 0; i < K.s; ++i) {
                QBox prod = ea.complex_components[i] * eb.complex_components[i];
                CHECK_FALSE(prod.disjoint(eab.complex_components[i]));
            }
        }
    }
}
