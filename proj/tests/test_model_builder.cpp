#include <doctest.h>

#include "corpus.hpp"
#include "nfmodel/io.hpp"
#include "nfmodel/model.hpp"

using namespace nfmodel;

namespace {

NumberField power_basis_field(const ZPoly& f) {
    FieldDesc d;
    d.defining_polynomial = f;
    d.assume_power_basis_maximal = true;
    return parse_field(d);
}

const ZPoly kSqrt2 = {-2, 0, 1};
const ZPoly kPlastic = {-1, -1, 0, 1};

PolicySpec padded() {
    PolicySpec s;
    s.kind = "padded";
    return s;
}

PolicySpec paper() {
    PolicySpec s;
    s.kind = "paper";
    return s;
}

FieldElement elem(const NumberField& K, std::vector<long> v) {
    QVec c(K.n);
    for (size_t i = 0; i < v.size(); ++i) c[i] = v[i];
    return FieldElement(std::move(c));
}

ZVec dense_of(std::vector<long> v) {
    ZVec out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = v[i];
    return out;
}

}  // namespace

TEST_SUITE("model_builder") {
    TEST_CASE("choose_parameters: paper policy reproduces r(n)") {
        ModelParams p100 = choose_parameters(100, paper());
        CHECK(p100.r == 6);
        CHECK(p100.d == 6);
        CHECK(p100.C == 924);
        CHECK(p100.growth_inequalities_hold);

        ModelParams p1000 = choose_parameters(1000, paper());
        CHECK(p1000.r == 8);
        CHECK(p1000.d == 8);
        CHECK(p1000.C == 12870);
        CHECK(p1000.growth_inequalities_hold);
    }

    TEST_CASE("choose_parameters: padded and explicit") {
        ModelParams p2 = choose_parameters(2, padded());
        CHECK(p2.r == 1);
        CHECK(p2.d == 5);
        CHECK(p2.C == 6);
        CHECK(p2.ell == 4);
        CHECK(p2.keep == 3);

        PolicySpec ex;
        ex.kind = "explicit";
        ex.r = 3;
        ex.d = 5;
        ModelParams p8 = choose_parameters(8, ex);
        CHECK(p8.C == 56);
        CHECK(p8.keep == 41);

        PolicySpec bad = ex;
        bad.r = 1;  // 8*2 = 16 > binom(6,1) = 6
        CHECK_THROWS_AS(choose_parameters(8, bad), input_error);
        PolicySpec small;
        small.kind = "explicit";
        small.r = 2;
        small.d = 2;  // d < 5 without the override
        CHECK_THROWS_AS(choose_parameters(30, small), input_error);
        small.allow_small_d = true;
        CHECK_THROWS_AS(choose_parameters(30, small), input_error);  // 90 > binom(4,2)
        CHECK_THROWS_AS(choose_parameters(1, padded()), input_error);
    }

    TEST_CASE("monomials: graded order") {
        auto m1 = monomials(1, 5);
        REQUIRE(m1.size() == 6);
        for (unsigned i = 0; i < 6; ++i) CHECK(m1[i][0] == i);
        auto m2 = monomials(2, 2);
        std::vector<std::vector<unsigned>> expected = {{0, 0}, {0, 1}, {1, 0},
                                                       {0, 2}, {1, 1}, {2, 0}};
        CHECK(m2 == expected);
    }

    TEST_CASE("evaluation_matrix: powers of sqrt 2 and theta^3") {
        NumberField K = power_basis_field(kSqrt2);
        auto monos = monomials(1, 5);
        std::vector<FieldElement> kap = {elem(K, {0, 1})};
        ZMat ev = evaluation_matrix(K, kap, monos, 5);
        long expected[2][6] = {{1, 0, 2, 0, 4, 0}, {0, 1, 0, 2, 0, 4}};
        for (size_t i = 0; i < 2; ++i)
            for (size_t j = 0; j < 6; ++j) CHECK(ev(i, j) == expected[i][j]);

        NumberField K3 = power_basis_field(kPlastic);
        std::vector<FieldElement> kt = {elem(K3, {0, 1, 0})};
        ZMat ev3 = evaluation_matrix(K3, kt, monos, 5);
        CHECK(ev3(0, 3) == 1);  // theta^3 = 1 + theta
        CHECK(ev3(1, 3) == 1);
        CHECK(ev3(2, 3) == 0);
        CHECK(ev3(0, 0) == 1);  // monomial 1 -> e1
        CHECK(ev3(1, 0) == 0);
    }

    TEST_CASE("well_poised_check: distinct vs coincident points") {
        NumberField K = power_basis_field(kSqrt2);
        auto monos = monomials(1, 5);
        auto [ok, rank] = well_poised_check(K, {elem(K, {0, 1})}, monos, 5);
        CHECK(ok);
        CHECK(rank == 4);
        auto [bad, rank1] = well_poised_check(K, {K.one()}, monos, 5);
        CHECK_FALSE(bad);
        CHECK(rank1 < 4);

        NumberField K3 = power_basis_field(kPlastic);
        auto monos3 = monomials(1, 5);
        auto [ok3, rank3] = well_poised_check(K3, {elem(K3, {0, 1, 0})}, monos3, 5);
        CHECK(ok3);
        CHECK(rank3 == 6);
    }

    TEST_CASE("well_poised rank equals Hermite stacked matrix rank (oracle)") {
        // independent 4x6 check for Q(sqrt 2), kappa = sqrt 2: rows are
        // values and derivatives of x^j at the two square roots, cleared to
        // the coordinate form used by the library
        NumberField K = power_basis_field(kSqrt2);
        auto monos = monomials(1, 5);
        ZMat m = first_order_matrix(K, {elem(K, {0, 1})}, monos, 5);
        CHECK(m.rows() == 4);
        CHECK(m.cols() == 6);
        CHECK(exact_rank(m) == 4);
    }

    TEST_CASE("search_u: lex order visits (0,0), (1,0), then (0,1) for Q(sqrt 2)") {
        NumberField K = power_basis_field(kSqrt2);
        auto [set, roots] = balanced_set_auto(K, 128);
        ModelParams params = choose_parameters(2, padded());
        auto monos = monomials(params);
        SearchTrace trace;
        ZMat u = search_u(K, set, params, monos, "lex", 0, 1000, &trace);
        CHECK(u(0, 0) == 0);
        CHECK(u(1, 0) == 1);
        CHECK(trace.tried == 3);
        REQUIRE(trace.rejected.size() == 2);
        CHECK(trace.rejected[0](0, 0) == 0);
        CHECK(trace.rejected[0](1, 0) == 0);
        CHECK(trace.rejected[1](0, 0) == 1);
        CHECK(trace.rejected[1](1, 0) == 0);

        CHECK_THROWS_AS(search_u(K, set, params, monos, "lex", 0, 0, nullptr),
                        search_exhausted);
    }

    TEST_CASE("relation_basis: shortest relations") {
        NumberField K = power_basis_field(kSqrt2);
        ModelParams params = choose_parameters(2, padded());
        auto monos = monomials(params);
        ZMat ev = evaluation_matrix(K, {elem(K, {0, 1})}, monos, 5);
        RelationBasis rel = relation_basis(ev, params);
        CHECK(rel.lattice.basis->rows() == 4);
        // shortest vector: x^2 - 2, norm^2 5, then its shifts
        CHECK(rel.shortened.row(0) == dense_of({-2, 0, 1, 0, 0, 0}));
        CHECK(rel.shortened.row(1) == dense_of({0, -2, 0, 1, 0, 0}));
        CHECK(rel.shortened.row(2) == dense_of({0, 0, -2, 0, 1, 0}));
        // every row is an exact relation
        for (size_t i = 0; i < rel.shortened.rows(); ++i)
            for (size_t r = 0; r < ev.rows(); ++r) {
                mpz_class dot = 0;
                for (size_t c = 0; c < ev.cols(); ++c) dot += ev(r, c) * rel.shortened(i, c);
                CHECK(dot == 0);
            }

        // the complement of the dim-4 kernel in Z^6 has dim 2 and equal volume
        IntLattice comp = orthogonal_complement(rel.lattice);
        CHECK(comp.basis->rows() == 2);
        CHECK(gram_det(comp) == gram_det(rel.lattice));

        NumberField K3 = power_basis_field(kPlastic);
        ModelParams p3 = choose_parameters(3, padded());
        ZMat ev3 = evaluation_matrix(K3, {elem(K3, {0, 1, 0})}, monomials(p3), 5);
        RelationBasis rel3 = relation_basis(ev3, p3);
        CHECK(rel3.lattice.basis->rows() == 3);
        CHECK(rel3.shortened.row(0) == dense_of({-1, -1, 0, 1, 0, 0}));  // x^3 - x - 1

        // rank-deficient evaluation matrix: kappa = 1
        ZMat evbad = evaluation_matrix(K, {K.one()}, monos, 5);
        CHECK_THROWS_AS(relation_basis(evbad, params), integrity_error);
    }

    TEST_CASE("select_equations: first-pivot selection") {
        NumberField K = power_basis_field(kSqrt2);
        ModelParams params = choose_parameters(2, padded());
        auto monos = monomials(params);
        std::vector<FieldElement> kap = {elem(K, {0, 1})};
        ZMat ev = evaluation_matrix(K, kap, monos, 5);
        RelationBasis rel = relation_basis(ev, params);
        EquationSelection sel = select_equations(rel.shortened, kap, monos, K, params);
        REQUIRE(sel.jacobian_full_rank);
        REQUIRE(sel.equations.size() == 1);
        CHECK(sel.equations[0] == dense_of({-2, 0, 1, 0, 0, 0}));
        CHECK(sel.relation_indices == std::vector<size_t>{0});

        NumberField K3 = power_basis_field(kPlastic);
        ModelParams p3 = choose_parameters(3, padded());
        auto monos3 = monomials(p3);
        std::vector<FieldElement> k3 = {elem(K3, {0, 1, 0})};
        RelationBasis rel3 = relation_basis(evaluation_matrix(K3, k3, monos3, 5), p3);
        CHECK(p3.keep == 1);
        EquationSelection sel3 = select_equations(rel3.shortened, k3, monos3, K3, p3);
        REQUIRE(sel3.jacobian_full_rank);
        CHECK(sel3.equations[0] == dense_of({-1, -1, 0, 1, 0, 0}));

        ModelParams broken = p3;
        broken.keep = 0;
        CHECK_THROWS_AS(select_equations(rel3.shortened, k3, monos3, K3, broken), input_error);
    }

    TEST_CASE("height_bound: exact reproduction for n=2, r=1, d=5, disc 8") {
        ModelParams p = choose_parameters(2, padded());
        HeightBound hb = height_bound(p, mpz_class(8));
        mpz_class expected_frakD = 6 * pow_z(40, 10) * pow_z(8, 10);
        CHECK(hb.frakD == mpq_class(expected_frakD));
        CHECK(hb.frakD_exact);
        mpz_class expected_Bsq = 16 * expected_frakD;
        CHECK(hb.B_sq == mpq_class(expected_Bsq));
        CHECK(hb.B_sq_exact);
        CHECK(hb.B_upper * hb.B_upper >= hb.B_sq);
        CHECK(std::abs(hb.B_upper.get_d() / 3.2889e13 - 1.0) < 1e-3);

        // unit discriminant: the disc factor degenerates to 1
        HeightBound hb1 = height_bound(p, mpz_class(1));
        CHECK(hb1.frakD == mpq_class(6 * pow_z(40, 10)));
        CHECK(hb1.B_sq == mpq_class(16 * 6 * pow_z(40, 10)));

        // achieved coefficient 2 against the discriminant-based B
        mpq_class ratio = mpq_class(2) / hb.B_upper;
        CHECK(ratio < parse_rational("1e-12"));
    }

    TEST_CASE("end-to-end Q(sqrt 2): accepted model with equation x^2 - 2") {
        NumberField K = power_basis_field(kSqrt2);
        ModelParams params = choose_parameters(2, padded());
        BuildOptions opt;
        SmallModel model = build_model(K, params, opt);
        CHECK(model.report.accepted);
        CHECK(model.u_rejections == 2);
        REQUIRE(model.equations.size() == 1);
        CHECK(model.equations[0] == dense_of({-2, 0, 1, 0, 0, 0}));
        CHECK(model.report.max_abs_coeff == 2);
        CHECK(model.report.vol_identity_ok);
        CHECK(model.report.vol_bound_ok);
        CHECK(model.report.coeff_bound_ok);
        CHECK(model.report.eval_rank == 2);
        CHECK(model.report.residue_rank == 2);
        // vol(L)^2 for the kernel of the running example is 441
        CHECK(model.report.vol_relation_sq == 441);
    }

    TEST_CASE("end-to-end x^3-x-1 with kappa = theta") {
        NumberField K = power_basis_field(kPlastic);
        ModelParams params = choose_parameters(3, padded());
        auto [set, roots] = balanced_set_auto(K, 128);
        // pick u selecting theta out of the balanced set
        size_t theta_idx = K.n;
        for (size_t i = 0; i < set.elems.size(); ++i)
            if (set.elems[i] == elem(K, {0, 1, 0})) theta_idx = i;
        REQUIRE(theta_idx < K.n);
        ZMat u(K.n, 1);
        u(theta_idx, 0) = 1;
        BuildOptions opt;
        SmallModel model = build_model_with_u(K, params, set, u, opt);
        CHECK(model.report.accepted);
        REQUIRE(model.equations.size() == 1);
        CHECK(model.equations[0] == dense_of({-1, -1, 0, 1, 0, 0}));
        // Jacobian = 3 theta^2 - 1 != 0
        CHECK(model.report.jacobian_nonzero);
    }

    TEST_CASE("verify_model: tampering is rejected") {
        NumberField K = power_basis_field(kSqrt2);
        ModelParams params = choose_parameters(2, padded());
        SmallModel model = build_model(K, params, BuildOptions{});
        REQUIRE(model.report.accepted);

        SmallModel tampered = model;
        tampered.equations[0][0] = -1;  // x^2 - 1
        VerificationReport rep = verify_model(tampered, K);
        CHECK_FALSE(rep.vanishing);
        CHECK_FALSE(rep.accepted);

        // degree above d is rejected at parse
        json j = model_to_json(model);
        j["equations"][0][0]["exponents"][0] = 6;
        CHECK_THROWS_AS(model_from_json(j, K), input_error);
    }

    TEST_CASE("model JSON round trip preserves verification") {
        NumberField K = power_basis_field(kPlastic);
        ModelParams params = choose_parameters(3, padded());
        SmallModel model = build_model(K, params, BuildOptions{});
        json j = model_to_json(model);
        SmallModel back = model_from_json(j, K);
        VerificationReport rep = verify_model(back, K);
        CHECK(rep.accepted);
        CHECK(model_to_json(back).at("equations") == j.at("equations"));
    }

    TEST_CASE("determinism: identical options give identical JSON") {
        NumberField K = power_basis_field(kPlastic);
        ModelParams params = choose_parameters(3, padded());
        SmallModel a = build_model(K, params, BuildOptions{});
        SmallModel b = build_model(K, params, BuildOptions{});
        CHECK(model_to_json(a).dump(2) == model_to_json(b).dump(2));
    }

    TEST_CASE("round trip on a few corpus fields") {
        auto polys = corpus::random_fields(6, 31337);
        for (const auto& f : polys) {
            NumberField K = corpus::field_of(f);
            ModelParams params = choose_parameters(K.n, padded());
            SmallModel model = build_model(K, params, BuildOptions{});
            CHECK(model.report.accepted);
            CHECK(model.report.vol_identity_ok);
            CHECK(model.report.vol_bound_ok);
            CHECK(model.report.coeff_bound_ok);
            // rank(eval) + dim L = C (the kernel dimension is checked to be
            // ell inside relation_basis)
            CHECK(mpz_class(model.report.eval_rank) + params.ell == params.C);
        }
    }
}
