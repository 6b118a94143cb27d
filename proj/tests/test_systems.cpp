#include <catch_amalgamated.hpp>

#include <random>

#include "dagas/systems/checks.hpp"
#include "dagas/systems/newton.hpp"

using namespace dagas;
using C = ComplexFloat;

namespace {

Rational R(const char* s) { return parse_rational(s); }
Gaussian G(const char* s) { return Gaussian(parse_rational(s)); }

template <class S>
double catalog_residual(const FactorSolution<S>& f, SystemOptions opt = {}) {
    return f.system(opt).residual(f.assignment()).max_abs;
}

ZigzagSolution<C> zigzag_from(const Assignment& a, GasKind gas, std::vector<C> params) {
    ZigzagSolution<C> z;
    z.gas = gas;
    z.params = std::move(params);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            auto s = std::to_string(i) + std::to_string(j);
            z.D.push_back(Matrix<C>{{a.at("d" + s)}});
            z.U.push_back(Matrix<C>{{a.at("u" + s)}});
        }
    z.w01 = a.at("w01");
    z.w10 = a.at("w10");
    return z;
}

} // namespace

TEST_CASE("polynomial ring", "[systems]") {
    using P = Poly<Rational>;
    P x = P::variable(0), y = P::variable(1);
    P f = x * x * y - P(R("3/2")) * y + P(1);
    REQUIRE(f.degree() == 3);
    REQUIRE(f.variables() == std::vector<int>{0, 1});
    std::vector<Rational> v{R("2"), R("1/3")};
    REQUIRE(f.evaluate([&](int i) -> const Rational& { return v[static_cast<std::size_t>(i)]; }) == R("11/6"));
    REQUIRE(f.derivative(0) == P(2) * x * y);
    REQUIRE(f.derivative(1) == x * x - P(R("3/2")));
    REQUIRE((f - f).is_zero());
    REQUIRE((x + y) * (x - y) == x * x - y * y);

    Matrix<P> m{{x, y}, {P(1), x}};
    REQUIRE(poly_determinant(m) == x * x - y);
    REQUIRE(f.to_string({"x", "y"}).find("x^2*y") != std::string::npos);
}

TEST_CASE("system builders", "[systems]") {
    auto sx = build_system<Rational>(SystemKind::factor_X, {R("1/4")}, {.size = 2});
    REQUIRE(sx.names.size() == 8);
    REQUIRE(sx.equations.size() == 6);
    for (auto& e : sx.equations) REQUIRE(e.degree() == 2);

    SystemOptions printed;
    printed.size = 2;
    printed.printed_y = true;
    REQUIRE(build_system<Rational>(SystemKind::factor_Y, {R("1/4"), R("1/2")}, printed).equations.size() == 7);
    REQUIRE(build_system<Rational>(SystemKind::factor_Y, {R("1/4"), R("1/2")}, {.size = 2}).equations.size() == 6);
    REQUIRE(build_system<Rational>(SystemKind::factor_bicolour, {R("1/4"), R("1/9")}, {.size = 3}).equations.size() == 18);
    REQUIRE(build_system<Rational>(SystemKind::tri_factor, {R("1/4")}, {.size = 4}).equations.size() == 32);

    SystemOptions opt;
    opt.size = 2;
    opt.c1_one = true;
    opt.d1_one = true;
    REQUIRE(build_system<Rational>(SystemKind::factor_X, {R("1/4")}, opt).equations.size() == 8);
    opt.corner_y = true;
    REQUIRE_THROWS_AS(build_system<Rational>(SystemKind::factor_X, {R("1/4")}, opt), DomainError);

    SystemOptions zz;
    zz.cnt = true;
    auto z = build_system<Rational>(SystemKind::zigzag_scalar, {R("1/4")}, zz);
    REQUIRE(z.names.size() == 10);
    REQUIRE(z.equations.size() == 8 + 4 + 1 + 1);

    REQUIRE_THROWS_AS(parse_system_kind("factor-Z"), DomainError);
    REQUIRE(parse_system_kind("tri-split") == SystemKind::tri_split);
    opt = {};
    opt.size = 0;
    REQUIRE_THROWS_AS(build_system<Rational>(SystemKind::finite_split, {R("1/4")}, opt), DimensionError);
}

TEST_CASE("finite split at size one has only trivial solutions", "[systems]") {
    SystemOptions opt;
    opt.size = 1;
    auto sys = build_system<Rational>(SystemKind::finite_split, {R("1/4")}, opt);
    std::map<std::string, Rational> zero;
    for (auto& n : sys.names) zero[n] = 0;
    REQUIRE(sys.residual(zero).exact_zero());

    // V0 H1 = V1 H0 = 0 forces a zero factor in each product; the main equations then kill the rest.
    opt.trace_one = true;
    auto normalized = build_system<C>(SystemKind::finite_split, {C(0.25)}, opt);
    NewtonOptions nopt;
    nopt.starts = 100;
    auto res = newton_search(normalized, nopt);
    REQUIRE(res.solutions.empty());
    REQUIRE(res.verdict() == "no solution found (evidence)");
    REQUIRE(res.best_residual > 1e-3);
}

TEST_CASE("residual evaluation", "[systems]") {
    auto sx = build_system<Rational>(SystemKind::factor_X, {R("1/4")}, {.size = 2});
    std::map<std::string, Rational> partial{{"a1", 0}};
    REQUIRE_THROWS_AS(sx.residual(partial), DomainError);

    // c1 = 1 solution at p = 1/4 in float mode
    auto f = catalog::factor_X_c1<C>(C(0.25));
    REQUIRE(std::abs(f.entry(0, 1)[1] * f.entry(0, 1)[1] - C(-0.75)) < 1e-14);
    REQUIRE(catalog_residual(f) <= 1e-12);

    // size-6 solution in Gaussian rationals: a1 = i/2, c2 = 1/2
    auto g = catalog::factor_X_size6<Gaussian>(G("1/4"));
    REQUIRE(g.entry(0, 0)[0] == Gaussian(R("0"), R("1/2")));
    REQUIRE(g.entry(0, 1)[1] == G("1/2"));
    auto sys = g.system();
    auto a = g.assignment();
    auto r = sys.residual(a);
    REQUIRE(r.exact_zero());
    REQUIRE(r.values.size() == sys.equations.size());

    a["a3"] += G("1/10");
    auto bad = sys.residual(a);
    REQUIRE_FALSE(bad.exact_zero());
    REQUIRE(bad.max_abs > 0.05);
}

TEST_CASE("factor catalog", "[systems]") {
    SECTION("exact points") {
        REQUIRE(catalog_residual(catalog::factor_X_reduced<Gaussian>(G("1/4"))) == 0);
        REQUIRE(catalog_residual(catalog::factor_X_reduced<Gaussian>(G("4/9"), -1)) == 0);
        // p = s^2 and 1 - p both squares: s = 2t/(1+t^2), t = 1/2
        REQUIRE(catalog_residual(catalog::factor_X_c1<Gaussian>(G("16/25"))) == 0);
        REQUIRE(catalog_residual(catalog::factor_X_size6<Gaussian>(G("9/25"))) == 0);
        auto y6 = catalog::factor_Y_size6<Gaussian>(G("1/9"), G("7/9"));
        REQUIRE(y6.defect() == 0);
        REQUIRE(y6.entry(1, 0)[2] == G("4/9"));
        REQUIRE(y6.entry(0, 0)[0] == Gaussian(R("0"), R("5/12")));
        SystemOptions printed;
        printed.printed_y = true;
        REQUIRE(y6.system(printed).residual(y6.assignment()).exact_zero());
        REQUIRE(catalog_residual(catalog::factor_B<Gaussian>(G("1/4"), G("1/2"))) == 0);
        REQUIRE(catalog_residual(catalog::factor_bicolour<Gaussian>(G("1/4"), G("1/9"))) == 0);
    }

    SECTION("unrepresentable radicands") {
        REQUIRE_THROWS_AS(catalog::factor_X_reduced<Gaussian>(G("1/3")), DomainError);
        REQUIRE_THROWS_AS(catalog::factor_Y_size6<Gaussian>(G("1/5"), G("1/3")), DomainError);
    }

    SECTION("float entries at random parameter points") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> U(0.05, 0.9);
        SystemOptions corner;
        corner.corner_y = true;
        SystemOptions d1;
        d1.d1_one = true;
        for (int trial = 0; trial < 20; ++trial) {
            C p(U(rng)), q(U(rng)), p2(U(rng) / 3);
            CHECK(catalog_residual(catalog::factor_X_reduced<C>(p)) <= 1e-10);
            CHECK(catalog_residual(catalog::factor_X_c1<C>(p)) <= 1e-10);
            CHECK(catalog_residual(catalog::factor_X_size6<C>(p)) <= 1e-10);
            CHECK(catalog_residual(catalog::factor_Y_size6<C>(p, q)) <= 1e-10);
            for (int sign : {1, -1}) {
                CHECK(catalog_residual(catalog::factor_Y_d1<C>(p, q, sign), d1) <= 1e-10);
                CHECK(catalog_residual(catalog::factor_Y_corner<C>(p, q, sign), corner) <= 1e-10);
            }
            CHECK(catalog_residual(catalog::factor_B<C>(p, q)) <= 1e-10);
            CHECK(catalog::factor_bicolour<C>(C(p.real() / 3), p2).defect() <= 1e-10);
        }
        REQUIRE(catalog_residual(catalog::factor_Y_size6<C>(C(0.2), C(0.3))) <= 1e-12);
    }

    SECTION("products reproduce the transition table") {
        auto f = catalog::factor_B<C>(C(0.05), C(0.5));
        auto T = local_transition<C>(GasKind::B, {C(0.05), C(0.5)});
        for (int y = 0; y < 2; ++y)
            for (int y2 = 0; y2 < 2; ++y2)
                for (int x = 0; x < 2; ++x) {
                    REQUIRE(f.h(y, x).cols() == 4);
                    C v = Matrix<C>(f.h(y, x) * f.v(y2, x))(0, 0);
                    REQUIRE(std::abs(v - T({y, y2}, x)) < 1e-14);
                    C cross = Matrix<C>(f.h(y, x) * f.v(y2, 1 - x))(0, 0);
                    REQUIRE(cross == C(0));
                }
    }

    SECTION("json round trip") {
        auto f = catalog::factor_Y_size6<Gaussian>(G("1/9"), G("7/9"));
        auto j = f.to_json();
        auto back = FactorSolution<Gaussian>::from_json(j);
        REQUIRE(back.to_json() == j);
        REQUIRE(back.defect() == 0);
        auto bad = j;
        bad["k"] = 2;
        REQUIRE_THROWS_AS(FactorSolution<Gaussian>::from_json(bad), DimensionError);
    }
}

TEST_CASE("split catalog", "[systems]") {
    auto s = catalog::split_X<Rational>(R("1/4"));
    REQUIRE(s.Q()[0] == Matrix<Rational>{{R("1/4"), R("3/16")}, {R("1"), R("3/4")}});
    REQUIRE(s.Q()[1] == Matrix<Rational>{{R("0"), R("0")}, {R("0"), R("1/4")}});
    REQUIRE(s.cross_defect() == 0);

    SystemOptions opt;
    opt.size = 2;
    auto sys = build_system<Rational>(SystemKind::finite_split, {R("1/4")}, opt);
    REQUIRE(sys.residual(split_assignment(s)).exact_zero());

    // scaling V -> tV, H -> H/t leaves every Q^x unchanged
    for (const char* p : {"1/4", "1/9", "2/7"}) {
        auto a = catalog::split_X<Rational>(R(p)), b = catalog::split_X<Rational>(R(p), R("5/3"));
        REQUIRE(a.Q() == b.Q());
        REQUIRE(sys.kind == SystemKind::finite_split);
        auto sp = build_system<Rational>(SystemKind::finite_split, {R(p)}, opt);
        REQUIRE(sp.residual(split_assignment(b)).exact_zero());
        REQUIRE(split_measure_check(b, 4).matches_invariant);
    }

    auto j = split_to_json(s);
    REQUIRE(split_to_json(split_from_json<Rational>(j)) == j);
    auto broken = j;
    broken["H"][1] = to_json_value(Matrix<Rational>{{R("0"), R("0")}, {R("1"), R("0")}});
    REQUIRE_THROWS_AS(split_from_json<Rational>(broken), DomainError);

    // conjugated form with P = I reduces to the plain system
    REQUIRE(finite2_residual(s, Matrix<Rational>::identity(2)) == 0);
    REQUIRE(finite2_residual(s, Matrix<Rational>{{R("1"), R("1")}, {R("0"), R("1")}}) > 0);
}

TEST_CASE("eigenvalue-one check", "[systems]") {
    auto s = catalog::split_X<Rational>(R("1/4"));
    auto r = cnt_check(s.Qstar());
    REQUIRE(r.det == "-3/16");
    REQUIRE_FALSE(r.eigenvalue_one);
    REQUIRE(r.note.find("rescaling") != std::string::npos);
    REQUIRE(r.eigenvalues.size() == 2);

    REQUIRE(cnt_check(Matrix<Rational>{{R("1"), R("0")}, {R("0"), R("0")}}).eigenvalue_one);
    auto f = cnt_check(Matrix<C>{{C(0.5), C(0.5)}, {C(0.25), C(0.75)}});
    REQUIRE(f.eigenvalue_one);
    REQUIRE(f.min_distance < 1e-12);
    REQUIRE_THROWS_AS(cnt_check(Matrix<Rational>(2, 3)), DimensionError);
}

TEST_CASE("triangular zigzag split", "[systems]") {
    auto local = [](const Gaussian& p) { return local_transition<Gaussian>(GasKind::X, {p}, 3); };

    auto t = catalog::triangular_X<Gaussian>(G("1/4"));
    REQUIRE(t.d(0, 0) == Matrix<Gaussian>{{G("1"), G("-1")}, {G("1"), G("-1")}});
    auto rep = zigzag_check(t, local(G("1/4")), 2);
    REQUIRE(rep.equations_exact);
    REQUIRE(rep.stationary);
    REQUIRE_FALSE(rep.nonzero);  // the double root r = -1 makes every zigzag weight vanish

    for (int sign : {1, -1}) {
        auto sol = catalog::triangular_X<Gaussian>(G("3/16"), sign);
        Gaussian r = sol.d(0, 0)(0, 1);
        REQUIRE((r == G("-1/3") || r == G("-3")));
        for (int n = 1; n <= 4; ++n) {
            auto z = zigzag_check(sol, local(G("3/16")), n);
            CHECK(z.equations_exact);
            CHECK(z.stationary);
            CHECK(z.nonzero);
        }
        // normalized zigzag measure is the invariant measure of the zigzag transfer
        auto w = zigzag_measure(sol, 3).normalize();
        auto inv = stationary_vector(zigzag_transfer(local(G("3/16")), 3));
        REQUIRE(Matrix<Gaussian>(w.as_row()) == inv.vector);
    }

    auto j = t.to_json();
    REQUIRE(ZigzagSolution<Gaussian>::from_json(j).to_json() == j);
    REQUIRE_THROWS_AS(zigzag_check(t, local_transition<Gaussian>(GasKind::X, {G("1/4")}), 2), DomainError);

    // the same matrices solve the system given as single-row / single-column factors
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.02, 0.24);
    for (int trial = 0; trial < 20; ++trial) {
        C p(U(rng));
        for (int sign : {1, -1}) {
            auto f = catalog::triangular_X<C>(p, sign);
            CHECK(f.system().residual(f.assignment()).max_abs <= 1e-10);
        }
    }
}

TEST_CASE("square zigzag split", "[systems]") {
    SystemOptions opt;
    opt.gas = GasKind::X;
    auto plain = build_system<C>(SystemKind::zigzag_scalar, {C(0.3)}, opt);

    // the all-zero candidate satisfies the equations and is flagged trivial
    ZigzagSolution<C> zero;
    zero.gas = GasKind::X;
    zero.params = {C(0.3)};
    zero.D.assign(4, Matrix<C>(1, 1));
    zero.U.assign(4, Matrix<C>(1, 1));
    auto zr = zigzag_check(zero, local_transition<C>(GasKind::X, {C(0.3)}), 2);
    REQUIRE(zr.equations_residual == 0);
    REQUIRE_FALSE(zr.nonzero);
    REQUIRE_FALSE(zr.cnt.eigenvalue_one);

    opt.cnt = true;
    auto sys = build_system<C>(SystemKind::zigzag_scalar, {C(0.3)}, opt);
    NewtonOptions nopt;
    nopt.starts = 40;
    auto res = newton_search(sys, nopt);
    REQUIRE_FALSE(res.solutions.empty());
    for (std::size_t i = 0; i < res.solutions.size(); ++i) {
        REQUIRE(sys.residual(res.assignment(i)).max_abs <= nopt.tol);
        REQUIRE(plain.residual(res.assignment(i)).max_abs <= nopt.tol);
    }
    auto z = zigzag_from(res.assignment(0), GasKind::X, {C(0.3)});
    REQUIRE(std::abs(z.w01 * z.w10 - C(1)) <= 1e-9);
    for (int n = 1; n <= 5; ++n) {
        auto r = zigzag_check(z, local_transition<C>(GasKind::X, {C(0.3)}), n);
        CHECK(r.nonzero);
        CHECK(r.cnt.eigenvalue_one);
        CHECK(r.stationarity_residual <= 1e-9);
    }

    // block-scaled copies solve the matrix form; P m = w m~ P at P = 1 is the
    // scalar form with w01 and w10 exchanged
    ZigzagSolution<C> mz = z;
    mz.matrix = true;
    std::swap(mz.w01, mz.w10);
    for (auto& m : mz.D) m = Matrix<C>(kron(m, Matrix<C>::identity(2)));
    for (auto& m : mz.U) m = Matrix<C>(kron(m, Matrix<C>::identity(2)));
    mz.P = Matrix<C>::identity(2);
    REQUIRE(mz.system().residual(mz.assignment()).max_abs <= 1e-9);
    auto mr = zigzag_check(mz, local_transition<C>(GasKind::X, {C(0.3)}), 3);
    REQUIRE(mr.stationarity_residual <= 1e-9);
    mz.P = Matrix<C>{{C(1), C(1)}, {C(0), C(1)}};
    REQUIRE(mz.system().residual(mz.assignment()).max_abs <= 1e-9);  // P commutes with scalar blocks
}

TEST_CASE("newton search", "[systems]") {
    NewtonOptions opt;
    opt.starts = 200;

    auto sx = build_system<C>(SystemKind::factor_X, {C(0.3)}, {.size = 2});
    auto rx = newton_search(sx, opt);
    REQUIRE_FALSE(rx.solutions.empty());
    bool reduced = false;
    for (std::size_t i = 0; i < rx.solutions.size(); ++i) {
        auto a = rx.assignment(i);
        REQUIRE(sx.residual(a).max_abs <= opt.tol);
        if (std::abs(a["d1"]) < 1e-6 && std::abs(a["d2"]) < 1e-6) reduced = true;
    }
    REQUIRE(reduced);

    auto sy = build_system<C>(SystemKind::factor_Y, {C(0.3), C(0.4)}, {.size = 2});
    auto ry = newton_search(sy, opt);
    REQUIRE_FALSE(ry.solutions.empty());
    for (std::size_t i = 0; i < ry.solutions.size(); ++i) REQUIRE(sy.residual(ry.assignment(i)).max_abs <= opt.tol);

    SECTION("deterministic given the seed") {
        NewtonOptions small;
        small.starts = 10;
        auto a = newton_search(sy, small), b = newton_search(sy, small);
        REQUIRE(a.solutions == b.solutions);
        small.seed = 2;
        auto c = newton_search(sy, small);
        REQUIRE(c.solutions != a.solutions);
    }

    SECTION("gas Y finite split evidence") {
        SystemOptions f;
        f.gas = GasKind::Y;
        f.size = 2;
        f.trace_one = true;
        NewtonOptions few;
        few.starts = 30;
        auto r = newton_search(build_system<C>(SystemKind::finite_split, {C(0.3), C(0.4)}, f), few);
        INFO("best residual " << r.best_residual << ": " << r.verdict());
        for (std::size_t i = 0; i < r.solutions.size(); ++i) CHECK(r.residuals[i] <= few.tol);
        REQUIRE(r.to_json().at("starts") == 30);
    }
}
