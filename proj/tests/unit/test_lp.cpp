#include <doctest.h>

#include "helpers.hpp"
#include "leadcache/exact.hpp"
#include "leadcache/lp.hpp"

using namespace leadcache;

namespace {

struct Fixed {
    int n, m, C;
    std::vector<BipartiteNetwork::Edge> edges;
    std::vector<Coefficient> theta;
    double optimum;  // tests/oracles/lp_oracle.py
};

std::vector<Fixed> fixed_instances()
{
    std::vector<BipartiteNetwork::Edge> complete;
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 3; ++i)
            complete.emplace_back(j, i);
    return {
        {2, 2, 1, {{0, 0}, {0, 1}, {1, 1}}, {{0, 0, 3.0}, {0, 1, 1.0}, {1, 1, 2.0}, {1, 2, 2.5}}, 5.5},
        {3, 2, 2, complete,
         {{0, 0, 4.0}, {0, 1, 1.5}, {0, 4, 1.0}, {1, 1, 3.0}, {1, 2, 2.0}, {2, 3, 2.5}, {2, 4, 0.5}},
         13.0},
        {4, 3, 1, {{0, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 2}, {2, 3}},
         {{0, 0, 1.0}, {1, 0, 0.8}, {1, 1, 0.7}, {2, 1, 0.9}, {2, 2, 0.6}, {3, 2, 1.1}, {3, 0, 0.3}},
         5.1},
    };
}

void check_optimal_z(const FractionalAllocation& frac, const LpInstance& inst, double tol)
{
    for (const auto& zc : frac.z) {
        double cover = 0.0;
        for (CacheId j : inst.user_caches[zc.user])
            cover += frac.y_of(j, zc.file);
        const auto it = std::find_if(inst.pairs.begin(), inst.pairs.end(), [&](const auto& p) {
            return p.user == zc.user && inst.files[p.file_index] == zc.file;
        });
        REQUIRE(it != inst.pairs.end());
        if (it->coef > 0)
            CHECK(zc.value == doctest::Approx(std::min(1.0, cover)).epsilon(tol));
    }
}

}  // namespace

TEST_CASE("lp: two files on one cache")
{
    const BipartiteNetwork net(1, 1, std::vector<BipartiteNetwork::Edge>{{0, 0}});
    std::vector<Coefficient> theta{{0, 0, 2.0}, {0, 1, 1.0}};
    const auto inst = build_lp(theta, net, 1);
    CHECK(inst.files == std::vector<FileId>{0, 1});
    CHECK(inst.num_structural_variables() == 1 * 3 + 2);
    const auto frac = solve_lp(inst);
    CHECK(frac.objective == doctest::Approx(2.0));
    CHECK(frac.y_of(0, 0) == doctest::Approx(1.0));
    CHECK(frac.y_of(0, 1) == doctest::Approx(0.0));
    CHECK(frac.slack[0] == doctest::Approx(0.0));
}

TEST_CASE("lp: empty instance")
{
    const BipartiteNetwork net(2, 2, std::vector<BipartiteNetwork::Edge>{{0, 0}, {1, 1}});
    const auto frac = solve_lp(build_lp({}, net, 3));
    CHECK(frac.objective == 0.0);
    CHECK(frac.files.empty());
    CHECK(frac.slack == std::vector<double>{3.0, 3.0});
}

TEST_CASE("lp: reference optima")
{
    for (const auto& f : fixed_instances()) {
        const BipartiteNetwork net(f.n, f.m, f.edges);
        const auto inst = build_lp(f.theta, net, f.C);
        const auto frac = solve_lp(inst);
        CHECK(frac.objective == doctest::Approx(f.optimum).epsilon(1e-9));
        CHECK(max_violation(frac, inst) <= 1e-6);
        check_optimal_z(frac, inst, 1e-6);
    }
}

TEST_CASE("lp: rejects negative coefficients")
{
    const BipartiteNetwork net(1, 1, std::vector<BipartiteNetwork::Edge>{{0, 0}});
    std::vector<Coefficient> theta{{0, 0, -1.0}};
    CHECK_THROWS_AS(build_lp(theta, net, 1), InvalidArgument);
}

TEST_CASE("lp: relaxation dominates the integral optimum")
{
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 120; ++trial) {
        const int n = 1 + rng() % 4, m = 1 + rng() % 3, N = 2 + rng() % 5, C = 1 + rng() % 2;
        const auto net = testutil::random_network(n, m, rng);
        const auto theta = testutil::random_theta(n, N, rng);
        const auto inst = build_lp(theta, net, C);
        const auto frac = solve_lp(inst);
        const double best = testutil::brute_force(theta, net, C, N).value;
        CHECK(frac.objective >= best - 1e-6 * (1 + best));
        CHECK(max_violation(frac, inst) <= 1e-6);
        check_optimal_z(frac, inst, 1e-6);
        for (CacheId j = 0; j < m; ++j)
            CHECK(frac.mass(j) == doctest::Approx(C).epsilon(1e-9));
    }
}

TEST_CASE("lp: single cache with distinct weights is integral")
{
    const BipartiteNetwork net(1, 1, std::vector<BipartiteNetwork::Edge>{{0, 0}});
    std::vector<Coefficient> theta{{0, 0, 1.0}, {0, 1, 4.0}, {0, 2, 2.0}, {0, 3, 3.0}};
    const auto frac = solve_lp(build_lp(theta, net, 2));
    CHECK(frac.objective == doctest::Approx(7.0));
    CHECK(frac.y_of(0, 1) == doctest::Approx(1.0));
    CHECK(frac.y_of(0, 3) == doctest::Approx(1.0));
    const auto ex = exact_ilp(theta, net, 2, 1e6);
    CHECK(ex.value == doctest::Approx(frac.objective));
}

TEST_CASE("lp: scaling the objective scales the optimum")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto net = testutil::random_network(3, 3, rng);
        auto theta = testutil::random_theta(3, 6, rng);
        const auto a = solve_lp(build_lp(theta, net, 2));
        for (auto& c : theta)
            c.value *= 10.0;
        const auto b = solve_lp(build_lp(theta, net, 2));
        CHECK(b.objective == doctest::Approx(10.0 * a.objective).epsilon(1e-9));
        CHECK(a.y == b.y);
    }
}

TEST_CASE("lp: warm starts match cold solves")
{
    std::mt19937_64 rng(99);
    const auto net = testutil::random_network(4, 3, rng);
    std::vector<std::vector<CacheId>> adj(4);
    for (UserId i = 0; i < 4; ++i)
        adj[i].assign(net.user_caches(i).begin(), net.user_caches(i).end());
    LpOptions opt;
    opt.refactor_interval = 7;
    LpSolver warm(4, 3, 2, adj, opt);
    std::vector<Coefficient> theta;
    std::uniform_real_distribution<double> val(0.0, 3.0);
    for (int round = 0; round < 40; ++round) {
        // Grow the support now and then, and perturb every weight.
        const UserId i = rng() % 4;
        const FileId f = rng() % 9;
        if (!warm.has_pair(i, f)) {
            theta.push_back({i, f, val(rng)});
            warm.add_pair(i, f, theta.back().value);
        }
        for (auto& c : theta) {
            c.value = round % 5 == 0 ? 0.0 : val(rng);
            warm.set_coefficient(c.user, c.file, c.value);
        }
        const auto w = warm.solve();
        const auto inst = build_lp(theta, net, 2, true);
        const auto cold = solve_lp(inst);
        CHECK(w.objective == doctest::Approx(cold.objective).epsilon(1e-9));
        CHECK(max_violation(w, inst) <= 1e-6);
    }
    CHECK(warm.refactorizations() >= 4);
}

TEST_CASE("lp: serial and parallel kernels give identical solutions")
{
    std::mt19937_64 rng(8);
    const auto net = testutil::random_network(8, 6, rng, 0.5);
    const auto theta = testutil::random_theta(8, 25, rng, 0.6);
    const auto inst = build_lp(theta, net, 3);
    LpOptions s, p;
    s.parallel = false;
    p.parallel = true;
    LpSolver a(inst, s), b(inst, p);
    const auto fa = a.solve();
    const auto fb = b.solve();
    CHECK(fa.objective == fb.objective);
    CHECK(fa.y == fb.y);
    CHECK(fa.z == fb.z);
}

TEST_CASE("lp: iteration limit surfaces as a solver error")
{
    std::mt19937_64 rng(1);
    const auto net = testutil::random_network(4, 3, rng);
    const auto inst = build_lp(testutil::random_theta(4, 8, rng), net, 2);
    LpOptions o;
    o.max_iterations = 1;
    LpSolver solver(inst, o);
    CHECK_THROWS_AS(solver.solve(), SolverError);
}

TEST_CASE("lp: instance round trip through the solver")
{
    std::mt19937_64 rng(4);
    const auto net = testutil::random_network(3, 2, rng);
    const auto inst = build_lp(testutil::random_theta(3, 5, rng), net, 1);
    const LpSolver solver(inst);
    const auto back = solver.instance();
    CHECK(back.files == inst.files);
    REQUIRE(back.pairs.size() == inst.pairs.size());
    for (std::size_t k = 0; k < inst.pairs.size(); ++k) {
        CHECK(back.pairs[k].user == inst.pairs[k].user);
        CHECK(back.pairs[k].file_index == inst.pairs[k].file_index);
        CHECK(back.pairs[k].coef == inst.pairs[k].coef);
    }
}
