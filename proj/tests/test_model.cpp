#include "idie/catalog.hpp"

#include <doctest.h>

#include <cmath>

using namespace idie;

namespace {

ImpulsiveProblem example() { return find_entry("paper_example")->instantiate().problem; }

bool names_impulse(const std::vector<Violation>& v, long k) {
    for (const auto& x : v)
        if (x.index == k) return true;
    return false;
}

}  // namespace

TEST_CASE("catalog entries validate at defaults and at range corners") {
    for (const auto& entry : build_catalog()) {
        CAPTURE(entry.name);
        CHECK(validate(entry.instantiate().problem).empty());
        Parameters lo, hi;
        for (const auto& r : entry.free_parameters) {
            lo[r.name] = r.lower;
            hi[r.name] = r.upper;
        }
        CHECK(validate(entry.instantiate(lo).problem).empty());
        CHECK(validate(entry.instantiate(hi).problem).empty());
        const auto inst = entry.instantiate();
        CHECK(validate(inst.lipschitz, inst.problem.impulse_count(), inst.problem.horizon).empty());
    }
}

TEST_CASE("worked example data") {
    const auto inst = find_entry("paper_example")->instantiate();
    const auto& p = inst.problem;
    CHECK(p.dimension == 1);
    CHECK(p.generator(0, 0) == 1.0);
    CHECK(p.horizon == 2.0);
    REQUIRE(p.impulse_times.size() == 1);
    CHECK(p.impulse_times[0] == 1.0);
    CHECK(p.window_theta[0] == 0.5);
    CHECK(p.window_tau[0] == 0.5);
    CHECK(p.window_begin(0) == p.window_end(0));
    CHECK(p.history(-0.25)(0) == -0.25);
    CHECK(inst.lipschitz.field_lipschitz(0.3) == 1.0);
    CHECK(inst.lipschitz.kernel_lipschitz(1.7) == 1.0);
    CHECK(inst.lipschitz.jump_lipschitz == std::vector<double>{1.0});

    // V(t, w, z) = 1 - sin 5 - sin w(-r) + z on a constant segment.
    const auto seg = HistorySegment::constant(Vector::Constant(1, 0.4), p.delay);
    const double v = p.field(0.2, seg, Vector::Constant(1, 0.3))(0);
    CHECK(v == doctest::Approx(1.0 - std::sin(5.0) - std::sin(0.4) + 0.3).epsilon(1e-15));
    // Kernel sign: -1 by default, +1 on request.
    CHECK(p.kernel(0.0, 0.0, seg)(0) == doctest::Approx(-1.0 + std::cos(0.4)));
    const auto plus = find_entry("paper_example")->instantiate({{"kernel_sign", 1.0}}).problem;
    CHECK(plus.kernel(0.0, 0.0, seg)(0) == doctest::Approx(1.0 + std::cos(0.4)));
    CHECK_THROWS_AS(find_entry("paper_example")->instantiate({{"kernel_sign", 0.5}}), StructuralError);
}

TEST_CASE("pure_semigroup and method_of_steps data") {
    const auto ps = find_entry("pure_semigroup")->instantiate().problem;
    const auto seg = HistorySegment::constant(Vector::Constant(1, 3.0), ps.delay);
    CHECK(ps.field(0.7, seg, Vector::Constant(1, 2.0)).isZero(0.0));
    CHECK(ps.kernel(0.7, 0.1, seg).isZero(0.0));
    CHECK(ps.impulse_count() == 0);

    const auto ms = find_entry("method_of_steps")->instantiate().problem;
    CHECK(ms.history(-0.3)(0) == 1.0);
    CHECK(ms.generator.isZero(0.0));
}

TEST_CASE("unknown or out-of-range parameters are rejected") {
    const auto entry = find_entry("paper_example");
    CHECK_THROWS_AS(entry->instantiate({{"nope", 1.0}}), StructuralError);
    CHECK_THROWS_AS(entry->instantiate({{"L_G", 2.0}}), StructuralError);
    CHECK_FALSE(find_entry("no_such_problem").has_value());
}

TEST_CASE("validate names the broken window") {
    auto p = example();
    p.window_tau[0] = 1.5;
    const auto v = validate(p);
    REQUIRE(v.size() == 1);
    CHECK(v[0].index == 1);
}

TEST_CASE("validate reports unordered impulse times") {
    auto p = find_entry("integral_impulse")->instantiate().problem;
    p.impulse_times = {1.0, 0.5};
    p.window_theta = {0.0, 0.0};
    p.window_tau = {0.1, 0.1};
    CHECK(names_impulse(validate(p), 2));
}

TEST_CASE("validate catches shape and continuity problems") {
    auto p = example();
    p.history = [](double t) { return Vector::Constant(1, t < -0.5 ? 0.0 : 1.0); };
    CHECK_FALSE(validate(p).empty());

    p = example();
    p.field = [](double, const HistorySegment&, const Vector&) { return Vector::Zero(2).eval(); };
    CHECK_FALSE(validate(p).empty());

    p = example();
    p.impulse_times = {2.5};
    CHECK(names_impulse(validate(p), 1));

    p = example();
    p.window_theta[0] = 0.6;  // theta > tau
    CHECK(names_impulse(validate(p), 1));

    p = example();
    p.lags = {3.0};
    CHECK_FALSE(validate(p).empty());
}

TEST_CASE("LipschitzData validation") {
    LipschitzData lip;
    lip.jump_lipschitz = {1.0};
    lip.jump_deviation = {0.0};
    CHECK(validate(lip, 1, 2.0).empty());
    lip.window_lipschitz = -1.0;
    CHECK_FALSE(validate(lip, 1, 2.0).empty());
    lip.window_lipschitz = 0.0;
    lip.field_lipschitz = [](double t) { return t - 1.0; };
    CHECK_FALSE(validate(lip, 1, 2.0).empty());
    lip.field_lipschitz = [](double) { return 0.0; };
    CHECK_FALSE(validate(lip, 2, 2.0).empty());
}

TEST_CASE("history sampling hits both endpoints exactly") {
    const auto p = example();
    const auto block = sample_history(p, 1e-3);
    CHECK(block.front() == -1.0);
    CHECK(block.back() == 0.0);
    CHECK(block.size() == 1001);
    CHECK(history_norm(p) == doctest::Approx(1.0));
}
