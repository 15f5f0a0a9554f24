#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nlbeam/errors.hpp"
#include "nlbeam/experiments.hpp"
#include "nlbeam/initial_data.hpp"
#include "nlbeam/entropy.hpp"

using namespace nlbeam;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("nlbeam-test-" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("initial data") {
    const auto m = build_model(8);
    const auto g1 = gaussian_state(m, 5), g2 = gaussian_state(m, 5), g3 = gaussian_state(m, 6);
    CHECK(g1.a == g2.a);
    CHECK(g1.b == g2.b);
    CHECK(g1.a != g3.a);

    const auto s = random_state(m, ZeroSource{}, Forcing::zero(8), 3, 2.5);
    CHECK(total_energy(m, ZeroSource{}, Forcing::zero(8), s.a, s.b) == doctest::Approx(2.5).epsilon(1e-12));
    const SourceLaw cubic = DoublePower{};
    const auto c = random_state(m, cubic, Forcing::zero(8), 3, 2.5);
    CHECK(total_energy(m, cubic, Forcing::zero(8), c.a, c.b) == doctest::Approx(2.5).epsilon(1e-10));
    CHECK_THROWS_AS(rescale_to_energy(m, ZeroSource{}, Forcing::zero(8), g1, -1.0), DomainError);

    const auto e = mode_state(m, 3, 0.5);
    CHECK(e.a[2] == 0.5);
    CHECK(norm2(e.b) == 0.0);
    CHECK_THROWS(mode_state(m, 9, 1.0));
}

TEST_CASE("entropy of simple clouds") {
    std::vector<std::vector<double>> segment;
    for (int i = 0; i <= 2000; ++i) segment.push_back({i / 2000.0, 0.0});
    const auto est = box_count_entropy(segment, {0.1, 0.05, 0.025, 0.0125});
    CHECK(est.dimension == doctest::Approx(1.0).epsilon(0.1));

    std::vector<std::vector<double>> square;
    for (int i = 0; i <= 100; ++i)
        for (int j = 0; j <= 100; ++j) square.push_back({i / 100.0, j / 100.0});
    const auto sq = box_count_entropy(square, {0.2, 0.1, 0.05});
    CHECK(sq.dimension == doctest::Approx(2.0).epsilon(0.15));

    CHECK(greedy_cover_count(segment, 2.0) == 1);
    CHECK_THROWS_AS(box_count_entropy(segment, {0.1}), DomainError);
    CHECK_THROWS_AS(box_count_entropy(segment, {0.1, 0.2}), DomainError);
    CHECK_THROWS_AS(box_count_entropy({{1.0}}, {0.2, 0.1}), DomainError);
}

TEST_CASE("registry") {
    const auto& reg = experiment_registry();
    CHECK(reg.size() == 10);
    CHECK(find_experiment("exp_k3_ball") != nullptr);
    CHECK(find_experiment("nakao_suite") != nullptr);
    CHECK(find_experiment("simulate") == nullptr);
    CHECK(find_experiment("nope") == nullptr);
    for (const auto& e : reg) {
        const auto s = e.reference();
        CHECK(s.id == e.id);
        for (const auto& p : e.params) CHECK_NOTHROW(s.num(p.key) + 0.0 * s.list(p.key).size());
    }
}

TEST_CASE("plain simulation from the zero state stays at zero") {
    ExperimentSetup s;
    s.n_modes = 4;
    s.initial.kind = InitialSpec::Kind::Zero;
    s.integ.dt = 1e-2;
    s.integ.horizon = 1.0;
    s.integ.sample_stride = 10;
    const auto dir = scratch("zero");
    const auto r = simulate(s, RunContext{dir, true});
    CHECK(r.passed());
    const auto csv = slurp(dir / "simulate-seed1" / "trajectory.csv");
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
        std::istringstream row(line);
        std::string cell;
        std::getline(row, cell, ',');  // t
        while (std::getline(row, cell, ',')) CHECK(std::stod(cell) == 0.0);
    }
    fs::remove_all(dir);
}

TEST_CASE("identical seeds give identical output") {
    ExperimentSetup s;
    s.n_modes = 6;
    s.source = DoublePower{};
    s.seed = 9;
    s.integ.dt = 1e-2;
    s.integ.horizon = 2.0;
    const auto d1 = scratch("det1"), d2 = scratch("det2");
    simulate(s, RunContext{d1, true});
    simulate(s, RunContext{d2, true});
    const auto a = slurp(d1 / "simulate-seed9" / "trajectory.csv");
    CHECK(!a.empty());
    CHECK(a == slurp(d2 / "simulate-seed9" / "trajectory.csv"));
    s.seed = 10;
    simulate(s, RunContext{d1, true});
    CHECK(a != slurp(d1 / "simulate-seed10" / "trajectory.csv"));
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("Lyapunov check on a damped run") {
    ExperimentSetup s;
    s.n_modes = 8;
    s.source = DoublePower{};
    s.damping = K2Positive{};
    s.integ.dt = 1e-2;
    s.integ.horizon = 10.0;
    const auto m = s.model();
    const auto tr = integrate(m, s.source, s.damping, s.forcing(), s.initial_state(m), s.integ);
    const auto c = lyapunov_check(m, tr, 1.0, "damped");
    CHECK(c.pass);

    // a rising modified energy must be rejected
    auto bad = tr;
    bad.modified.back() = bad.modified.front() * 2.0;
    CHECK_FALSE(lyapunov_check(m, bad, 1.0, "bad").pass);
}

TEST_CASE("small suites run through the drivers") {
    auto nakao = find_experiment("nakao_suite")->reference();
    nakao.params["trials"] = "50";
    CHECK(nakao_suite(nakao, RunContext{}).passed());

    auto haraux = find_experiment("haraux_suite")->reference();
    haraux.params["trials"] = "2000";
    CHECK(haraux_suite(haraux, RunContext{}).passed());

    auto st = find_experiment("stationary")->reference();
    st.n_modes = 8;
    st.params["starts"] = "6";
    const auto r = stationary_suite(st, RunContext{});
    INFO(r.render());
    CHECK(r.passed());
}

TEST_CASE("lambda outside [0, 1] is rejected") {
    auto s = find_experiment("exp_lambda_lipschitz")->reference();
    s.params["lambda_grid"] = "0,0.5,1.5";
    CHECK_THROWS_AS(exp_lambda_lipschitz(s, RunContext{}), DomainError);
}

TEST_CASE("report rendering") {
    ExperimentReport r;
    r.id = "x";
    r.seed = 3;
    r.check("first", true, "fine");
    r.fit("slope", -1.0);
    CHECK(r.passed());
    r.check("second", false, "broken");
    CHECK_FALSE(r.passed());
    const auto text = r.render();
    CHECK(text.find("PASS") != std::string::npos);
    CHECK(text.find("FAIL") != std::string::npos);
    CHECK(text.find("slope") != std::string::npos);
}
