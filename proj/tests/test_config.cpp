#include <sstream>

#include "doctest.h"
#include "nlbeam/config.hpp"
#include "nlbeam/errors.hpp"

using namespace nlbeam;

namespace {

int error_line(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

}  // namespace

TEST_CASE("empty text yields the plain simulation defaults") {
    const auto c = parse_config("");
    CHECK(c == reference_config("simulate"));
    CHECK(c.setup.id == "simulate");
    CHECK(c.output_dir == "runs");
}

TEST_CASE("full configuration") {
    const std::string text = R"(
# comment
seed = 42
output_dir = out

[model]
n_modes = 12
length = pi
kappa = 0.5   ; trailing comment
quad_points = auto

[damping]
variant = k1
gamma = 2
q = 0.75

[source]
variant = double_power
delta = 3
r = 1.5
sigma = 0.25

[forcing]
lambda = 0.5
h = mode:2:1.5

[integrator]
dt = 0.002
scheme = rk4
horizon = 3
sample_stride = 5
alpha = 0.25

[experiment]
initial = mode:3:0.1
)";
    const auto c = parse_config(text);
    const auto& s = c.setup;
    CHECK(s.seed == 42);
    CHECK(c.output_dir == "out");
    CHECK(s.n_modes == 12);
    CHECK(s.kappa == 0.5);
    CHECK(s.damping == DampingLaw{K1Monomial{2.0, 0.75}});
    CHECK(s.source == SourceLaw{DoublePower{3.0, 1.5, 0.25}});
    CHECK(s.lambda == 0.5);
    REQUIRE(s.h.size() == 12);
    CHECK(s.h[1] == 1.5);
    CHECK(s.integ.scheme == Scheme::RK4);
    CHECK(s.integ.sample_stride == 5);
    CHECK(s.initial.kind == InitialSpec::Kind::Mode);
    CHECK(s.initial.mode == 3);

    CHECK(parse_config(emit_config(c)) == c);
}

TEST_CASE("every reference configuration round-trips") {
    for (const auto& e : experiment_registry()) {
        const auto c = reference_config(e.id);
        CHECK(parse_config(emit_config(c)) == c);
        CHECK(parse_config("[experiment]\nid = " + e.id + "\n") == c);
    }
    auto c = reference_config("exp_entropy");
    c.setup.params["circle_tol"] = "0.25";
    c.setup.seed = 18446744073709551615ull;
    CHECK(parse_config(emit_config(c)) == c);
}

TEST_CASE("errors carry the offending line") {
    CHECK(error_line("seed = 1\n[model]\nn_modes = 0\n") == 3);
    CHECK(error_line("[model]\nkappa = -1\n") == 2);
    CHECK(error_line("[damping]\nvariant = k1\nq = 0.3\n") == 3);
    CHECK(error_line("[damping]\nvariant = k2_constant\nq = 1\n") == 3);
    CHECK(error_line("[damping]\nvariant = k9\n") == 2);
    CHECK(error_line("[forcing]\nlambda = 1.5\n") == 2);
    CHECK(error_line("[integrator]\ndt = -0.1\n") == 2);
    CHECK(error_line("[integrator]\nscheme = euler\n") == 2);
    CHECK(error_line("\n\n[nowhere]\n") == 3);
    CHECK(error_line("seed = 1\nseed = 2\n") == 2);
    CHECK(error_line("[model]\nn_modes = 4\nn_modes = 5\n") == 3);
    CHECK(error_line("[model]\nwidth = 1\n") == 2);
    CHECK(error_line("[model]\nn_modes\n") == 2);
    CHECK(error_line("[model]\nn_modes = 2\n[forcing]\nh = 1,2,3\n") == 4);
    CHECK(error_line("[experiment]\nid = exp_k1_decay\nbogus = 1\n") == 3);
    CHECK(error_line("[experiment]\nid = exp_k1_decay\nfit_from = abc\n") == 3);
    CHECK(error_line("[source]\nvariant = zero\ndelta = 2\n") == 3);
    CHECK(error_line("[model]\nn_modes = 4\n[experiment]\ninitial = mode:7:1\n") == 4);
    CHECK(error_line("[integrator]\nscheme = rk4\ndt = 0.5\n") >= 0);
    CHECK_THROWS_AS(parse_config("[experiment]\nid = nothing\n"), ConfigError);
}

TEST_CASE("catalog lists every experiment") {
    const auto text = list_experiments();
    for (const auto& e : experiment_registry()) CHECK(text.find(e.id) != std::string::npos);
}

TEST_CASE("run reports driver failures instead of throwing") {
    auto c = reference_config("simulate");
    c.output_dir.clear();
    c.setup.n_modes = 4;
    c.setup.integ.dt = 1e-2;
    c.setup.integ.horizon = 0.5;
    std::ostringstream log;
    CHECK(run(c, log, false) == 0);
    CHECK(log.str().find("PASS") != std::string::npos);

    auto bad = reference_config("exp_lambda_lipschitz");
    bad.output_dir.clear();
    bad.setup.params["lambda_grid"] = "0,2";
    std::ostringstream log2;
    CHECK(run(bad, log2, true) == 1);
}
