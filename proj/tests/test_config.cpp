#include "ampsim/config.hpp"
#include "ampsim/errors.hpp"

#include <catch_amalgamated.hpp>

#include <map>
#include <random>

using namespace ampsim;
using Catch::Matchers::ContainsSubstring;

namespace {

EnvLookup no_env() {
    return [](const std::string&) -> std::optional<std::string> { return std::nullopt; };
}

EnvLookup env_of(std::map<std::string, std::string> vars) {
    return [vars = std::move(vars)](const std::string& k) -> std::optional<std::string> {
        const auto it = vars.find(k);
        if (it == vars.end()) return std::nullopt;
        return it->second;
    };
}

}  // namespace

TEST_CASE("flat one-line configuration", "[config]") {
    const RunConfig c = parse_config(
        "va=-50, s=10, vcc=10, r=150, c=250e-9, amplitude=60e-6, offset=60e-6, f=1000, nt=200000");
    CHECK(c.early.va == -50.0);
    CHECK(c.early.s == 10.0);
    CHECK(c.circuit.vcc == 10.0);
    CHECK(c.circuit.r_load == 150.0);
    CHECK(c.circuit.c_load == 250e-9);
    CHECK(c.stimulus.amplitude == 60e-6);
    CHECK(c.stimulus.offset == 60e-6);
    CHECK(c.stimulus.frequency == 1000.0);
    CHECK(c.sim.n_steps == 200000);
}

TEST_CASE("sectioned configuration", "[config]") {
    const RunConfig c = parse_config(R"(
# equal-gain npn setup
[early]
va = -200
s = 2.5

[circuit]
vcc = 10
r = 150        ; ohms

[stimulus]
amplitude = 30e-6

[sim]
nt = 60001
scheme = trapezoidal
initial = dc

[sweep]
r_values = 30, 60, 150
n_va = 3
)");
    CHECK(c.early.va == -200.0);
    CHECK(c.stimulus.offset == 30e-6);  // defaults to the amplitude
    CHECK(c.sim.scheme == Scheme::trapezoidal);
    CHECK(c.sim.initial == InitialState::dc_operating_point);
    CHECK(c.scan.r_values == std::vector<double>{30.0, 60.0, 150.0});
    CHECK(c.grid.n_va == 3);
}

TEST_CASE("configuration errors", "[config]") {
    CHECK_THROWS_WITH(parse_config("va=50"), ContainsSubstring("va must be negative"));
    CHECK_THROWS_WITH(parse_config("offset=0, amplitude=60e-6"),
                      ContainsSubstring("offset - amplitude >= 0 violated"));
    CHECK_THROWS_WITH(parse_config("va=-50\nbogus=1"), ContainsSubstring("line 2: unknown key 'bogus'"));
    CHECK_THROWS_WITH(parse_config("[early]\nvcc=10"), ContainsSubstring("line 2: key 'vcc' belongs in [circuit]"));
    CHECK_THROWS_WITH(parse_config("[nonsense]"), ContainsSubstring("line 1: unknown section"));
    CHECK_THROWS_WITH(parse_config("\n\ns=abc"), ContainsSubstring("line 3: s: 'abc' is not a number"));
    CHECK_THROWS_WITH(parse_config("nt=-5"), ContainsSubstring("not a non-negative integer"));
    CHECK_THROWS_WITH(parse_config("scheme=rk4"), ContainsSubstring("euler or trapezoidal"));
    CHECK_THROWS_WITH(parse_config("r=0, c=1e-9"), ContainsSubstring("c > 0 requires r > 0"));
    CHECK_THROWS_WITH(parse_config("cycles=3, discard=3"), ContainsSubstring("discard < cycles"));
    CHECK_THROWS_WITH(parse_config("just words"), ContainsSubstring("expected key=value"));
    CHECK_THROWS_AS(parse_config("s=0"), ConfigError);
}

TEST_CASE("serialisation round-trips", "[config][property]") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 0; n < 200; ++n) {
        RunConfig c;
        c.early = {-1.0 - 300.0 * u(rng), 0.1 + 50.0 * u(rng)};
        c.circuit.vcc = 1.0 + 40.0 * u(rng);
        c.circuit.r_load = 1.0 + 5000.0 * u(rng);
        c.circuit.c_load = u(rng) < 0.5 ? 0.0 : 1e-6 * u(rng);
        if (u(rng) < 0.5) {
            c.circuit.r_b = 1e4 * u(rng);
            c.circuit.r_i = 1e3 * u(rng);
            c.circuit.v_r = 0.7;
        }
        c.stimulus.amplitude = 1e-4 * u(rng);
        c.stimulus.offset = c.stimulus.amplitude * (1.0 + u(rng));
        c.stimulus.frequency = 1.0 + 1e4 * u(rng);
        c.stimulus.phase = u(rng);
        c.sim.n_steps = 100000 + static_cast<std::size_t>(1e5 * u(rng));
        c.sim.scheme = u(rng) < 0.5 ? Scheme::euler : Scheme::trapezoidal;
        c.sim.initial = u(rng) < 0.5 ? InitialState::discharged : InitialState::dc_operating_point;
        c.scan.r_values = {u(rng) * 100.0, 150.0};
        c.scan.xi = 1.0 + u(rng);
        c.output_path = "out/run" + std::to_string(n);
        REQUIRE_NOTHROW(c.validate());
        CHECK(parse_config(serialize_config(c)) == c);
    }
}

TEST_CASE("layered overrides", "[config]") {
    const std::string doc = "va=-50, nt=200000, scheme=euler";
    const RunConfig base = resolve_run_config(doc, no_env(), {});
    CHECK(base.sim.n_steps == 200000);

    const RunConfig env = resolve_run_config(doc, env_of({{"AMPSIM_NT", "300000"}, {"AMPSIM_VA", "-75"}}), {});
    CHECK(env.sim.n_steps == 300000);
    CHECK(env.early.va == -75.0);

    const RunConfig flags =
        resolve_run_config(doc, env_of({{"AMPSIM_NT", "300000"}}), {{"nt", "400000"}, {"scheme", "trapezoidal"}});
    CHECK(flags.sim.n_steps == 400000);
    CHECK(flags.sim.scheme == Scheme::trapezoidal);

    CHECK_THROWS_WITH(resolve_run_config(doc, env_of({{"AMPSIM_VA", "7"}}), {}),
                      ContainsSubstring("va must be negative"));
    CHECK_THROWS_WITH(resolve_run_config(doc, env_of({{"AMPSIM_S", "x"}}), {}),
                      ContainsSubstring("AMPSIM_S"));
    CHECK_THROWS_WITH(resolve_run_config(std::nullopt, no_env(), {{"nope", "1"}}),
                      ContainsSubstring("unknown key 'nope'"));
    CHECK(resolve_run_config(std::nullopt, no_env(), {}) == RunConfig{});
}
