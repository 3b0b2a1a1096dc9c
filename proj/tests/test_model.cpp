#include "doctest.h"

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "sbmh/config_io.hpp"
#include "sbmh/error.hpp"
#include "sbmh/model.hpp"

using namespace sbmh;

namespace {

BlockModelConfig cfg(int n, int m, std::vector<double> p, double q, bool loops = true) {
  BlockModelConfig c;
  c.n = n;
  c.m = m;
  c.p = std::move(p);
  c.q = q;
  c.allow_loops = loops;
  return c;
}

}  // namespace

TEST_CASE("validation rejects malformed configurations") {
  CHECK_THROWS_AS(cfg(10, 3, {0.5, 0.4, 0.3}, 0.1).validate(), ValidationError);  // 3 does not divide 10
  CHECK_THROWS_AS(cfg(10, 2, {0.3, 0.5}, 0.1).validate(), ValidationError);       // ascending
  CHECK_THROWS_AS(cfg(10, 2, {0.5}, 0.1).validate(), ValidationError);
  CHECK_THROWS_AS(cfg(10, 2, {1.5, 0.5}, 0.1).validate(), ValidationError);
  CHECK_THROWS_AS(cfg(10, 2, {0.5, 0.5}, -0.1).validate(), ValidationError);
  CHECK_THROWS_AS(cfg(2, 2, {0.5, 0.5}, 0.1).validate(), ValidationError);
  CHECK_NOTHROW(cfg(10, 2, {0.5, 0.5}, 0.0).validate());
  CHECK_NOTHROW(cfg(10, 1, {1.0}, 0.0).validate());
}

TEST_CASE("derived parameters for a two-block example") {
  const auto d = derive(cfg(100, 2, {0.5, 0.3}, 0.1));
  CHECK(d.gamma[0] == doctest::Approx(30.0));
  CHECK(d.gamma[1] == doctest::Approx(20.0));
  CHECK(d.gamma_bar == doctest::Approx(25.0));
  CHECK(d.gamma_min == doctest::Approx(20.0));
  CHECK(d.sigma2 == doctest::Approx(0.17).epsilon(1e-12));
  CHECK(d.mu_in == doctest::Approx(1020.0));
  CHECK(d.mu_out == doctest::Approx(250.0));
  CHECK(d.tau2 == doctest::Approx(811.5));
  REQUIRE(d.kappa);
  CHECK(*d.kappa == doctest::Approx(0.1 / 0.3));
  CHECK_FALSE(d.kappa_tilde);
  CHECK_FALSE(d.alpha);
}

TEST_CASE("expected degrees match explicit row sums") {
  oracle::ConfigGen gen(11);
  for (int trial = 0; trial < 40; ++trial) {
    auto c = gen.config(gen.integer(1, 5), gen.integer(2, 12), 0.0, 1.0, 0.0, 1.0);
    c.allow_loops = true;
    const auto d = derive(c);
    for (int v = 0; v < c.n; ++v) {
      CHECK(d.gamma[c.block_of(v)] == doctest::Approx(oracle::expected_degree(c, v)).epsilon(1e-12));
    }
  }
}

TEST_CASE("edge-count moments match explicit pair sums") {
  oracle::ConfigGen gen(12);
  for (int trial = 0; trial < 40; ++trial) {
    auto c = gen.config(gen.integer(1, 4), gen.integer(2, 10), 0.0, 1.0, 0.0, 1.0);
    c.allow_loops = trial % 2 == 0;
    const auto d = derive(c);
    double mu = 0.0, tau2 = 0.0;
    for (int v = 0; v < c.n; ++v) {
      for (int w = c.allow_loops ? v : v + 1; w < c.n; ++w) {
        const double pr = oracle::pair_probability(c, v, w);
        mu += pr;
        tau2 += pr * (1.0 - pr);
      }
    }
    CHECK(d.mu_in + d.mu_out == doctest::Approx(mu).epsilon(1e-12));
    CHECK(d.tau2 == doctest::Approx(tau2).epsilon(1e-12));
  }
}

TEST_CASE("kappa diagnostics") {
  CHECK_THROWS_WITH_AS(kappa_of(derive(cfg(10, 2, {0.5, 0.5}, 0.0))),
                       doctest::Contains("disconnected-in-expectation"), ValidationError);
  CHECK_THROWS_WITH_AS(kappa_of(derive(cfg(10, 1, {0.5}, 0.2))), doctest::Contains("single block"),
                       ValidationError);
  CHECK(std::isinf(kappa_of(derive(cfg(10, 2, {0.5, 0.0}, 0.2)))));
  CHECK(kappa_of(derive(cfg(12, 3, {0.6, 0.4, 0.2}, 0.1))) == doctest::Approx(1.0));
}

TEST_CASE("identical-p quantities") {
  const auto d = derive(cfg(1500, 2, {0.1, 0.1}, 0.05));
  REQUIRE(d.identical_p());
  CHECK(*d.kappa_tilde == doctest::Approx(0.5277777777777777).epsilon(1e-14));
  CHECK(*d.zeta == doctest::Approx(0.9473684210526316).epsilon(1e-14));
  CHECK(*d.alpha == doctest::Approx(0.3209876543209876).epsilon(1e-14));
  CHECK(*d.rho_n == doctest::Approx(0.006085806194501846).epsilon(1e-14));

  // kappa_tilde = 0 (q = 0) and infinity (p = 1) give alpha = 0.
  CHECK(*derive(cfg(10, 2, {0.5, 0.5}, 0.0)).alpha == 0.0);
  const auto inf = derive(cfg(10, 2, {1.0, 1.0}, 0.3));
  CHECK(std::isinf(*inf.kappa_tilde));
  CHECK(*inf.alpha == 0.0);
  CHECK(*inf.rho_n == doctest::Approx(std::sqrt(0.3 / (10 * 2 * 0.7))));
}

TEST_CASE("1 - alpha has a closed form") {
  oracle::ConfigGen gen(13);
  for (int trial = 0; trial < 200; ++trial) {
    const double kt = gen.unit(0.0, 20.0);
    const double zeta = gen.unit(0.0, 5.0);
    const double closed = (1.0 + kt) / ((1.0 + zeta * kt) * (1.0 + zeta * kt));
    CHECK(1.0 - alpha_of(kt, zeta) == doctest::Approx(closed).epsilon(1e-12));
  }
}

TEST_CASE("the two CLT scalings differ by sqrt(1 - alpha) for identical p") {
  oracle::ConfigGen gen(14);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = gen.config(gen.integer(2, 6), gen.integer(20, 400), 0.05, 0.95, 0.01, 0.95, true);
    const auto d = derive(c);
    const double h = c.n * gen.unit(0.8, 1.2);
    const auto general = clt_standardize(d, 0, h, CltScaling::general);
    const auto ident = clt_standardize(d, 0, h, CltScaling::identical_p);
    CHECK(general.target_variance == 1.0);
    CHECK(ident.target_variance == doctest::Approx(1.0 - *d.alpha));
    CHECK(general.value == doctest::Approx(ident.value / std::sqrt(1.0 - *d.alpha)).epsilon(1e-10));
  }
}

TEST_CASE("CLT standardization") {
  const auto d = derive(cfg(100, 2, {0.5, 0.3}, 0.1));
  // Target in block 1: centre N gamma_bar / gamma_1 = 125.
  const auto a = clt_affine(d, 1, CltScaling::general);
  CHECK(a.centre == doctest::Approx(125.0));
  const double upsilon = std::sqrt(50 * 0.3 * 0.7 + 50 * 0.1 * 0.9);
  CHECK(a.scale == doctest::Approx(400.0 / (100 * upsilon * 25.0)));
  CHECK(clt_standardize(d, 1, 125.0).value == doctest::Approx(0.0));
  CHECK_THROWS_AS(clt_affine(d, 0, CltScaling::identical_p), ValidationError);
  CHECK_THROWS_AS(clt_affine(d, 2, CltScaling::general), ValidationError);
  // No degree randomness: the scaling is undefined.
  CHECK_THROWS_AS(clt_affine(derive(cfg(10, 2, {1.0, 1.0}, 0.0)), 0, CltScaling::general), ValidationError);
}

TEST_CASE("LLN predictions") {
  const auto d = derive(cfg(100, 2, {0.5, 0.3}, 0.1));
  CHECK(lln_prediction(d, 0).h_v_pred == 100.0);
  CHECK(lln_prediction(d, 0).h_w_pred == doctest::Approx(100.0 * 25.0 / 30.0));
  CHECK(lln_prediction(d, 1).h_w_pred == doctest::Approx(125.0));
  CHECK_THROWS_AS(lln_prediction(d, -1), ValidationError);
}

TEST_CASE("condition report") {
  const auto r = check_conditions(cfg(1000000, 2, {0.3, 0.3}, 0.1), ConditionMode::lln);
  const auto* conn = r.find("connectivity");
  REQUIRE(conn);
  CHECK(conn->ratio == doctest::Approx(0.18215360075883574).epsilon(1e-12));
  CHECK_FALSE(conn->pass);
  CHECK(r.find("q_lower"));

  const auto loose = check_conditions(cfg(1000000, 2, {0.3, 0.3}, 0.1), ConditionMode::lln, 0.5);
  CHECK(loose.find("connectivity")->pass);

  const auto clt = check_conditions(cfg(1000, 2, {0.3, 0.2}, 0.1), ConditionMode::clt);
  for (const char* name : {"connectivity_clt", "degree_balance", "variance_balance", "spectral_clt"}) {
    CHECK_MESSAGE(clt.find(name), name);
  }
  const auto ip = check_conditions(cfg(1000, 2, {0.3, 0.3}, 0.1), ConditionMode::identical_p);
  CHECK(ip.find("connectivity_identical_p"));
  CHECK(ip.find("q_lower_identical_p"));

  const std::string csv = to_csv(r);
  CHECK(csv.rfind("condition,lhs,rhs,ratio,pass\n", 0) == 0);
  CHECK(csv.find("# kappa=") != std::string::npos);
  const auto one_block = to_csv(check_conditions(cfg(10, 1, {0.5}, 0.0), ConditionMode::lln));
  CHECK(one_block.find("# kappa=undefined") != std::string::npos);
}

TEST_CASE("config JSON round trip and schema errors") {
  auto c = cfg(100, 2, {0.5, 0.3}, 0.1, false);
  c.seed = 18446744073709551615ull;
  const auto back = parse_config(dump_config(c));
  CHECK(back.n == c.n);
  CHECK(back.m == c.m);
  CHECK(back.p == c.p);
  CHECK(back.q == c.q);
  CHECK(back.allow_loops == c.allow_loops);
  CHECK(back.seed == c.seed);

  CHECK(parse_config(R"({"n": 10, "m": 2, "p": 0.4, "q": 0.1})").p == std::vector<double>{0.4, 0.4});
  CHECK_THROWS_AS(parse_config(R"({"n": 10, "m": 2, "p": [0.4, 0.3], "q": 0.1, "extra": 1})"), ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"n": "10", "m": 2, "p": [0.4, 0.3], "q": 0.1})"), ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"n": 10, "m": 2, "p": [0.4], "q": 0.1})"), ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"n": 10, "m": 2, "q": 0.1})"), ValidationError);
  CHECK_THROWS_AS(parse_config("not json"), ValidationError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ValidationError);
}
