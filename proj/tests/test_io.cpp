#include <catch_amalgamated.hpp>

#include <random>

#include "mds/mds.hpp"
#include "oracles.hpp"

using namespace mds;

namespace {

std::string validation_message(const json& j) {
  try {
    parse_descriptor(j);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Validation);
    return e.what();
  }
  FAIL("expected a validation error for " << j.dump());
  return {};
}

bool mentions(const std::string& msg, const std::string& needle) { return msg.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("parse a minimal descriptor", "[io]") {
  auto d = parse_descriptor(json::parse(R"({"t":3,"m":1,"A":[[1,1,-1]],"omega":["1"],"omega_prime":["1"]})"));
  CHECK(d.system == LaurentMonomialSystem(3, {{1, 1, -1}}, {1}, {1}));
  CHECK(d.coefficients.empty());
  CHECK(d.s.empty());
  CHECK(d.warnings.empty());
}

TEST_CASE("parse a full descriptor", "[io]") {
  auto d = parse_descriptor(json::parse(R"({
    "t": 2, "A": [[1, -1]], "omega": [6], "omega_prime": ["9223372036854775807"],
    "coefficients": [
      {"type": "hecke_gl2", "lambda": {"2": [0.5, 0.25], "3": -1}},
      {"type": "character", "q": 7, "k": 2}
    ],
    "s": [2, [2.5, 1]],
    "comment": "ignored"
  })"));
  CHECK(d.system.omega_prime()[0] == 9223372036854775807LL);
  REQUIRE(d.coefficients.size() == 2);
  CHECK(d.coefficients[0].lambda.at(2) == Complex(0.5, 0.25));
  CHECK(d.coefficients[1].q == 7);
  CHECK(d.s == SeriesPoint{{2.0, 0.0}, {2.5, 1.0}});
  REQUIRE(d.warnings.size() == 1);
  CHECK(mentions(d.warnings[0], "comment"));
}

TEST_CASE("validation errors name the field", "[io]") {
  CHECK(mentions(validation_message(json::parse(R"({"t":3,"A":[[1,1,-1],[1,1]],"omega":["1","1"],"omega_prime":["1","1"]})")),
                 "A[1]"));
  CHECK(mentions(validation_message(json::parse(R"({"A":[[1]]})")), "t"));
  CHECK(mentions(validation_message(json::parse(R"({"t":1,"A":[[1]],"omega":["1"]})")), "omega_prime"));
  CHECK(mentions(validation_message(json::parse(R"({"t":1,"A":[[1]],"omega":["0"],"omega_prime":["1"]})")),
                 "omega[0]"));
  CHECK(mentions(validation_message(json::parse(R"({"t":1,"A":[[1]],"omega":["1x"],"omega_prime":["1"]})")),
                 "omega[0]"));
  CHECK(mentions(
      validation_message(json::parse(R"({"t":1,"A":[[1]],"omega":["99999999999999999999"],"omega_prime":["1"]})")),
      "omega[0]"));
  CHECK(mentions(validation_message(json::parse(R"({"t":1,"m":2,"A":[[1]],"omega":["1"],"omega_prime":["1"]})")), "m"));
  CHECK(mentions(validation_message(json::parse(R"({"t":1,"A":[[1.5]],"omega":["1"],"omega_prime":["1"]})")),
                 "A[0][0]"));
  CHECK(mentions(validation_message(json::parse(R"({"t":1,"coefficients":[{"type":"character","q":9,"k":1}]})")),
                 "coefficients[0].q"));
  CHECK(mentions(validation_message(json::parse(R"({"t":1,"coefficients":[{"type":"bogus"}]})")),
                 "coefficients[0].type"));
  CHECK(mentions(validation_message(json::parse(R"({"t":1,"coefficients":[{"type":"hecke_gl2","lambda":{"4":1}}]})")),
                 "lambda"));
  CHECK(mentions(validation_message(json::parse(R"({"t":2,"s":[2]})")), "s"));
  CHECK(mentions(validation_message(json::parse(R"({"t":1,"s":["two"]})")), "s[0]"));
  CHECK(mentions(validation_message(json::parse("[1,2]")), "$"));
}

TEST_CASE("descriptor round trip", "[io][property]") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  std::uniform_int_distribution<int> kind(0, 4);
  for (int rep = 0; rep < 200; ++rep) {
    SystemDescriptor desc;
    desc.system = oracle::random_system(rng, {});
    for (std::size_t j = 0; j < desc.system.t(); ++j) {
      CoefficientSpec c;
      switch (kind(rng)) {
        case 0: break;
        case 1:
          c.type = CoefficientSpec::Type::Character;
          c.q = 13;
          c.k = rep % 12;
          break;
        case 2:
          c.type = CoefficientSpec::Type::HeckeGL2;
          c.lambda = {{2, {d(rng), d(rng)}}, {3, {d(rng), 0.0}}};
          break;
        case 3: c.type = CoefficientSpec::Type::Tau; break;
        case 4:
          c.type = CoefficientSpec::Type::Table;
          c.values = {{{2, 1}, {d(rng), d(rng)}}, {{5, 3}, {d(rng), 0.0}}};
          break;
      }
      desc.coefficients.push_back(c);
      desc.s.push_back({1.0 + std::abs(d(rng)), d(rng)});
    }
    json once = to_json(desc);
    auto back = parse_descriptor(json::parse(once.dump()));
    REQUIRE(back == desc);
    REQUIRE(to_json(back) == once);
  }
}

TEST_CASE("build_coefficients", "[io]") {
  auto d = parse_descriptor(json::parse(R"({"t":3,"coefficients":[{"type":"tau"},{"type":"character","q":5,"k":2},
    {"type":"table","values":{"2^1":0.5,"3^1":[0,1]}}]})"));
  auto c = build_coefficients(d, 1000);
  REQUIRE(c.size() == 3);
  CHECK(std::abs(c[0](2) - Complex(-24.0 / std::pow(2.0, 5.5))) < 1e-15);
  CHECK(std::abs(c[1](6) - Complex(1.0)) < 1e-15);
  CHECK(c[2](6) == Complex(0.0, 0.5));
  CHECK(uses_tau(d));
}

TEST_CASE("result serialization", "[io]") {
  auto n = normalize(LaurentMonomialSystem(2, {{2, -2}, {1, -1}}, {1, 1}, {1, 1}));
  json jn = to_json(n);
  CHECK(jn["dropped_rows"] == 1);
  CHECK(jn["system"]["A"] == json::parse("[[1,-1]]"));
  CHECK(jn["system"]["omega"] == json::parse(R"(["1"])"));
  CHECK(jn["ops"].is_array());

  auto r = support_reducible({{1, -1, 0}, {0, 1, -1}}, 10);
  json jr = to_json(r, 10);
  CHECK(jr["result"] == "reducible");
  CHECK(jr["basis"] == json::parse("[[1,-1,0],[0,1,-1]]"));
  CHECK(to_json(support_reducible({{1, 1, -1}}, 10), 10)["result"] == "irreducible_within_bound");

  auto ps = check_property_S(parse_constraints("x1 + x2 - 5", 2), 5);
  json jp = to_json(ps, 5);
  CHECK(jp["result"] == "witness");
  CHECK(jp["witness"]["point"].size() == 2);
  CHECK(to_json(check_property_S(parse_constraints("x1 - x2", 2), 10), 10)["result"] == "no_counterexample");

  MomentExperiment ex;
  ex.moduli = {11, 31};
  ex.rhs = {1.0, 1.0};
  ex.errors = {0.1, 0.01};
  fit_decay(ex);
  json jm = to_json(ex);
  CHECK(jm["per_q"].size() == 2);
  CHECK(jm["fit"]["eta"].get<double>() > 0);
  CHECK(moment_csv(ex).rfind("q,error\n11,", 0) == 0);
}
