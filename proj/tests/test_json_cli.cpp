#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "freelevy/error.hpp"
#include "freelevy/json_io.hpp"
#include "random_models.hpp"

using namespace freelevy;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "freelevy_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

}  // namespace

TEST_CASE("JSON round trips") {
  std::mt19937_64 g(61);
  for (int trial = 0; trial < 30; ++trial) {
    auto u = testgen::random_triplet(g, {}, trial % 2 ? Flavor::kFree : Flavor::kClassical);
    auto text = dump_json(triplet_to_json(u));
    CHECK(triplet_from_json(parse_json(text)) == u);
    CHECK(dump_json(triplet_to_json(triplet_from_json(parse_json(text)))) == text);
    auto f = testgen::random_field(g);
    CHECK(field_from_json(parse_json(dump_json(field_to_json(f)))) == f);
  }
  // awkward doubles survive
  auto u = make_triplet(0.1 + 0.2, 1e-300, LevyMeasure::dirac(-1.0 / 3.0, 5e-324 * 1e10));
  CHECK(triplet_from_json(parse_json(dump_json(triplet_to_json(u)))) == u);
  // general power pieces use the "power" array
  LevyMeasure shell({}, {{0.5, 1.0, 0.2, 0.8, +1}}, {});
  auto j = levy_measure_to_json(shell);
  CHECK(j.contains("power"));
  CHECK_FALSE(j.contains("near_zero"));
  CHECK(levy_measure_from_json(j) == shell);
  auto nz = levy_measure_to_json(LevyMeasure::near_zero(1.2, 0.5, 0.25, 0.3));
  CHECK(nz["near_zero"]["alpha"] == 1.2);
  CHECK(nz["near_zero"]["c_minus"] == 0.25);

  Integrand f({{0, 1, {1.0, -2.0}}, {1.5, 2, {0.25}}});
  CHECK(integrand_from_json(parse_json(dump_json(integrand_to_json(f)))) == f);
  rmt::Ensemble e;
  e.kind = rmt::EnsembleKind::kFid;
  e.n = 64;
  e.triplet = make_triplet(1, 0, LevyMeasure::dirac(1.0));
  e.seed = 0xfeedfacecafebeefULL;
  auto back = ensemble_from_json(parse_json(dump_json(ensemble_to_json(e))));
  CHECK(back.seed == e.seed);
  CHECK(back.triplet == e.triplet);
  auto model = make_model(make_factorizable(e.triplet, {{0, 1, 1.0}}),
                          {{0.5, AtomLaw{std::nullopt, MomentVector{{1, 2}}, true}}});
  auto mj = model_to_json(model);
  CHECK(model_to_json(model_from_json(parse_json(dump_json(mj)))) == mj);
}

TEST_CASE("JSON parse errors") {
  CHECK_THROWS_AS(parse_json("{\"a\": 1,"), Error);
  try {
    triplet_from_json(parse_json("{\"a\": \"x\", \"b\": 1}"));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParseError);
  }
  CHECK_THROWS_AS(triplet_from_json(parse_json("{\"b\": 1}")), Error);
  CHECK_THROWS_AS(triplet_from_json(parse_json("{\"a\": 0, \"b\": 1, \"flavor\": \"boolean\"}")), Error);
}

TEST_CASE("cli: density of the semicircle") {
  auto csv = scratch("sc.csv");
  auto r = run({"density", "--triplet", R"({"a":0,"b":1})", "--grid", "-3:3:601", "--out", csv.string()});
  REQUIRE(r.code == 0);
  std::istringstream in(slurp(csv));
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,density,cdf");
  int row = 0;
  double x = 1, dens = 0;
  while (std::getline(in, line)) {
    if (row++ == 300) {
      CHECK(std::sscanf(line.c_str(), "%lf,%lf", &x, &dens) == 2);
      break;
    }
  }
  CHECK(x == 0.0);
  CHECK(dens == doctest::Approx(0.31831).epsilon(1e-5));
  auto side = parse_json(slurp(csv.string() + ".json"));
  CHECK(side["schema"] == 1);
  CHECK(side["atoms"].empty());
  CHECK(side["support"][0].get<double>() == doctest::Approx(-2.0).epsilon(0.02));
}

TEST_CASE("cli: convolve, bp and cumulants") {
  auto c = run({"convolve", "--triplet", R"({"a":0,"b":1})", "--triplet", R"({"a":0,"b":1})"});
  REQUIRE(c.code == 0);
  CHECK(triplet_from_json(parse_json(c.out)) == make_triplet(0, 2));

  auto b = run({"bp", "--triplet", R"({"a":1,"b":0,"flavor":"classical","r":{"atoms":[{"location":1,"mass":1}]}})"});
  REQUIRE(b.code == 0);
  CHECK(triplet_from_json(parse_json(b.out)) == make_triplet(1, 0, LevyMeasure::dirac(1.0)));

  auto in = scratch("moments.csv");
  write(in, "order,moment\n1,0\n2,1\n3,0\n4,2\n5,0\n6,5\n");
  auto k = run({"cumulants", "--in", in.string(), "--from", "moments", "--to", "free"});
  REQUIRE(k.code == 0);
  CHECK(k.out == "order,free\n1,0\n2,1\n3,0\n4,0\n5,0\n6,0\n");
  auto t = run({"cumulants", "--triplet", R"({"a":1,"b":0,"r":{"atoms":[[1,1]]}})", "--order", "3"});
  CHECK(t.out == "order,free\n1,1\n2,1\n3,1\n");
}

TEST_CASE("cli: basis, integrate, levy-ito, decompose, truncate") {
  auto field = dump_json(field_to_json(make_factorizable(make_triplet(0, 1), {{0, 4, 1.0}})));
  auto ff = scratch("field.json");
  write(ff, field);
  auto bt = run({"basis-triplet", "--field", ff.string(), "--set", "[0,1)∪[2,3)"});
  REQUIRE(bt.code == 0);
  CHECK(triplet_from_json(parse_json(bt.out)) == make_triplet(0, 2));

  auto in = run({"integrate", "--field", ff.string(), "--integrand",
                 R"({"pieces":[{"lo":0,"hi":1,"coeffs":[2]}]})"});
  REQUIRE(in.code == 0);
  CHECK(triplet_from_json(parse_json(in.out)) == make_triplet(0, 4));

  auto li = run({"levy-ito", "--field", field});
  REQUIRE(li.code == 0);
  CHECK(parse_json(li.out).contains("compensated_drift"));

  auto pf = dump_json(field_to_json(make_factorizable(make_triplet(1, 0, LevyMeasure::dirac(1.0)), {{0, 1, 1.0}})));
  Json model{{"diffuse", parse_json(pf)},
             {"atoms", Json::array({Json{{"x", 0.5},
                                         {"law", {{"positive", true},
                                                  {"triplet", parse_json(R"({"a":1,"b":0,"r":{"atoms":[[1,1]]}})")}}}}})}};
  auto dc = run({"decompose", "--model", model.dump()});
  REQUIRE(dc.code == 0);
  CHECK(parse_json(dc.out)["atomic"].size() == 1);

  auto tr = run({"truncate", "--field", pf, "--eps", "2"});
  REQUIRE(tr.code == 0);
  CHECK(parse_json(tr.out)["cells"].empty());
}

TEST_CASE("cli: exit codes and error JSON") {
  auto none = run({});
  CHECK(none.code == 2);
  CHECK(parse_json(none.err).contains("error"));
  auto bad = run({"density", "--triplet", R"({"a":0,"b":-1})"});
  CHECK(bad.code == 2);
  CHECK(parse_json(bad.err)["error"]["code"] == "InvalidArgument");
  auto parse = run({"convolve", "--triplet", "{oops", "--triplet", "{}"});
  CHECK(parse.code == 2);
  CHECK(parse_json(parse.err)["error"]["code"] == "ParseError");
  auto grid = run({"density", "--triplet", R"({"a":0,"b":1})", "--grid", "1:0:5"});
  CHECK(grid.code == 2);
  auto missing = run({"basis-triplet", "--field", "/nonexistent/field.json", "--set", "[0,1)"});
  CHECK(missing.code == 2);
  auto outside = run({"basis-triplet", "--field", dump_json(field_to_json(make_factorizable(make_triplet(0, 1), {{0, 1, 1.0}}))),
                      "--set", "[0,2)"});
  CHECK(outside.code == 2);
  CHECK(parse_json(outside.err)["error"]["code"] == "OutOfCarrier");
  auto noint = run({"integrate", "--field",
                    dump_json(field_to_json(make_factorizable(make_triplet(0, 1), {{0, 1, 1.0}}))),
                    "--integrand", R"({"pieces":[{"lo":0,"hi":1,"coeffs":[1e200,1e200]}]})"});
  CHECK(noint.code == 3);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("cli: seeded pipelines are byte-identical across runs") {
  std::string ens = R"({"kind":"fid","n":96,"seed":17,"eps":0.001,
                        "triplet":{"a":1,"b":0.5,"r":{"atoms":[[1,1]]}}})";
  auto a = run({"simulate", "--ensemble", ens, "--report", scratch("ks_a.json").string()});
  auto b = run({"simulate", "--ensemble", ens, "--report", scratch("ks_b.json").string()});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(slurp(scratch("ks_a.json")) == slurp(scratch("ks_b.json")));
  auto c = run({"simulate", "--ensemble", ens, "--seed", "18"});
  CHECK(c.out != a.out);
  auto conv = run({"check-convergence", "--sequence", R"([{"a":0,"b":1.5},{"a":0,"b":1.00001}])",
                   "--target", R"({"a":0,"b":1})"});
  REQUIRE(conv.code == 0);
  CHECK(parse_json(conv.out)["pass"] == true);
}
