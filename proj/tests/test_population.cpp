// Copyright 2026 The nudgecast Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>

#include "fixtures.hpp"
#include "nudgecast/population.hpp"

using namespace nudgecast;

namespace {
/// Engine stub whose uniform transform lands exactly on 0.5.
struct MidpointEngine {
  using result_type = std::uint64_t;
  result_type operator()() { return result_type(1) << 63; }
};
}  // namespace

TEST_CASE("reliability bands follow the education level", "[population]") {
  auto eng = rng::engine_at(5);
  for (int i = 0; i < 2000; ++i) {
    const double hi = sample_reliability(EducationLevel::high, eng);
    CHECK(hi >= 0.7);
    CHECK(hi <= 1.0);
    const double med = sample_reliability(EducationLevel::medium, eng);
    CHECK(med >= 0.4);
    CHECK(med <= 0.7);
    const double lo = sample_reliability(EducationLevel::low, eng);
    CHECK(lo >= 0.0);
    CHECK(lo <= 0.4);
  }
  MidpointEngine mid;
  CHECK_THAT(sample_reliability(EducationLevel::medium, mid),
             Catch::Matchers::WithinAbs(0.55, 1e-15));
}

TEST_CASE("credibility halving matches the worked examples", "[population]") {
  CHECK_THAT(apply_credibility_halving(0.8, {true, false, true}),
             Catch::Matchers::WithinAbs(0.2, 1e-15));
  CHECK_THAT(apply_credibility_halving(0.6, {false, true, false}),
             Catch::Matchers::WithinAbs(0.3, 1e-15));
  CHECK_THAT(apply_credibility_halving(0.3, {true, true, true}),
             Catch::Matchers::WithinAbs(0.0375, 1e-15));
  CHECK(apply_credibility_halving(0.9, {}) == 0.9);
  CHECK_THROWS_AS(apply_credibility_halving(1.5, {}), OutOfRangeError);
}

TEST_CASE("scenarios set receptivity and credibility as specified", "[population]") {
  const auto records = fixtures::synthetic_records(40, 11);
  const std::uint64_t seed = 99;
  const auto nd = build_population(records, Scenario::nd, seed);
  const auto cd = build_population(records, Scenario::cd, seed);
  const auto rd = build_population(records, Scenario::rd, seed);
  const auto crd = build_population(records, Scenario::crd, seed);

  const std::set<double> halving_ratios{1.0, 0.5, 0.25, 0.125};
  for (std::size_t v = 0; v < records.size(); ++v) {
    // Reliabilities are paired across scenarios for a shared seed.
    CHECK(nd[v].zeta == cd[v].zeta);
    CHECK(nd[v].zeta == rd[v].zeta);
    CHECK(nd[v].zeta == crd[v].zeta);
    // Receptivity draws are paired across rd and crd.
    CHECK(rd[v].b == crd[v].b);

    CHECK(nd[v].b == -1.0);
    CHECK(cd[v].b == -1.0);
    CHECK(rd[v].b >= -1.0);
    CHECK(rd[v].b <= 0.0);

    CHECK(nd[v].gamma == nd[v].zeta);
    CHECK(rd[v].gamma == rd[v].zeta);
    CHECK(cd[v].gamma <= cd[v].zeta);
    CHECK(halving_ratios.count(cd[v].gamma / cd[v].zeta) == 1);
    CHECK(crd[v].gamma == cd[v].gamma);
    CHECK(cd[v].credibility_deficit() >= 0.0);
  }

  // Bit-reproducible for equal inputs and seed.
  const auto crd2 = build_population(records, Scenario::crd, seed);
  for (std::size_t v = 0; v < records.size(); ++v) {
    CHECK(crd[v].zeta == crd2[v].zeta);
    CHECK(crd[v].b == crd2[v].b);
    CHECK(crd[v].gamma == crd2[v].gamma);
  }
}

TEST_CASE("build_population rejects out-of-range records", "[population]") {
  auto records = fixtures::synthetic_records(4, 3);
  records[2].rho0 = 1.5;
  CHECK_THROWS_AS(build_population(records, Scenario::nd, 1), OutOfRangeError);
}

TEST_CASE("initial state mirrors the seed set", "[population]") {
  auto records = fixtures::synthetic_records(112, 21, 3);
  const auto params = build_population(records, Scenario::nd, 1);
  const auto state = init_state(params);
  CHECK(state.t == 0);
  CHECK(state.n_adopters() == 3);
  CHECK_THAT(state.adopter_fraction(), Catch::Matchers::WithinAbs(3.0 / 112.0, 1e-15));
  for (std::size_t v = 0; v < params.size(); ++v) {
    CHECK((state.x[v] == 1) == params[v].is_seed);
    CHECK(state.rho[v] == params[v].rho0);
  }
}

TEST_CASE("empty and full seed sets", "[population]") {
  auto records = fixtures::synthetic_records(5, 2, 1);
  for (auto& rec : records) rec.is_seed = false;
  CHECK_THROWS_AS(init_state(build_population(records, Scenario::nd, 1)), EmptySeedSetError);
  for (auto& rec : records) rec.is_seed = true;
  CHECK(init_state(build_population(records, Scenario::nd, 1)).adopter_fraction() == 1.0);
}

TEST_CASE("agent records round-trip through the CSV format", "[population]") {
  const auto path = std::filesystem::temp_directory_path() / "agents_roundtrip.csv";
  {
    std::ofstream out(path);
    out << "id,rho0,education,gender_flag,age_flag,income_flag,is_seed\n";
    out << "0,0.25,low,1,0,1,1\n";
    out << "1,0.75,high,0,0,0,0\n";
  }
  const auto records = load_agent_records(path);
  REQUIRE(records.size() == 2);
  CHECK(records[0].rho0 == 0.25);
  CHECK(records[0].education == EducationLevel::low);
  CHECK(records[0].flags.gender_discriminated);
  CHECK_FALSE(records[0].flags.age_discriminated);
  CHECK(records[0].is_seed);
  CHECK(records[1].education == EducationLevel::high);
  CHECK_FALSE(records[1].is_seed);
}

TEST_CASE("agent record CSV errors", "[population]") {
  const auto dir = std::filesystem::temp_directory_path();
  auto write = [&](const char* name, const std::string& body) {
    const auto p = dir / name;
    std::ofstream out(p);
    out << body;
    return p;
  };
  const std::string header = "id,rho0,education,gender_flag,age_flag,income_flag,is_seed\n";
  CHECK_THROWS_AS(load_agent_records(write("agents_badhdr.csv", "id,rho\n0,1\n")), ParseError);
  CHECK_THROWS_AS(load_agent_records(write("agents_badedu.csv", header + "0,0.5,phd,0,0,0,1\n")),
                  ParseError);
  CHECK_THROWS_AS(load_agent_records(write("agents_badrho.csv", header + "0,1.5,low,0,0,0,1\n")),
                  OutOfRangeError);
  CHECK_THROWS_AS(load_agent_records(write("agents_badid.csv", header + "5,0.5,low,0,0,0,1\n")),
                  ParseError);
  CHECK_THROWS_AS(load_agent_records(write("agents_badflag.csv", header + "0,0.5,low,2,0,0,1\n")),
                  ParseError);
}
