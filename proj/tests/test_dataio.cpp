#include <catch2/catch_amalgamated.hpp>
#include <fstream>
#include <sstream>

#include "bhc/dataio.hpp"
#include "bhc/init.hpp"
#include "oracles.hpp"

using bhc::Matrix;
using Catch::Approx;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kGolden = std::string(BHC_SOURCE_DIR) + "/tests/golden/";
const std::string kData = std::string(BHC_SOURCE_DIR) + "/data/";

}  // namespace

TEST_CASE("tsplib parsing") {
  SECTION("three-node golden file") {
    const Matrix a = bhc::parse_tsplib(slurp(kGolden + "tsplib_triangle.tsp"));
    REQUIRE(a.rows() == 3);
    REQUIRE(a.cols() == 2);
    CHECK(a(2, 1) == 4.0);
  }
  SECTION("five-node golden file with decimal coordinates") {
    const Matrix a = bhc::parse_tsplib(slurp(kGolden + "tsplib_square5.tsp"));
    REQUIRE(a.rows() == 5);
    CHECK(a(4, 0) == 5.0);
  }
  SECTION("eil76 has 76 nodes in the plane") {
    const Matrix a = bhc::parse_tsplib(slurp(kData + "eil76.tsp"));
    CHECK(a.rows() == 76);
    CHECK(a.cols() == 2);
  }
  SECTION("pr1002 has 1002 nodes") {
    const Matrix a = bhc::parse_tsplib(slurp(kData + "pr1002.tsp"));
    CHECK(a.rows() == 1002);
    CHECK(a.cols() == 2);
  }
  SECTION("missing section is a parse error") {
    CHECK_THROWS_AS(bhc::parse_tsplib("NAME : x\nDIMENSION : 2\n"), bhc::ParseError);
  }
  SECTION("non-numeric coordinate reports its line") {
    try {
      bhc::parse_tsplib("DIMENSION : 1\nNODE_COORD_SECTION\n1 foo 2\n");
      FAIL("expected ParseError");
    } catch (const bhc::ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SECTION("index gaps rejected") {
    CHECK_THROWS_AS(bhc::parse_tsplib("NODE_COORD_SECTION\n1 0 0\n3 1 1\n"), bhc::ParseError);
  }
  SECTION("dimension mismatch rejected") {
    CHECK_THROWS_AS(bhc::parse_tsplib("DIMENSION : 3\nNODE_COORD_SECTION\n1 0 0\n2 1 1\n"),
                    bhc::ParseError);
  }
  SECTION("only EUC_2D edge weights accepted") {
    try {
      bhc::parse_tsplib("EDGE_WEIGHT_TYPE : GEO\nNODE_COORD_SECTION\n1 0 0\n");
      FAIL("expected ParseError");
    } catch (const bhc::ParseError& e) {
      CHECK(std::string(e.what()).find("GEO") != std::string::npos);
    }
  }
}

TEST_CASE("csv parsing") {
  SECTION("plain numeric rows") {
    const Matrix a = bhc::parse_csv("1,2\n3,4\n");
    REQUIRE(a.rows() == 2);
    CHECK(a(1, 0) == 3.0);
  }
  SECTION("golden files") {
    const Matrix plain = bhc::parse_csv(slurp(kGolden + "csv_plain.csv"));
    CHECK(plain.rows() == 2);
    CHECK(plain.cols() == 3);
    const Matrix withheader = bhc::parse_csv(slurp(kGolden + "csv_header.csv"));
    CHECK(withheader.rows() == 3);
    CHECK(withheader(0, 0) == 1.5);
  }
  SECTION("single header line skipped, second rejected") {
    CHECK_NOTHROW(bhc::parse_csv("x,y\n1,2\n"));
    CHECK_THROWS_AS(bhc::parse_csv("x,y\nfoo,bar\n1,2\n"), bhc::ParseError);
  }
  SECTION("ragged rows rejected with the line number") {
    try {
      bhc::parse_csv("1,2\n3,4,5\n");
      FAIL("expected ParseError");
    } catch (const bhc::ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SECTION("fuzzed serialize/parse round-trip is exact") {
    oracle::Gen gen(211);
    Matrix a(1000, 5);
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = gen.uniform(-1e6, 1e6);
    const Matrix b = bhc::parse_csv(bhc::to_csv(a));
    CHECK(a == b);
  }
}

TEST_CASE("report round-trip") {
  Matrix a(10, 2);
  oracle::Gen gen(223);
  for (std::size_t i = 0; i < 5; ++i) {
    a(i, 0) = gen.uniform(-1, 1);
    a(i, 1) = gen.uniform(-1, 1);
    a(i + 5, 0) = 15 + gen.uniform(-1, 1);
    a(i + 5, 1) = gen.uniform(-1, 1);
  }
  const bhc::ProblemFamily fam(a, 2, bhc::Model::two);
  const auto sched = bhc::ContinuationSchedule::from_sigmas(1e-4, 15.0, 4.0, 0.5, 6, 8);
  auto res = bhc::multi_start(fam, sched, 3, 99);
  res.best.radial_profile = {{0.1, 42.0}, {0.2, 41.5}};

  const std::string text = bhc::format_report(res.best);
  const bhc::SolveReport parsed = bhc::parse_report(text);

  CHECK(parsed.model == res.best.model);
  CHECK(parsed.seed == res.best.seed);
  CHECK(parsed.start_index == res.best.start_index);
  CHECK(parsed.gamma == res.best.gamma);
  CHECK(parsed.k == res.best.k);
  CHECK(parsed.m == res.best.m);
  CHECK(parsed.n == res.best.n);
  CHECK(parsed.schedule.lambda0 == res.best.schedule.lambda0);
  CHECK(parsed.schedule.sigma2 == res.best.schedule.sigma2);
  CHECK(parsed.schedule.n_outer == res.best.schedule.n_outer);
  CHECK(parsed.snapped_cost == res.best.snapped_cost);
  CHECK(parsed.snapped.cluster_centers == res.best.snapped.cluster_centers);
  CHECK(parsed.snapped.total_center == res.best.snapped.total_center);
  CHECK(parsed.snapped.assignment == res.best.snapped.assignment);
  CHECK(parsed.final_centers == res.best.final_centers);
  CHECK(parsed.radial_profile == res.best.radial_profile);
  REQUIRE(parsed.outer.size() == res.best.outer.size());
  for (std::size_t i = 0; i < parsed.outer.size(); ++i) {
    CHECK(parsed.outer[i].lambda == res.best.outer[i].lambda);
    CHECK(parsed.outer[i].mu == res.best.outer[i].mu);
    CHECK(parsed.outer[i].objective == res.best.outer[i].objective);
  }

  SECTION("serialization is stable") {
    CHECK(bhc::format_report(parsed).substr(0, text.find("outer_trace:")) ==
          text.substr(0, text.find("outer_trace:")));
  }
  SECTION("wall time never enters the file") {
    CHECK(text.find("wall") == std::string::npos);
  }
  SECTION("report schema names the snapped cost") {
    CHECK(text.find("snapped_cost: ") != std::string::npos);
  }
}

TEST_CASE("report with an empty trace") {
  bhc::SolveReport r;
  r.k = 2;
  r.m = 0;
  r.n = 0;
  const std::string text = bhc::format_report(r);
  const auto parsed = bhc::parse_report(text);
  CHECK(parsed.outer.empty());
  CHECK(parsed.k == 2);
}

TEST_CASE("points file dispatch") {
  CHECK(bhc::read_points_file(kGolden + "tsplib_triangle.tsp").rows() == 3);
  CHECK(bhc::read_points_file(kGolden + "csv_plain.csv").rows() == 2);
  CHECK_THROWS_AS(bhc::read_points_file("/nonexistent/nowhere.csv"), bhc::IoError);
}
