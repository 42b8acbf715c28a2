#include <doctest.h>

#include <charconv>
#include <cmath>

#include "pflab/io.hpp"
#include "pflab/svg.hpp"

using namespace pflab;

namespace {

ErrorRecord sample_record() {
  ErrorRecord rec;
  rec.n = 10;
  rec.seed = 7;
  rec.t = 0.1 * 3;  // not exactly representable: exercises round-trip formatting
  rec.r = 10000;
  rec.dt = rec.t / 10000.0;
  rec.order = 1;
  rec.empirical = 1.2345678901234567e-5;
  rec.bound_pf1 = 2.0e-4;
  rec.bound_main = 1.5e-4;
  rec.term_boundary = 1.0e-4;
  rec.term_bulk = 0.5e-4;
  rec.bound_pf2 = 0.7e-4;
  rec.unitarity_drift = 3.2e-13;
  return rec;
}

}  // namespace

TEST_CASE("format_double is shortest round-trip") {
  for (double v : {0.1, 1.0 / 3.0, 1e-17, -12345.6789, 0.0, 2.0, 5e-324}) {
    const std::string text = format_double(v);
    double parsed = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), parsed);
    REQUIRE(res.ec == std::errc());
    CHECK(parsed == v);
  }
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("csv round trip preserves every field bit-exactly") {
  std::vector<ErrorRecord> records{sample_record()};
  records.push_back(sample_record());
  records[1].order = 2;
  records[1].empirical = 3.0e-9;

  const std::string csv = records_to_csv(records);
  CHECK(csv.rfind(kCsvHeader, 0) == 0);

  const auto parsed = records_from_csv(csv);
  REQUIRE(parsed.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(parsed[i].n == records[i].n);
    CHECK(parsed[i].seed == records[i].seed);
    CHECK(parsed[i].t == records[i].t);
    CHECK(parsed[i].r == records[i].r);
    CHECK(parsed[i].dt == records[i].dt);
    CHECK(parsed[i].order == records[i].order);
    CHECK(parsed[i].empirical == records[i].empirical);
    CHECK(parsed[i].bound_pf1 == records[i].bound_pf1);
    CHECK(parsed[i].bound_main == records[i].bound_main);
    CHECK(parsed[i].term_boundary == records[i].term_boundary);
    CHECK(parsed[i].term_bulk == records[i].term_bulk);
    CHECK(parsed[i].bound_pf2 == records[i].bound_pf2);
    CHECK(parsed[i].unitarity_drift == records[i].unitarity_drift);
  }
}

TEST_CASE("csv parsing rejects malformed input") {
  CHECK_THROWS_AS(records_from_csv(""), ParseError);
  CHECK_THROWS_AS(records_from_csv("a,b,c\n1,2,3\n"), ParseError);
  CHECK_THROWS_AS(records_from_csv(std::string(kCsvHeader) + "\n"), ParseError);
  CHECK_THROWS_AS(records_from_csv(std::string(kCsvHeader) + "\n1,2,3\n"), ParseError);
  CHECK_THROWS_AS(
      records_from_csv(std::string(kCsvHeader) +
                       "\n2,0,1,4,0.25,1,x,0,0,0,0,0,0\n"),
      ParseError);
}

TEST_CASE("coefficients json round trip") {
  BoundCoefficients coeffs;
  coeffs.norm_h1 = 15.2;
  coeffs.norm_h2 = 12.94;
  coeffs.c1 = 12.94;
  coeffs.c2 = 21.4;
  coeffs.c3 = 38.4;
  coeffs.s = {309.9, 305.8};
  coeffs.norm_kind = NormKind::spectral;
  coeffs.clamp = 2.0;

  const BoundCoefficients back = coefficients_from_json(coefficients_to_json(coeffs));
  CHECK(back.c1 == coeffs.c1);
  CHECK(back.c2 == coeffs.c2);
  CHECK(back.c3 == coeffs.c3);
  CHECK(back.s == coeffs.s);
  CHECK(back.clamp == coeffs.clamp);
  CHECK(back.norm_kind == coeffs.norm_kind);
}

TEST_CASE("fit result json round trip") {
  FitResult fit;
  fit.alpha = 2.53;
  fit.beta = 5.03;
  fit.residual = 0.08;
  fit.points_used = 120;
  fit.degenerate = false;

  const FitResult back = fit_result_from_json(fit_result_to_json(fit));
  CHECK(back.alpha == fit.alpha);
  CHECK(back.beta == fit.beta);
  CHECK(back.residual == fit.residual);
  CHECK(back.points_used == fit.points_used);
  CHECK(back.degenerate == fit.degenerate);
}

TEST_CASE("svg renders one polyline per series with straight power laws") {
  PlotSeries s;
  s.name = "empirical";
  s.markers = true;
  for (double x : {1.0, 10.0, 100.0, 1000.0}) s.points.push_back({x, 5.0 / (x * x)});
  const std::vector<PlotSeries> series{s};
  const std::string svg = render_loglog_svg("test", "t", "error", series);

  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("class=\"series empirical\"") != std::string::npos);
  std::size_t markers = 0, from = 0;
  while ((from = svg.find("class=\"marker", from)) != std::string::npos) {
    ++markers;
    from += 1;
  }
  CHECK(markers == 4);

  // A power law must map to equally spaced collinear pixel coordinates.
  const std::size_t attr = svg.find("points=\"");
  REQUIRE(attr != std::string::npos);
  const std::size_t end = svg.find('"', attr + 8);
  std::string points = svg.substr(attr + 8, end - attr - 8);
  std::vector<std::pair<double, double>> xy;
  std::size_t pos = 0;
  while (pos < points.size()) {
    const std::size_t comma = points.find(',', pos);
    const std::size_t space = points.find(' ', comma);
    if (comma == std::string::npos) break;
    xy.push_back({std::stod(points.substr(pos, comma - pos)),
                  std::stod(points.substr(comma + 1, space - comma - 1))});
    pos = space + 1;
  }
  REQUIRE(xy.size() == 4);
  const double slope0 = (xy[1].second - xy[0].second) / (xy[1].first - xy[0].first);
  for (std::size_t i = 1; i + 1 < xy.size(); ++i) {
    const double slope = (xy[i + 1].second - xy[i].second) /
                         (xy[i + 1].first - xy[i].first);
    CHECK(slope == doctest::Approx(slope0).epsilon(1e-9));
  }
}
