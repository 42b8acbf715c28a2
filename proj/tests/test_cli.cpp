#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "pflab/experiments.hpp"
#include "pflab/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string binary_path() {
  const char* env = std::getenv("PFLAB_BIN");
  REQUIRE_MESSAGE(env != nullptr, "PFLAB_BIN must point at the pflab binary");
  return env;
}

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
  const std::string command = binary_path() + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buffer[4096];
  while (std::fgets(buffer, sizeof(buffer), pipe) != nullptr) result.output += buffer;
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("pflab_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("sweep: config errors and resource cap exit codes") {
  const auto dir = fresh_dir("exitcodes");
  const auto missing_model = run_cli("sweep --n 4 --kind fixed_r --r 10 "
                                     "--grid-log t:0.1:1:3 --out " +
                                     (dir / "x.csv").string());
  CHECK(missing_model.exit_code == 2);
  CHECK(missing_model.output.find("model") != std::string::npos);

  const auto over_cap = run_cli("sweep --model heisenberg1d --n 20 --seed 1 "
                                "--kind fixed_r --r 10 --grid-log t:0.1:1:3 --out " +
                                (dir / "y.csv").string());
  CHECK(over_cap.exit_code == 3);

  const auto bad_grid = run_cli("sweep --model heisenberg1d --n 3 --seed 1 "
                                "--kind fixed_t --t 5 --grid-log t:0.1:1:3 --out " +
                                (dir / "z.csv").string());
  CHECK(bad_grid.exit_code == 2);
}

TEST_CASE("sweep writes CSV plus metadata and is thread-count invariant") {
  const auto dir = fresh_dir("sweep");
  const std::string csv1 = (dir / "a.csv").string();
  const std::string csv2 = (dir / "b.csv").string();
  const std::string base = "sweep --model heisenberg1d --n 3 --seed 11 "
                           "--kind fixed_r --r 32 --grid-log t:0.2:5:6 --orders 1,2 ";

  const auto first = run_cli(base + "--threads 1 --out " + csv1);
  REQUIRE_MESSAGE(first.exit_code == 0, first.output);
  const auto second = run_cli(base + "--threads 2 --out " + csv2);
  REQUIRE(second.exit_code == 0);

  const std::string text1 = slurp(csv1);
  CHECK(text1 == slurp(csv2));  // byte-identical across thread counts

  const auto records = pflab::records_from_csv(text1);
  CHECK(records.size() == 12);

  const json meta = json::parse(slurp(csv1 + ".meta.json"));
  CHECK(meta.at("model").at("n") == 3);
  CHECK(meta.at("model").contains("disorder"));
  CHECK(meta.at("coefficients").contains("c2"));
  CHECK(meta.at("config").at("threads") == 1);
  CHECK(meta.at("rng") == pflab::kDisorderRngId);
}

TEST_CASE("config file merging honors flag precedence") {
  const auto dir = fresh_dir("config");
  const fs::path cfg = dir / "run.json";
  {
    std::ofstream out(cfg);
    out << R"({"model": {"type": "heisenberg1d", "n": 3, "seed": 4},
               "kind": "fixed_r", "r": 8, "grid_log": "t:0.5:2:3",
               "out": ")" << (dir / "from_config.csv").string() << R"("})";
  }
  const auto from_config = run_cli("sweep --config " + cfg.string());
  REQUIRE_MESSAGE(from_config.exit_code == 0, from_config.output);
  CHECK(fs::exists(dir / "from_config.csv"));

  // --out flag overrides the config file value
  const auto overridden =
      run_cli("sweep --config " + cfg.string() + " --out " + (dir / "flag.csv").string());
  REQUIRE(overridden.exit_code == 0);
  CHECK(fs::exists(dir / "flag.csv"));
  const json meta = json::parse(slurp((dir / "flag.csv").string() + ".meta.json"));
  CHECK(meta.at("config").at("out") == (dir / "flag.csv").string());
}

TEST_CASE("model subcommand reports coefficients") {
  const auto result = run_cli("model --model custom --n 1 --h1 '1.0 X' --h2 '1.0 Z'");
  REQUIRE_MESSAGE(result.exit_code == 0, result.output);
  const json report = json::parse(result.output);
  CHECK(report.at("coefficients").at("c1") == doctest::Approx(1.0));
  CHECK(report.at("coefficients").at("c2") == doctest::Approx(1.0));
  CHECK(report.at("coefficients").at("c3") == doctest::Approx(0.5));
}

TEST_CASE("verify passes on a healthy model and fails the negative control") {
  const auto dir = fresh_dir("verify");
  const std::string report = (dir / "report.json").string();
  const auto ok = run_cli("verify --model heisenberg1d --n 4 --seed 2 --json " + report);
  REQUIRE_MESSAGE(ok.exit_code == 0, ok.output);
  CHECK(ok.output.find("FAIL") == std::string::npos);
  const json parsed = json::parse(slurp(report));
  CHECK(parsed.at("all_passed") == true);

  // corrupting C2 must trip the first-order bound check and name it
  const auto corrupted =
      run_cli("verify --model heisenberg1d --n 4 --seed 2 --test-scale-c2 0.001");
  CHECK(corrupted.exit_code == 1);
  CHECK(corrupted.output.find("bound_pf1") != std::string::npos);
}

TEST_CASE("verify accepts a commuting custom model") {
  const auto result =
      run_cli("verify --model custom --n 2 --h1 '1.0 ZI' --h2 '1.0 IZ'");
  REQUIRE_MESSAGE(result.exit_code == 0, result.output);
}

TEST_CASE("fit and plot round trip through CSV files") {
  const auto dir = fresh_dir("fitplot");

  // Synthetic records from the fitted form itself: alpha=2, beta=4.
  pflab::BoundCoefficients coeffs;
  coeffs.norm_h1 = 10.0;
  coeffs.norm_h2 = 12.0;
  coeffs.c1 = 10.0;
  coeffs.c2 = 20.0;
  coeffs.c3 = 30.0;
  coeffs.s = {200.0, 260.0};
  coeffs.clamp = 2.0;
  std::vector<pflab::ErrorRecord> records;
  for (double t : pflab::log_grid(0.5, 200.0, 24)) {
    pflab::ErrorRecord rec;
    rec.n = 4;
    rec.t = t;
    rec.r = 1000;
    rec.dt = t / 1000.0;
    rec.order = 1;
    rec.empirical = pflab::fit_model_value(coeffs, 2.0, 4.0, t, rec.r);
    rec.bound_pf1 = pflab::bound_pf1(coeffs, t, rec.r);
    rec.bound_main = pflab::bound_main(coeffs, t, rec.r);
    rec.term_boundary = pflab::boundary_term(coeffs, t, rec.r);
    rec.term_bulk = pflab::bulk_term(coeffs, t, rec.r);
    rec.bound_pf2 = pflab::bound_pf2(coeffs, t, rec.r);
    records.push_back(rec);
  }
  const fs::path csv = dir / "panel.csv";
  pflab::write_text_file(csv, pflab::records_to_csv(records));
  json meta;
  meta["coefficients"] = pflab::coefficients_to_json(coeffs);
  pflab::write_text_file(csv.string() + ".meta.json", meta.dump(2));

  const fs::path fit_json = dir / "fit.json";
  const auto fit = run_cli("fit " + csv.string() + " --out " + fit_json.string());
  REQUIRE_MESSAGE(fit.exit_code == 0, fit.output);
  const json fit_parsed = json::parse(slurp(fit_json));
  CHECK(fit_parsed.at("alpha").get<double>() == doctest::Approx(2.0).epsilon(0.01));
  CHECK(fit_parsed.at("beta").get<double>() == doctest::Approx(4.0).epsilon(0.01));
  CHECK(fit_parsed.at("degenerate") == false);

  const fs::path svg = dir / "panel.svg";
  const auto plot = run_cli("plot --csv " + csv.string() + " --out " + svg.string() +
                            " --fit " + fit_json.string());
  REQUIRE_MESSAGE(plot.exit_code == 0, plot.output);
  const std::string svg_text = slurp(svg);
  CHECK(svg_text.find("class=\"series empirical\"") != std::string::npos);
  CHECK(svg_text.find("class=\"series bound_main\"") != std::string::npos);
  CHECK(svg_text.find("class=\"series fit\"") != std::string::npos);

  // joint fit across two CSVs sharing one model
  const fs::path csv_b = dir / "panel_b.csv";
  std::vector<pflab::ErrorRecord> records_b;
  for (double raw : pflab::log_grid(200, 20000, 12)) {
    pflab::ErrorRecord rec;
    rec.n = 4;
    rec.t = 50.0;
    rec.r = std::llround(raw);
    rec.dt = rec.t / static_cast<double>(rec.r);
    rec.order = 1;
    rec.empirical = pflab::fit_model_value(coeffs, 2.0, 4.0, rec.t, rec.r);
    records_b.push_back(rec);
  }
  pflab::write_text_file(csv_b, pflab::records_to_csv(records_b));
  pflab::write_text_file(csv_b.string() + ".meta.json", meta.dump(2));
  const auto joint = run_cli("fit " + csv.string() + " " + csv_b.string() + " --out " +
                             (dir / "joint.json").string());
  REQUIRE_MESSAGE(joint.exit_code == 0, joint.output);
  const json joint_parsed = json::parse(slurp(dir / "joint.json"));
  CHECK(joint_parsed.at("alpha").get<double>() == doctest::Approx(2.0).epsilon(0.01));
  CHECK(joint_parsed.at("points_used").get<int>() > 24);

  // CSVs from different models cannot be fit jointly
  json other_meta = meta;
  other_meta["coefficients"]["c2"] = 999.0;
  const fs::path csv_c = dir / "panel_c.csv";
  pflab::write_text_file(csv_c, pflab::records_to_csv(records_b));
  pflab::write_text_file(csv_c.string() + ".meta.json", other_meta.dump(2));
  CHECK(run_cli("fit " + csv.string() + " " + csv_c.string()).exit_code == 2);

  // empty CSV is a config error
  const fs::path empty = dir / "empty.csv";
  pflab::write_text_file(empty, "");
  CHECK(run_cli("fit " + empty.string()).exit_code == 2);
  CHECK(run_cli("plot --csv " + empty.string() + " --out " + (dir / "e.svg").string())
            .exit_code == 2);
}
