#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "cvqd/io.hpp"
#include "cvqd/sweep.hpp"

namespace fs = std::filesystem;

namespace {

cvqd::SweepSpec small_spec(cvqd::ScenarioId id, std::vector<int> blocks, double from,
                           double to, int steps) {
  cvqd::SweepSpec spec;
  spec.scenario = cvqd::scenario_preset(id);
  spec.blocks = std::move(blocks);
  spec.grid = {from, to, steps};
  return spec;
}

std::string slurp(const fs::path& path) {
  std::ifstream file(path, std::ios::binary);
  REQUIRE(file.good());
  return {std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>()};
}

int count_substrings(const std::string& text, const std::string& needle) {
  int count = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size()))
    ++count;
  return count;
}

}  // namespace

TEST_CASE("scenario presets carry the caption overrides") {
  const double two_pi = 2.0 * M_PI;
  const cvqd::Scenario a = cvqd::scenario_preset(cvqd::ScenarioId::A);
  CHECK(a.params.cavity_a.kappa == doctest::Approx(14 * two_pi).epsilon(1e-15));
  CHECK(a.params.cavity_a.mu == doctest::Approx(8 * two_pi).epsilon(1e-15));
  CHECK(a.params.cavity_a.S == doctest::Approx(8 * two_pi).epsilon(1e-15));
  CHECK(a.params.cavity_a.gamma_m == doctest::Approx(100 * two_pi).epsilon(1e-15));
  CHECK(a.params.cavity_a.gamma_sm == doctest::Approx(100 * two_pi).epsilon(1e-15));
  CHECK(a.params.cavity_a.Omega == doctest::Approx(10 * two_pi).epsilon(1e-15));
  CHECK(a.params.cavity_a.omega_m == 1.0);
  CHECK(a.params.cavity_a.nbar == 0.0);
  CHECK(a.params.N_sq == 0.0);
  CHECK(a.params.J == 1.0);
  CHECK(a.params.M_sq == 0.0);

  const cvqd::Scenario b = cvqd::scenario_preset(cvqd::ScenarioId::B);
  CHECK(b.params.cavity_a.nbar == 836.0);
  CHECK(b.params.cavity_b.nbar == 836.0);
  const cvqd::Scenario c = cvqd::scenario_preset(cvqd::ScenarioId::C);
  CHECK(c.params.J == 0.5);
  const cvqd::Scenario d = cvqd::scenario_preset(cvqd::ScenarioId::D);
  CHECK(d.params.cavity_a.nbar == 14642.0);
  CHECK(d.params.N_sq == 0.1);
  CHECK(d.params.M_sq == doctest::Approx(std::sqrt(0.11)).epsilon(1e-15));
}

TEST_CASE("run_sweep grid contract and row ordering") {
  const auto rows = cvqd::run_sweep(small_spec(cvqd::ScenarioId::A, {1, 4}, 0.0, 1.0, 2), 1);
  REQUIRE(rows.size() == 4);  // 2 blocks x 2 grid points
  CHECK(rows[0].block_id == 1);
  CHECK(rows[1].block_id == 1);
  CHECK(rows[2].block_id == 4);
  CHECK(rows[3].block_id == 4);
  CHECK(rows[0].delta_over_omega_m == 0.0);
  CHECK(rows[1].delta_over_omega_m == 1.0);
  for (const auto& row : rows) {
    CHECK(row.stable);
    CHECK(row.discord.has_value());
  }
}

TEST_CASE("unstable grid points carry flags and no values") {
  const auto rows = cvqd::run_sweep(small_spec(cvqd::ScenarioId::A, {1}, 5.0, 5.5, 2), 1);
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    CHECK_FALSE(row.stable);
    CHECK_FALSE(row.discord.has_value());
    CHECK_FALSE(row.b1.has_value());
  }
}

TEST_CASE("identical cavities give identical discord series for mirror blocks") {
  for (auto id : {cvqd::ScenarioId::A, cvqd::ScenarioId::B, cvqd::ScenarioId::C,
                  cvqd::ScenarioId::D}) {
    const auto rows =
        cvqd::run_sweep(small_spec(id, {1, 2, 5, 6, 7, 8}, 0.0, 2.0, 21), 0);
    const int per_block = 21;
    auto series = [&](int block) {
      std::vector<cvqd::OutputRow> out;
      for (const auto& row : rows)
        if (row.block_id == block) out.push_back(row);
      REQUIRE(out.size() == per_block);
      return out;
    };
    for (auto [left, right] : {std::pair{1, 2}, {5, 6}, {7, 8}}) {
      const auto lhs = series(left), rhs = series(right);
      for (int i = 0; i < per_block; ++i) {
        REQUIRE(lhs[i].stable == rhs[i].stable);
        if (!lhs[i].stable) continue;
        REQUIRE(*lhs[i].discord == doctest::Approx(*rhs[i].discord).epsilon(1e-9));
        REQUIRE(*lhs[i].s_minus == doctest::Approx(*rhs[i].s_minus).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("pipeline golden snapshot: scenario a, delta/omega_m = 1.5, block 1") {
  // frozen from a validated run, cross-checked against an independent
  // SciPy transcription of the whole pipeline (agreement ~1e-11)
  const auto rows = cvqd::run_sweep(small_spec(cvqd::ScenarioId::A, {1}, 1.5, 2.0, 2), 1);
  REQUIRE(rows[0].delta_over_omega_m == 1.5);
  REQUIRE(rows[0].stable);
  CHECK(*rows[0].b1 == doctest::Approx(0.87329377761895555).epsilon(1e-9));
  CHECK(*rows[0].b2 == doctest::Approx(0.53379139882797322).epsilon(1e-9));
  CHECK(*rows[0].b3 == doctest::Approx(-0.034826428882653589).epsilon(1e-9));
  CHECK(*rows[0].b4 == doctest::Approx(0.21733246447834925).epsilon(1e-9));
  CHECK(*rows[0].s_minus == doctest::Approx(0.43507543131864151).epsilon(1e-9));
  CHECK(*rows[0].s_plus == doctest::Approx(1.0715137366102776).epsilon(1e-9));
  CHECK(*rows[0].s_pt_minus == doctest::Approx(0.40716287663214673).epsilon(1e-9));
  CHECK(*rows[0].s_pt_plus == doctest::Approx(1.1449700546760475).epsilon(1e-9));
  CHECK(*rows[0].discord == doctest::Approx(-0.10519174399686837).epsilon(1e-9));
  CHECK(rows[0].clamped);
}

TEST_CASE("sweep output is bit-identical across worker counts") {
  const cvqd::SweepSpec spec =
      small_spec(cvqd::ScenarioId::A, {1, 2, 3, 4, 5, 6, 7, 8}, 0.0, 3.0, 31);
  const std::string csv1 = cvqd::csv_string(cvqd::run_sweep(spec, 1));
  const std::string csv4 = cvqd::csv_string(cvqd::run_sweep(spec, 4));
  const std::string csv1b = cvqd::csv_string(cvqd::run_sweep(spec, 1));
  CHECK(csv1 == csv4);
  CHECK(csv1 == csv1b);
  CHECK(cvqd::svg_string(cvqd::run_sweep(spec, 3)) ==
        cvqd::svg_string(cvqd::run_sweep(spec, 1)));
}

TEST_CASE("golden determinism: scenario a, block 4, 51 points") {
  const cvqd::SweepSpec spec = small_spec(cvqd::ScenarioId::A, {4}, 0.0, 2.0, 51);
  const std::string first = cvqd::csv_string(cvqd::run_sweep(spec, 2));
  const std::string second = cvqd::csv_string(cvqd::run_sweep(spec, 5));
  CHECK(first == second);
  CHECK(count_substrings(first, "\n") == 52);  // header + 51 rows
}

TEST_CASE("csv layout") {
  CHECK(cvqd::csv_string({}) == std::string(cvqd::kCsvHeader) + "\n");

  cvqd::OutputRow row;
  row.delta_over_omega_m = 0.05;
  row.block_id = 3;
  row.stable = false;
  const std::string one = cvqd::csv_string({row});
  CHECK(count_substrings(one, "\n") == 2);
  CHECK(one.find("0.05,3,,,,,,,,,,0,0\n") != std::string::npos);

  row.stable = true;
  row.clamped = true;
  row.discord = 0.123456789012345;
  row.s_minus = 0.5;
  row.s_plus = 1.0;
  row.s_pt_minus = 0.25;
  row.s_pt_plus = 2.0;
  row.b1 = 1.0 / 3;
  row.b2 = 0.25;
  row.b3 = -0.125;
  row.b4 = 0.0625;
  const std::string full = cvqd::csv_string({row});
  CHECK(full.find("0.05,3,0.123456789012,0.5,1,0.25,2,0.333333333333,0.25,-0.125,0.0625,1,1\n") !=
        std::string::npos);
}

TEST_CASE("json emission carries nulls for missing values") {
  const cvqd::SweepSpec spec = small_spec(cvqd::ScenarioId::A, {1}, 0.0, 5.0, 3);
  const auto rows = cvqd::run_sweep(spec, 1);
  const nlohmann::json doc = nlohmann::json::parse(cvqd::json_string(rows, spec));
  CHECK(doc["scenario"] == "a");
  CHECK(doc["variant"] == "standard");
  REQUIRE(doc["rows"].size() == 3);
  CHECK(doc["rows"][0]["discord"].is_number());
  CHECK(doc["rows"][2]["discord"].is_null());  // delta = 5 is unstable
  CHECK(doc["rows"][2]["stable"] == false);
}

TEST_CASE("svg contract") {
  const auto rows = cvqd::run_sweep(small_spec(cvqd::ScenarioId::A, {1}, 0.0, 1.0, 2), 1);
  const std::string svg = cvqd::svg_string(rows);
  CHECK(count_substrings(svg, "<polyline") == 1);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);  // reference line
  CHECK(svg.find("\xCE\x94/\xCF\x89_m") != std::string::npos);
  CHECK(svg.find(">D<") != std::string::npos);
  CHECK(svg.find("<script") == std::string::npos);

  // a gap in the middle splits the block curve into two polylines
  std::vector<cvqd::OutputRow> gappy;
  for (int i = 0; i < 5; ++i) {
    cvqd::OutputRow row;
    row.delta_over_omega_m = i;
    row.block_id = 1;
    row.stable = i != 2;
    if (row.stable) row.discord = 0.1 * i;
    gappy.push_back(row);
  }
  CHECK(count_substrings(cvqd::svg_string(gappy), "<polyline") == 2);
}

TEST_CASE("config parsing: minimal, defaults and errors") {
  const cvqd::SweepSpec spec = cvqd::parse_config(
      "# comment\n"
      "[scenario]\n"
      "id = a\n"
      "[grid]\n"
      "from = 0\n"
      "to = 15\n"
      "steps = 301\n");
  CHECK(spec.scenario == cvqd::scenario_preset(cvqd::ScenarioId::A));
  CHECK(spec.blocks == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8});
  CHECK(spec.variant == cvqd::DiscordVariant::Standard);
  CHECK(spec.grid == cvqd::GridSpec{0.0, 15.0, 301});

  CHECK_THROWS_WITH_AS(cvqd::parse_config("[scenario]\nfoo = 1\n"),
                       doctest::Contains("foo"), cvqd::ValidationError);
  CHECK_THROWS_AS(cvqd::parse_config("[scenario]\nid = z\n"), cvqd::ValidationError);
  CHECK_THROWS_AS(cvqd::parse_config("[shenanigans]\n"), cvqd::ValidationError);
  CHECK_THROWS_AS(cvqd::parse_config("[scenario]\nid = a\nid = b\n"),
                  cvqd::ValidationError);
  CHECK_THROWS_AS(cvqd::parse_config("[scenario]\nkappa = 3\n"), cvqd::ValidationError);

  try {
    cvqd::parse_config("[grid]\nfrom = zero\n");
    FAIL("expected ParseError");
  } catch (const cvqd::ParseError& e) {
    CHECK(e.line == 2);
  }
  try {
    cvqd::parse_config("[grid]\nsteps 12\n");
    FAIL("expected ParseError");
  } catch (const cvqd::ParseError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("config overrides and custom scenarios") {
  const cvqd::SweepSpec spec = cvqd::parse_config(
      "[scenario]\n"
      "id = b\n"
      "blocks = 4, 1\n"
      "variant = literal-paper\n"
      "J = 0.25\n"
      "N = 0.3\n"
      "[grid]\n"
      "from = 1\n"
      "to = 2\n"
      "steps = 5\n"
      "[outputs]\n"
      "csv = /tmp/out.csv\n");
  CHECK(spec.scenario.id == cvqd::ScenarioId::B);
  CHECK(spec.scenario.params.cavity_a.nbar == 836.0);
  CHECK(spec.scenario.params.J == 0.25);
  CHECK(spec.scenario.params.N_sq == 0.3);
  CHECK(spec.scenario.params.M_sq == doctest::Approx(std::sqrt(0.3 * 1.3)).epsilon(1e-15));
  CHECK(spec.blocks == std::vector<int>{1, 4});
  CHECK(spec.variant == cvqd::DiscordVariant::LiteralPaper);
  CHECK(spec.outputs.csv == "/tmp/out.csv");

  const cvqd::SweepSpec custom = cvqd::parse_config(
      "[scenario]\n"
      "id = custom\n"
      "omega_m = 1\n"
      "kappa = 20\n"
      "gamma_m = 3\n"
      "gamma_sm = 4\n"
      "Omega = 5\n"
      "mu = 6\n"
      "S = 7\n"
      "nbar = 2\n"
      "J = 0.5\n");
  CHECK(custom.scenario.id == cvqd::ScenarioId::Custom);
  CHECK(custom.scenario.params.cavity_a.kappa == 20.0);
  CHECK(custom.scenario.params.cavity_b.S == 7.0);

  // custom requires the full rate set
  CHECK_THROWS_AS(cvqd::parse_config("[scenario]\nid = custom\nkappa = 20\n"),
                  cvqd::ValidationError);
}

TEST_CASE("config round-trip is the identity on representable specs") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const cvqd::ScenarioId ids[] = {cvqd::ScenarioId::A, cvqd::ScenarioId::B,
                                  cvqd::ScenarioId::C, cvqd::ScenarioId::D,
                                  cvqd::ScenarioId::Custom};
  for (int trial = 0; trial < 50; ++trial) {
    cvqd::SweepSpec spec;
    const cvqd::ScenarioId id = ids[trial % 5];
    spec.scenario = cvqd::scenario_preset(id);
    cvqd::SystemParams& params = spec.scenario.params;
    if (id == cvqd::ScenarioId::Custom) {
      params.cavity_a.kappa = params.cavity_b.kappa = 1.0 + 30 * unit(rng);
      params.cavity_a.mu = params.cavity_b.mu = 10 * unit(rng);
      params.cavity_a.S = params.cavity_b.S = 10 * unit(rng);
      params.cavity_a.gamma_m = params.cavity_b.gamma_m = 5 * unit(rng);
    }
    params.cavity_a.nbar = params.cavity_b.nbar = std::floor(1000 * unit(rng));
    params.N_sq = 0.5 * unit(rng);
    params.M_sq = cvqd::ideal_squeezing_m(params.N_sq) * unit(rng);
    params.J = unit(rng);
    spec.blocks = {1, 3, 8};
    spec.grid = {unit(rng), 1.0 + 14 * unit(rng), 2 + trial};
    spec.variant = trial % 2 ? cvqd::DiscordVariant::LiteralPaper
                             : cvqd::DiscordVariant::Standard;
    if (trial % 3 == 0) spec.outputs = {"a.csv", "b.json", "c.svg"};

    const std::string text = cvqd::serialize_config(spec);
    const cvqd::SweepSpec reparsed = cvqd::parse_config(text);
    REQUIRE(reparsed == spec);
    REQUIRE(cvqd::parse_config(cvqd::serialize_config(reparsed)) == spec);
  }

  // asymmetric cavities are not representable
  cvqd::SweepSpec lopsided;
  lopsided.scenario = cvqd::scenario_preset(cvqd::ScenarioId::A);
  lopsided.scenario.params.cavity_b.kappa *= 2;
  CHECK_THROWS_AS(cvqd::serialize_config(lopsided), cvqd::ValidationError);
}

TEST_CASE("sweep spec validation") {
  cvqd::SweepSpec spec = small_spec(cvqd::ScenarioId::A, {}, 0.0, 1.0, 5);
  CHECK_THROWS_AS(spec.validate(), cvqd::ValidationError);
  spec = small_spec(cvqd::ScenarioId::A, {0}, 0.0, 1.0, 5);
  CHECK_THROWS_AS(spec.validate(), cvqd::ValidationError);
  spec = small_spec(cvqd::ScenarioId::A, {1}, 2.0, 1.0, 5);
  CHECK_THROWS_AS(spec.validate(), cvqd::ValidationError);
  spec = small_spec(cvqd::ScenarioId::A, {1}, 0.0, 1.0, 1);
  CHECK_THROWS_AS(spec.validate(), cvqd::ValidationError);
}

#ifdef CVQD_CLI_PATH
TEST_CASE("cli end-to-end: files, stdout and exit codes") {
  const std::string cli = CVQD_CLI_PATH;
  const fs::path dir = fs::temp_directory_path() / "cvqd_cli_test";
  fs::create_directories(dir);
  const fs::path csv = dir / "sweep.csv";
  const fs::path svg = dir / "sweep.svg";
  const fs::path json_path = dir / "sweep.json";

  auto run = [](const std::string& cmd) {
    const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
  };

  CHECK(run(cli + " sweep --scenario a --blocks 1,2 --from 0 --to 2 --steps 5 --csv " +
            csv.string() + " --svg " + svg.string() + " --json " + json_path.string()) == 0);
  const std::string csv_text = slurp(csv);
  CHECK(csv_text.rfind(std::string(cvqd::kCsvHeader) + "\n", 0) == 0);
  CHECK(count_substrings(csv_text, "\n") == 11);
  CHECK(slurp(svg).find("<svg") != std::string::npos);
  CHECK(nlohmann::json::parse(slurp(json_path))["rows"].size() == 10);

  // determinism across worker counts, through the real binary
  const fs::path csv_threads = dir / "sweep_threads.csv";
  CHECK(run(cli + " sweep --scenario a --blocks 1 --from 0 --to 2 --steps 21 --threads 1 --csv " +
            csv.string()) == 0);
  CHECK(run(cli + " sweep --scenario a --blocks 1 --from 0 --to 2 --steps 21 --threads 4 --csv " +
            csv_threads.string()) == 0);
  CHECK(slurp(csv) == slurp(csv_threads));

  // config file route
  const fs::path config = dir / "sweep.cfg";
  {
    std::ofstream out(config);
    out << "[scenario]\nid = c\nblocks = 1\n[grid]\nfrom = 0\nto = 1\nsteps = 3\n"
        << "[outputs]\ncsv = " << (dir / "from_config.csv").string() << "\n";
  }
  CHECK(run(cli + " sweep --config " + config.string()) == 0);
  CHECK(slurp(dir / "from_config.csv").find("0.5,1,") != std::string::npos);

  CHECK(run(cli + " stability --scenario a --from 0 --to 1 --steps 3 --csv " +
            (dir / "stability.csv").string()) == 0);
  const std::string stab = slurp(dir / "stability.csv");
  CHECK(stab.find("S_0") != std::string::npos);
  CHECK(stab.find("stable") != std::string::npos);

  CHECK(run(cli + " info") == 0);

  // validation failures exit 1
  CHECK(run(cli + " sweep --scenario z") == 1);
  CHECK(run(cli + " sweep --scenario a --from 3 --to 1") == 1);
  CHECK(run(cli + " nonsense") == 1);
  // an all-unstable window produces no Gaussian quantities: exit 2
  CHECK(run(cli + " sweep --scenario a --blocks 1 --from 5 --to 6 --steps 3 --csv " +
            (dir / "unstable.csv").string()) == 2);

  fs::remove_all(dir);
}
#endif
