#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sysrel/cli.hpp"
#include "sysrel/io.hpp"
#include "support/test_models.hpp"

using namespace sysrel;
using namespace testmodels;
using Catch::Approx;

namespace {

std::string write_temp_model(const json& doc, const char* name) {
  const std::string path = std::string("/tmp/sysrel_test_") + name + ".json";
  std::ofstream f(path);
  f << doc.dump();
  return path;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("every family example round-trips through the parser") {
  for (Family f : {Family::IndExp, Family::MOME, Family::MG1, Family::IndWeibull, Family::MOMW,
                   Family::Crowder, Family::Lee, Family::LB1, Family::FGMW, Family::LB2}) {
    const json doc = example_model(f);
    const auto vm = parse_model(doc);
    REQUIRE(vm.family() == f);
    // serialize back and parse again
    const auto vm2 = parse_model(model_to_json(vm));
    REQUIRE(vm2.family() == f);
    REQUIRE(vm2.n() == vm.n());
    std::vector<double> pt(static_cast<std::size_t>(vm.n()), 0.8);
    REQUIRE(joint_sf(vm2, pt) == Approx(joint_sf(vm, pt)).epsilon(1e-14));
  }
}

TEST_CASE("parser rejects malformed documents with field-level messages") {
  REQUIRE_THROWS_AS(parse_model(json::parse(R"({"family":"Nope","n":2})")), InvalidParameter);
  REQUIRE_THROWS_AS(parse_model(json::parse(R"({"family":"MOME"})")), InvalidParameter);
  REQUIRE_THROWS_AS(
      parse_model(json::parse(R"({"family":"MOME","n":2,"rates":{"1,2":-0.5}})")),
      InvalidParameter);
  REQUIRE_THROWS_AS(
      parse_model(json::parse(R"({"family":"MOME","n":2,"rates":{"2,1":0.5,"1":1,"2":1}})")),
      InvalidParameter);
  REQUIRE_THROWS_AS(
      parse_model(json::parse(R"({"family":"FGMW","n":2,"lambdas":[1,1],"alphas":[1,1],"gamma":1.0})")),
      InvalidParameter);
  try {
    parse_model(json::parse(R"({"family":"MOME","n":2,"rates":{"1,2":-0.5}})"));
  } catch (const InvalidParameter& e) {
    REQUIRE(std::string(e.what()).find("rates") != std::string::npos);
  }
}

TEST_CASE("CSV serialization renders NaN as empty cells") {
  CurveSet c;
  c.grid.points = {1.0, 2.0};
  c.sf = {0.5, 0.25};
  c.fr = {1.0, nan_value};
  c.rfr = {0.7, 0.6};
  c.mrl = {nan_value, 0.3};
  c.ai = {1.0, 1.0};
  const auto lines = split_lines(curve_to_csv(c));
  REQUIRE(lines[0] == "t,sf,fr,rfr,mrl,ai,provenance");
  REQUIRE(lines[1].find(",,") != std::string::npos);  // the empty mrl cell
  const json j = curve_to_json(c);
  REQUIRE(j["points"][1]["fr"].is_null());
  REQUIRE(j["points"][0]["mrl"].is_null());
}

TEST_CASE("eval command emits the documented CSV header") {
  RunConfig cfg;
  cfg.command = "eval";
  cfg.model_path = write_temp_model(example_model(Family::MOME), "eval");
  cfg.grid = {0.1, 5.0, 20, true};
  std::ostringstream out, diag;
  REQUIRE(run(cfg, out, diag) == 0);
  const auto lines = split_lines(out.str());
  REQUIRE(lines[0] == "t,sf,fr,rfr,mrl,ai,provenance");
  REQUIRE(lines.size() == 21);
}

TEST_CASE("eval command: JSON format carries points, provenance, verification") {
  RunConfig cfg;
  cfg.command = "eval";
  cfg.model_path = write_temp_model(example_model(Family::MOME), "evaljson");
  cfg.grid = {0.1, 5.0, 15, true};
  cfg.format = "json";
  cfg.verify = true;
  std::ostringstream out, diag;
  REQUIRE(run(cfg, out, diag) == 0);
  const json doc = json::parse(out.str());
  REQUIRE(doc["points"].size() == 15);
  REQUIRE(doc["provenance"]["sf"] == "closed");
  REQUIRE(doc["provenance"]["mrl"] == "numeric");
  REQUIRE(doc["verification"]["max_rel_deviation"].get<double>() < 1e-8);
}

TEST_CASE("baseline flag switches the comparison marginals") {
  // Under the true-marginal baseline the shock model under-assesses the
  // series survival (positive error); the paper-literal baseline
  // over-assesses it.
  RunConfig cfg;
  cfg.command = "error";
  cfg.model_path = write_temp_model(example_model(Family::MOME), "baseline");
  cfg.grid = {0.5, 2.0, 5, false};
  cfg.format = "json";
  std::ostringstream lit, tru, diag;
  cfg.baseline = Baseline::PaperLiteral;
  REQUIRE(run(cfg, lit, diag) == 0);
  cfg.baseline = Baseline::TrueMarginal;
  REQUIRE(run(cfg, tru, diag) == 0);
  const json doc_lit = json::parse(lit.str());
  const json doc_tru = json::parse(tru.str());
  REQUIRE(doc_lit["curve"]["points"][0]["e_sf"].get<double>() < 0.0);
  REQUIRE(doc_tru["curve"]["points"][0]["e_sf"].get<double>() > 0.0);
}

TEST_CASE("error command: constant FR error column for the example model") {
  RunConfig cfg;
  cfg.command = "error";
  cfg.model_path = write_temp_model(example_model(Family::MOME), "error");
  cfg.grid = {0.01, 10.0, 200, true};
  std::ostringstream out, diag;
  REQUIRE(run(cfg, out, diag) == 0);
  const auto lines = split_lines(out.str());
  REQUIRE(lines[0] == "t,e_sf,e_fr,e_rfr,e_mrl,e_ai");
  REQUIRE(lines.size() == 201);
  // rates {1:1, 2:1, 12:0.5}: E_fr = 0.5/2 = 0.25 at every grid point
  for (std::size_t k = 1; k < lines.size(); ++k) {
    std::stringstream ss(lines[k]);
    std::string cell;
    std::getline(ss, cell, ',');  // t
    std::getline(ss, cell, ',');  // e_sf
    std::getline(ss, cell, ',');  // e_fr
    REQUIRE(std::stod(cell) == Approx(0.25).margin(1e-12));
  }
  REQUIRE(diag.str().find("\"functions\"") != std::string::npos);
}

TEST_CASE("identical configurations produce byte-identical output") {
  RunConfig cfg;
  cfg.command = "simulate";
  cfg.model_path = write_temp_model(example_model(Family::MOME), "determinism");
  cfg.grid = {0.1, 5.0, 25, true};
  cfg.n_samples = 20000;
  cfg.seed = 99;
  std::ostringstream out1, out2, diag;
  REQUIRE(run(cfg, out1, diag) == 0);
  cfg.threads = 4;
  REQUIRE(run(cfg, out2, diag) == 0);
  REQUIRE(out1.str() == out2.str());
}

TEST_CASE("order command emits verdicts and a consistent audit") {
  RunConfig cfg;
  cfg.command = "order";
  cfg.model_path = write_temp_model(example_model(Family::MOME), "order");
  cfg.grid = {0.05, 5.0, 50, true};
  cfg.relations = "lr,fr,st,mrl";
  std::ostringstream out, diag;
  REQUIRE(run(cfg, out, diag) == 0);
  const json doc = json::parse(out.str());
  REQUIRE(doc["verdicts"].size() == 4);
  for (const auto& v : doc["verdicts"]) REQUIRE(v["direction"] == "A_leq_B");
  REQUIRE(doc["audit"]["consistent"] == true);
}

TEST_CASE("depend command labels the example model PUOD") {
  RunConfig cfg;
  cfg.command = "depend";
  cfg.model_path = write_temp_model(example_model(Family::MOME), "depend");
  std::ostringstream out, diag;
  REQUIRE(run(cfg, out, diag) == 0);
  const json doc = json::parse(out.str());
  REQUIRE(doc["label"] == "PUOD");
  REQUIRE(doc["sample_points"].get<int>() >= 100);
  REQUIRE(doc["box"].size() == 2);
}

TEST_CASE("families command lists ten schemas and emits examples") {
  RunConfig cfg;
  cfg.command = "families";
  std::ostringstream out, diag;
  REQUIRE(run(cfg, out, diag) == 0);
  REQUIRE(json::parse(out.str()).size() == 10);

  RunConfig ex;
  ex.command = "families";
  ex.example_family = "FGMW";
  std::ostringstream out2;
  REQUIRE(run(ex, out2, diag) == 0);
  const auto vm = parse_model(json::parse(out2.str()));
  REQUIRE(vm.family() == Family::FGMW);
}

TEST_CASE("exit statuses encode the failure class") {
  std::ostringstream out, diag;
  SECTION("validation failure is exit 2") {
    RunConfig cfg;
    cfg.command = "eval";
    cfg.model_path = write_temp_model(
        json::parse(R"({"family":"MOME","n":2,"rates":{"1,2":-0.5,"1":1,"2":1}})"), "bad");
    REQUIRE(run(cfg, out, diag) == 2);
    REQUIRE(diag.str().find("InvalidParameter") != std::string::npos);
  }
  SECTION("bad grid is exit 2") {
    RunConfig cfg;
    cfg.command = "eval";
    cfg.model_path = write_temp_model(example_model(Family::MOME), "grid");
    cfg.grid.start = -1.0;
    REQUIRE(run(cfg, out, diag) == 2);
  }
  SECTION("missing model file is exit 2") {
    RunConfig cfg;
    cfg.command = "eval";
    cfg.model_path = "/tmp/sysrel_no_such_model.json";
    REQUIRE(run(cfg, out, diag) == 2);
  }
  SECTION("unsupported sampler family is exit 4") {
    RunConfig cfg;
    cfg.command = "simulate";
    cfg.model_path = write_temp_model(example_model(Family::MG1), "mg1");
    cfg.n_samples = 100;
    REQUIRE(run(cfg, out, diag) == 4);
    REQUIRE(diag.str().find("UnsupportedError") != std::string::npos);
  }
  SECTION("widespread degeneracy is exit 3") {
    RunConfig cfg;
    cfg.command = "eval";
    cfg.model_path = write_temp_model(example_model(Family::MOME), "degen");
    cfg.grid = {500.0, 5000.0, 20, true};  // survival underflows everywhere
    REQUIRE(run(cfg, out, diag) == 3);
  }
}

TEST_CASE("sample matrices persist to CSV") {
  RunConfig cfg;
  cfg.command = "simulate";
  cfg.model_path = write_temp_model(example_model(Family::MOME), "dump");
  cfg.grid = {0.1, 5.0, 10, true};
  cfg.n_samples = 50;
  cfg.dump_samples_path = "/tmp/sysrel_test_samples.csv";
  std::ostringstream out, diag;
  REQUIRE(run(cfg, out, diag) == 0);
  std::ifstream f(cfg.dump_samples_path);
  std::string header;
  std::getline(f, header);
  REQUIRE(header == "t1,t2");
  std::size_t rows = 0;
  std::string line;
  while (std::getline(f, line)) ++rows;
  REQUIRE(rows == 50);
  std::remove(cfg.dump_samples_path.c_str());
}
