#include <doctest.h>

#include <fcntl.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "jenga/cli.hpp"
#include "jenga/png_io.hpp"

using namespace jenga;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

struct CliResult {
    int exit_code = 0;
    std::string out;
    std::string err;
};

// Runs the driver in-process with stdout/stderr captured to temp files.
CliResult run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"jenga"};
    for (const auto& a : args) argv.push_back(a.c_str());

    const fs::path out_path =
        fs::temp_directory_path() / "jenga_cli_stdout.txt";
    const fs::path err_path =
        fs::temp_directory_path() / "jenga_cli_stderr.txt";

    std::fflush(stdout);
    std::fflush(stderr);
    const int saved_out = ::dup(1);
    const int saved_err = ::dup(2);
    const int out_fd =
        ::open(out_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    const int err_fd =
        ::open(err_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    ::dup2(out_fd, 1);
    ::dup2(err_fd, 2);

    CliResult result;
    result.exit_code =
        cli::run(static_cast<int>(argv.size()), argv.data());

    std::cout.flush();
    std::cerr.flush();
    std::fflush(stdout);
    std::fflush(stderr);
    ::dup2(saved_out, 1);
    ::dup2(saved_err, 2);
    ::close(saved_out);
    ::close(saved_err);
    ::close(out_fd);
    ::close(err_fd);

    result.out = read_text_file(out_path);
    result.err = read_text_file(err_path);
    return result;
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("jenga_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

json error_of(const CliResult& r) {
    return json::parse(r.err)["error"];
}

}  // namespace

TEST_CASE("help exits cleanly") {
    const CliResult r = run_cli({"--help"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("decompose") != std::string::npos);
    CHECK(r.out.find("gen-synth") != std::string::npos);
}

TEST_CASE("bad flags and bad inputs map to the usage exit code") {
    CHECK(run_cli({"frobnicate"}).exit_code == 2);
    CHECK(run_cli({"decompose"}).exit_code == 2);  // --out is required

    const CliResult missing = run_cli(
        {"decompose", "--image", "no-such.png", "--out", "/tmp/jenga_x"});
    CHECK(missing.exit_code == 2);
    CHECK(error_of(missing)["code"] == "usage");
    CHECK(error_of(missing)["message"].get<std::string>().find("no-such.png") !=
          std::string::npos);

    const CliResult zero =
        run_cli({"gen-synth", "--out", "/tmp/jenga_x", "--pairs", "0"});
    CHECK(zero.exit_code == 2);
    CHECK(error_of(zero)["code"] == "usage");
}

TEST_CASE("generated corpora are byte-identical across reruns") {
    const fs::path a = scratch("gen_a");
    const fs::path b = scratch("gen_b");
    for (const fs::path& dir : {a, b}) {
        const CliResult r =
            run_cli({"gen-synth", "--out", dir.string(), "--pairs", "2",
                     "--scenes", "2", "--seed", "5"});
        REQUIRE(r.exit_code == 0);
    }
    for (const char* rel :
         {"pairwise.jsonl", "fullscene.jsonl", "config.json",
          "pairs/pair_0000.png", "pairs/pair_0000.a.png",
          "pairs/pair_0001.json", "scenes/scene_0001.png",
          "scenes/scene_0000.json"}) {
        CHECK(read_file(a / rel) == read_file(b / rel));
    }
    // A different seed produces different content.
    const fs::path c = scratch("gen_c");
    run_cli({"gen-synth", "--out", c.string(), "--pairs", "2", "--scenes", "2",
             "--seed", "6"});
    CHECK(read_file(a / "pairs/pair_0000.png") !=
          read_file(c / "pairs/pair_0000.png"));
    fs::remove_all(a);
    fs::remove_all(b);
    fs::remove_all(c);
}

TEST_CASE("decompose records its configuration and is deterministic") {
    const fs::path a = scratch("dec_a");
    const fs::path b = scratch("dec_b");
    for (const fs::path& dir : {a, b}) {
        const CliResult r = run_cli({"decompose", "--seed", "7", "--n", "8",
                                     "--resolution", "64", "--out",
                                     dir.string()});
        REQUIRE(r.exit_code == 0);
        const json summary = json::parse(r.out);
        CHECK(summary["terminated"] == "background_reached");
    }
    CHECK(read_file(a / "sequence.json") == read_file(b / "sequence.json"));
    CHECK(read_file(a / "initial.png") == read_file(b / "initial.png"));

    const json doc = json::parse(read_text_file(a / "sequence.json"));
    CHECK(doc["config"]["n"] == 8);
    CHECK(doc["config"]["seed"] == 7);
    CHECK(fs::exists(a / "gallery.html"));
    CHECK(fs::exists(a / "scene.json"));
    CHECK(fs::exists(a / "config.json"));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("rank prints a machine-readable table") {
    const CliResult r =
        run_cli({"rank", "--seed", "3", "--n", "4", "--resolution", "64"});
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    REQUIRE(doc.contains("objects"));
    CHECK(doc["objects"].size() == 4);
    for (std::size_t i = 1; i < doc["objects"].size(); ++i) {
        CHECK(doc["objects"][i - 1]["score"]["value"].get<double>() >=
              doc["objects"][i]["score"]["value"].get<double>());
    }
}

TEST_CASE("pairwise evaluation drives methods end to end") {
    const fs::path data = scratch("evp_data");
    REQUIRE(run_cli({"gen-synth", "--out", data.string(), "--pairs", "4",
                     "--seed", "11"})
                .exit_code == 0);
    const fs::path manifest = data / "pairwise.jsonl";

    const fs::path out_engine = scratch("evp_engine");
    const CliResult engine = run_cli(
        {"eval-pairwise", "--manifest", manifest.string(), "--method", "engine",
         "--out", out_engine.string()});
    REQUIRE(engine.exit_code == 0);
    const json engine_doc =
        json::parse(read_text_file(out_engine / "report.json"));
    CHECK(engine_doc["total"] == 4);
    CHECK(engine_doc["accuracy"].get<double>() == doctest::Approx(1.0));

    // A predictions file echoing the ground truth scores 100%.
    const fs::path preds = data / "preds.jsonl";
    {
        std::string lines;
        std::istringstream stream(read_text_file(manifest));
        std::string line;
        while (std::getline(stream, line)) {
            if (line.empty()) continue;
            const json c = json::parse(line);
            lines += json{{"id", c["id"]}, {"first", c["first"]}}.dump() + "\n";
        }
        write_file(preds, lines);
    }
    const fs::path out_preds = scratch("evp_preds");
    const CliResult from_file =
        run_cli({"eval-pairwise", "--manifest", manifest.string(), "--method",
                 "predictions:" + preds.string(), "--out", out_preds.string()});
    REQUIRE(from_file.exit_code == 0);
    CHECK(json::parse(from_file.out)["accuracy"].get<double>() ==
          doctest::Approx(1.0));

    // Baseline methods run and emit reports too.
    const fs::path out_ttb = scratch("evp_ttb");
    const CliResult ttb = run_cli({"eval-pairwise", "--manifest",
                                   manifest.string(), "--method",
                                   "top_to_bottom", "--out", out_ttb.string()});
    REQUIRE(ttb.exit_code == 0);
    CHECK(fs::exists(out_ttb / "report.html"));

    // Unknown method: usage error; missing manifest: manifest error.
    CHECK(run_cli({"eval-pairwise", "--manifest", manifest.string(),
                   "--method", "bogus", "--out", "/tmp/jenga_x"})
              .exit_code == 2);
    const CliResult bad_manifest =
        run_cli({"eval-pairwise", "--manifest", "/definitely/nope.jsonl",
                 "--out", "/tmp/jenga_x"});
    CHECK(bad_manifest.exit_code == 3);
    CHECK(error_of(bad_manifest)["code"] == "manifest");

    fs::remove_all(data);
    fs::remove_all(out_engine);
    fs::remove_all(out_preds);
    fs::remove_all(out_ttb);
}

TEST_CASE("full-scene evaluation with the oracle judge") {
    const fs::path data = scratch("evf_data");
    REQUIRE(run_cli({"gen-synth", "--out", data.string(), "--scenes", "2",
                     "--seed", "13"})
                .exit_code == 0);
    const fs::path out = scratch("evf_out");
    const CliResult r = run_cli(
        {"eval-full", "--manifest", (data / "fullscene.jsonl").string(),
         "--method", "engine", "--judge", "oracle", "--n", "6", "--resolution",
         "64", "--out", out.string()});
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["total"] == 2);
    CHECK(doc["accuracy"].get<double>() == doctest::Approx(1.0));
    CHECK(fs::exists(out / "sequences" / "scene_0000" / "sequence.json"));
    fs::remove_all(data);
    fs::remove_all(out);
}

TEST_CASE("ablation grids write per-cell reports and a summary") {
    const fs::path data = scratch("abl_data");
    REQUIRE(run_cli({"gen-synth", "--out", data.string(), "--pairs", "2",
                     "--seed", "17"})
                .exit_code == 0);
    const fs::path out = scratch("abl_out");
    const CliResult r = run_cli(
        {"ablate", "--manifest", (data / "pairwise.jsonl").string(), "--n-grid",
         "2,4", "--slots", "both,v", "--resolution", "64", "--out",
         out.string()});
    REQUIRE(r.exit_code == 0);
    const json summary = json::parse(read_text_file(out / "summary.json"));
    CHECK(summary.size() == 4);
    CHECK(fs::exists(out / "n2_both" / "report.json"));
    CHECK(fs::exists(out / "n4_v" / "report.json"));
    CHECK(fs::exists(out / "report.html"));

    CHECK(run_cli({"ablate", "--manifest", (data / "pairwise.jsonl").string(),
                   "--n-grid", "zero", "--out", out.string()})
              .exit_code == 2);
    fs::remove_all(data);
    fs::remove_all(out);
}
