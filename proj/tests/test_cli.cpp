#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "seqstroop/protocol.hpp"
#include "support.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(SEQSTROOP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

bool same_tree(const fs::path& a, const fs::path& b) {
    std::size_t files = 0;
    for (const auto& e : fs::recursive_directory_iterator(a)) {
        if (!e.is_regular_file()) continue;
        const auto rel = fs::relative(e.path(), a);
        if (!fs::exists(b / rel)) return false;
        if (seqstroop::read_binary_file(e.path()) != seqstroop::read_binary_file(b / rel)) return false;
        ++files;
    }
    std::size_t other = 0;
    for (const auto& e : fs::recursive_directory_iterator(b)) other += e.is_regular_file();
    return files == other && files > 0;
}

}  // namespace

TEST_CASE("gen writes one manifest and image set per arrangement") {
    testing::ScratchDir dir("cli-gen");
    REQUIRE(run("gen --out " + q(dir / "g") + " --colors red,blue,green") == 0);
    for (const char* arr : {"left-right", "top-bottom"}) {
        const auto m = seqstroop::read_manifest(dir / "g" / arr / "manifest.json");
        CHECK(m.trials.size() == 18);
        for (const auto& t : m.trials) CHECK(fs::exists(dir / "g" / arr / t.image));
    }
    CHECK(fs::exists(dir / "g" / "run_metadata.json"));

    REQUIRE(run("gen --out " + q(dir / "g2") + " --colors red,blue,green") == 0);
    CHECK(same_tree(dir / "g", dir / "g2"));
}

TEST_CASE("pipeline subcommands succeed and are idempotent") {
    testing::ScratchDir dir("cli-pipe");
    const auto manifest = dir / "g" / "left-right" / "manifest.json";
    REQUIRE(run("gen --out " + q(dir / "g") + " --arrangement left-right --colors red,blue,green,yellow") == 0);
    for (const char* out : {"mock", "mock2"}) {
        REQUIRE(run("mock-run --manifest " + q(manifest) + " --out " + q(dir / out) + " --seed 3") == 0);
    }
    CHECK(same_tree(dir / "mock", dir / "mock2"));
    CHECK(seqstroop::read_records(dir / "mock" / "records.jsonl").size() == 84);

    for (const char* out : {"an", "an2"}) {
        REQUIRE(run("analyze --manifest " + q(manifest) + " --records " + q(dir / "mock" / "records.jsonl") +
                    " --out " + q(dir / out) + " --resamples 500") == 0);
    }
    CHECK(same_tree(dir / "an", dir / "an2"));
    const auto rep = nlohmann::json::parse(seqstroop::read_text_file(dir / "an" / "adaptation_report.json"));
    CHECK(rep["delta_logprob"].get<double>() > 0.0);

    REQUIRE(run("supernodes --manifest " + q(manifest) + " --dumps " + q(dir / "mock" / "dumps") + " --out " +
                q(dir / "sn")) == 0);
    const auto sn = nlohmann::json::parse(seqstroop::read_text_file(dir / "sn" / "supernodes.json"));
    CHECK(sn["analyses"].size() == 3);
    REQUIRE(run("ablate-plan --supernodes " + q(dir / "sn" / "supernodes.json") + " --out " + q(dir / "plan")) == 0);
    const auto plan = seqstroop::read_plan(dir / "plan" / "ablation_plan.json");
    CHECK(plan.mode == "zero");

    REQUIRE(run("mock-run --manifest " + q(manifest) + " --out " + q(dir / "abl") + " --ablation " +
                q(dir / "plan" / "ablation_plan.json")) == 0);
    REQUIRE(run("analyze --manifest " + q(manifest) + " --records " + q(dir / "mock" / "records.jsonl") +
                " --ablated-records " + q(dir / "abl" / "records.jsonl") + " --out " + q(dir / "cmp") +
                " --resamples 200") == 0);
    CHECK(fs::exists(dir / "cmp" / "ablation_comparison.csv"));
}

TEST_CASE("validation failures exit with 1") {
    testing::ScratchDir dir("cli-val");
    CHECK(run("gen --out " + q(dir / "g") + " --colors red,purple") == 1);
    CHECK(run("gen --out " + q(dir / "g") + " --arrangement diagonal") == 1);
    CHECK(run("frobnicate") == 1);

    REQUIRE(run("gen --out " + q(dir / "g") + " --arrangement left-right --colors red,blue,green,yellow") == 0);
    const auto manifest = dir / "g" / "left-right" / "manifest.json";
    REQUIRE(run("mock-run --manifest " + q(manifest) + " --out " + q(dir / "mock")) == 0);
    auto recs = seqstroop::read_records(dir / "mock" / "records.jsonl");
    recs[0].logprob_second_correct = 0.1;
    seqstroop::write_records(recs, dir / "bad.jsonl");
    CHECK(run("analyze --manifest " + q(manifest) + " --records " + q(dir / "bad.jsonl") + " --out " +
              q(dir / "an")) == 1);
    const auto report = nlohmann::json::parse(seqstroop::read_text_file(dir / "an" / "validation_report.json"));
    CHECK(report["positive_logprobs"].size() == 1);

    // Three colors have no II trials.
    REQUIRE(run("gen --out " + q(dir / "g3") + " --arrangement left-right --colors red,blue,green") == 0);
    const auto m3 = dir / "g3" / "left-right" / "manifest.json";
    REQUIRE(run("mock-run --manifest " + q(m3) + " --out " + q(dir / "mock3")) == 0);
    CHECK(run("analyze --manifest " + q(m3) + " --records " + q(dir / "mock3" / "records.jsonl") + " --out " +
              q(dir / "an3")) == 1);
}

TEST_CASE("I/O failures exit with 2") {
    testing::ScratchDir dir("cli-io");
    { std::ofstream(dir / "file") << "x"; }
    CHECK(run("gen --out " + q(dir / "file" / "sub") + " --colors red,blue,green") == 2);
    CHECK(run("mock-run --manifest " + q(dir / "missing.json") + " --out " + q(dir / "m")) == 2);
    CHECK(run("supernodes --manifest " + q(dir / "missing.json") + " --dumps " + q(dir.path()) + " --out " +
              q(dir / "s")) == 2);
}

TEST_CASE("help and version exit cleanly") {
    CHECK(run("--help") == 0);
    CHECK(run("--version") == 0);
}
