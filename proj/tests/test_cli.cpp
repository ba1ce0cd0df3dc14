// End-to-end checks of the tubalkit binary. The binary path and the bundled
// data directory come in through compile definitions.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "tubal/png_io.hpp"
#include "tubal/tensor3.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(TUBALKIT_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return RunResult{WEXITSTATUS(status)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "tubalkit_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

double json_number(const std::string& text, const std::string& key) {
    const auto at = text.find("\"" + key + "\"");
    REQUIRE(at != std::string::npos);
    const auto colon = text.find(':', at);
    return std::stod(text.substr(colon + 1));
}

}  // namespace

TEST_CASE("synth writes metrics and trace, and recovers the reference instance") {
    const fs::path out = fresh_dir("synth");
    const auto res = run_cli("synth --n 20 --rank 2 --sr 0.8 --reg how --seed 7 --out " +
                             out.string());
    CHECK(res.exit_code == 0);
    REQUIRE(fs::exists(out / "metrics.json"));
    REQUIRE(fs::exists(out / "trace.csv"));

    const std::string metrics = slurp(out / "metrics.json");
    CHECK(json_number(metrics, "rre") <= 1e-4);
    CHECK(metrics.find("\"stop_reason\": \"converged\"") != std::string::npos);
}

TEST_CASE("synth with a missing required flag fails with exit 2 and no files") {
    const fs::path out = fresh_dir("synth_bad");
    fs::remove_all(out);  // the command must not create it
    const auto res = run_cli("synth --n 20 --sr 0.8 --out " + out.string());
    CHECK(res.exit_code == 2);
    CHECK(!fs::exists(out / "metrics.json"));
    CHECK(!fs::exists(out / "trace.csv"));
}

TEST_CASE("synth rejects out-of-range configuration with exit 2") {
    const fs::path out = fresh_dir("synth_cfg");
    fs::remove_all(out);
    const auto res =
        run_cli("synth --n 10 --rank 2 --sr 0.5 --reg how --sigma-ratio 9 --out " + out.string());
    CHECK(res.exit_code == 2);
    CHECK(!fs::exists(out / "metrics.json"));
}

TEST_CASE("hop with p = 1 reports the same metrics as soft") {
    const fs::path out_soft = fresh_dir("synth_soft");
    const fs::path out_hop = fresh_dir("synth_hop1");
    const std::string common = "synth --n 12 --rank 2 --sr 0.7 --seed 3 ";
    CHECK(run_cli(common + "--reg soft --out " + out_soft.string()).exit_code == 0);
    CHECK(run_cli(common + "--reg hop --p 1.0 --out " + out_hop.string()).exit_code == 0);
    const double a = json_number(slurp(out_soft / "metrics.json"), "rre");
    const double b = json_number(slurp(out_hop / "metrics.json"), "rre");
    CHECK(std::abs(a - b) < 1e-10);
}

TEST_CASE("phase writes the full grid and is byte-reproducible") {
    const fs::path out1 = fresh_dir("phase1");
    const fs::path out2 = fresh_dir("phase2");
    const std::string common =
        "phase --n 10 --ranks 1,2 --srs 0.6,0.9 --trials 2 --specs soft,how --seed 11 --out ";
    CHECK(run_cli(common + out1.string()).exit_code == 0);
    CHECK(run_cli(common + out2.string()).exit_code == 0);

    const std::string csv = slurp(out1 / "phase.csv");
    CHECK(csv == slurp(out2 / "phase.csv"));
    CHECK(csv.starts_with("r,sr,spec,trial,rre,success,iters,seconds\n"));
    CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) ==
          1 + 2 * 2 * 2 * 2);
    CHECK(csv.find("soft") != std::string::npos);
    CHECK(csv.find("how") != std::string::npos);
}

TEST_CASE("inpaint with full observation returns the input up to quantization") {
    const fs::path out = fresh_dir("inpaint_full");
    const std::string image = std::string(TUBAL_DATA_DIR) + "/test_rgb64.png";
    const auto res = run_cli("inpaint --image " + image + " --sr 1.0 --reg hoc --out " +
                             out.string());
    CHECK(res.exit_code == 0);
    REQUIRE(fs::exists(out / "completed.png"));

    const tubal::ImageU8 in = tubal::read_png(image);
    const tubal::ImageU8 got = tubal::read_png(out / "completed.png");
    REQUIRE(in.channels == 3);
    REQUIRE(got.channels == 3);
    REQUIRE(got.pixels.size() == in.pixels.size());
    int worst = 0;
    for (std::size_t t = 0; t < in.pixels.size(); ++t)
        worst = std::max(worst, std::abs(static_cast<int>(in.pixels[t]) - got.pixels[t]));
    CHECK(worst <= 1);
}

TEST_CASE("inpaint emits a mask artifact for stripe masks and metrics against the input") {
    const fs::path out = fresh_dir("inpaint_stripe");
    const std::string image = std::string(TUBAL_DATA_DIR) + "/test_rgb64.png";
    const auto res = run_cli("inpaint --image " + image +
                             " --stripe-width 2 --stripe-period 16 --reg hop --p 0.6 --out " +
                             out.string());
    CHECK(res.exit_code == 0);
    REQUIRE(fs::exists(out / "mask.png"));
    REQUIRE(fs::exists(out / "completed.png"));
    REQUIRE(fs::exists(out / "trace.csv"));

    const tubal::ImageU8 mask = tubal::read_png(out / "mask.png");
    CHECK(mask.channels == 1);
    // stripe columns read back as zero pixels
    CHECK(mask.pixels[0] == 0);
    CHECK(mask.pixels[1] == 0);
    CHECK(mask.pixels[2] == 255);

    const std::string metrics = slurp(out / "metrics.json");
    CHECK(json_number(metrics, "psnr") > 20.0);
    CHECK(json_number(metrics, "ssim") > 0.5);
}

TEST_CASE("inpaint loads RGB input as a three-slice tensor") {
    const fs::path out = fresh_dir("inpaint_rgb");
    const std::string image = std::string(TUBAL_DATA_DIR) + "/test_rgb64.png";
    const auto res =
        run_cli("inpaint --image " + image + " --sr 0.6 --reg how --seed 5 --out " + out.string());
    CHECK(res.exit_code == 0);
    const tubal::ImageU8 got = tubal::read_png(out / "completed.png");
    CHECK(got.channels == 3);
    CHECK(got.height == 64);
    CHECK(got.width == 64);
}

TEST_CASE("inpaint with an unreadable image fails with exit 2") {
    const fs::path out = fresh_dir("inpaint_bad");
    const auto res = run_cli("inpaint --image /nonexistent.png --sr 0.5 --out " + out.string());
    CHECK(res.exit_code == 2);
    CHECK(!fs::exists(out / "metrics.json"));
}

TEST_CASE("inpaint requires exactly one mask source") {
    const fs::path out = fresh_dir("inpaint_masks");
    const std::string image = std::string(TUBAL_DATA_DIR) + "/test_rgb64.png";
    const auto res = run_cli("inpaint --image " + image +
                             " --sr 0.5 --stripe-width 2 --stripe-period 8 --out " + out.string());
    CHECK(res.exit_code == 2);
}

TEST_CASE("curves defaults reproduce the documented table shape") {
    const fs::path out = fresh_dir("curves");
    CHECK(run_cli("curves --out " + out.string()).exit_code == 0);
    const std::string csv = slurp(out / "curves.csv");
    REQUIRE(csv.starts_with("x,soft,hard,hop_p,how,hoc\n"));

    std::stringstream ss(csv);
    std::string line;
    std::getline(ss, line);  // header
    std::size_t cols = std::count(line.begin(), line.end(), ',') + 1;
    CHECK(cols == 6);
    while (std::getline(ss, line)) {
        REQUIRE(std::count(line.begin(), line.end(), ',') == 5);
        std::stringstream ls(line);
        std::string cell;
        std::getline(ls, cell, ',');
        const double x = std::stod(cell);
        std::getline(ls, cell, ',');
        const double soft = std::stod(cell);
        const double expect = std::max(0.0, std::abs(x) - 1.0) * (x >= 0 ? 1.0 : -1.0);
        CHECK(std::abs(soft - expect) < 1e-12);
    }
}
