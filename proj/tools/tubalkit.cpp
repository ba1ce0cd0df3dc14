// tubalkit: low-tubal-rank tensor completion toolkit.
//
// Subcommands:
//   synth    solve a seeded synthetic completion instance, emit metrics + trace
//   phase    sweep a (rank x sampling-rate) grid, emit a phase table
//   inpaint  complete a PNG image (or a directory of grayscale frames)
//   curves   tabulate the thresholding functions for plotting

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tubal/png_io.hpp"
#include "tubal/tubal.hpp"

namespace fs = std::filesystem;
using namespace tubal;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct SolverFlags {
    std::string reg = "how";
    double p = 0.3;
    double sigma_ratio = std::sqrt(2.0);
    double gamma_ratio = 1.0;
    double rho0 = 1e-4;
    double mu = 1.2;
    double xi = 1e-4;
    int max_iters = 500;

    void attach(CLI::App* cmd) {
        cmd->add_option("--reg", reg, "regularizer: soft | hop | how | hoc")
            ->check(CLI::IsMember({"soft", "hop", "how", "hoc"}));
        cmd->add_option("--p", p, "hop exponent in (0,1]");
        cmd->add_option("--sigma-ratio", sigma_ratio, "how: sigma/lambda, in (0, sqrt(2)]");
        cmd->add_option("--gamma-ratio", gamma_ratio, "hoc: gamma/lambda, in (0, 1]");
        cmd->add_option("--rho0", rho0, "initial penalty");
        cmd->add_option("--mu", mu, "penalty growth factor (> 1)");
        cmd->add_option("--xi", xi, "stopping tolerance");
        cmd->add_option("--max-iters", max_iters, "iteration cap");
    }

    SolverConfig config() const {
        SolverConfig cfg;
        cfg.reg = shape(reg);
        cfg.rho0 = rho0;
        cfg.mu = mu;
        cfg.xi = xi;
        cfg.max_iters = max_iters;
        validate(cfg);
        return cfg;
    }

    RegShape shape(const std::string& name) const {
        RegShape s;
        if (name == "soft") {
            s.kind = RegKind::Soft;
        } else if (name == "hop") {
            s.kind = RegKind::Hop;
            s.p = p;
        } else if (name == "how") {
            s.kind = RegKind::How;
            s.sigma_ratio = sigma_ratio;
        } else if (name == "hoc") {
            s.kind = RegKind::Hoc;
            s.gamma_ratio = gamma_ratio;
        } else {
            throw InvalidParam("unknown regularizer: " + name);
        }
        return s;
    }
};

// Spec tokens for `phase`: "soft", "hop:0.3", "how", "how:1.2", "hoc:0.8".
// The optional suffix overrides the family's shape parameter.
SolverConfig parse_spec_token(const std::string& token, const SolverFlags& flags) {
    std::string name = token;
    std::optional<double> value;
    if (const auto colon = token.find(':'); colon != std::string::npos) {
        name = token.substr(0, colon);
        try {
            value = std::stod(token.substr(colon + 1));
        } catch (const std::exception&) {
            throw InvalidParam("bad spec token: " + token);
        }
    }
    SolverFlags local = flags;
    local.reg = name;
    if (value) {
        if (name == "hop") local.p = *value;
        else if (name == "how") local.sigma_ratio = *value;
        else if (name == "hoc") local.gamma_ratio = *value;
        else throw InvalidParam("spec token takes no parameter: " + token);
    }
    return local.config();
}

std::string json_num(double v) {
    if (!std::isfinite(v)) return "null";
    return fmt17(v);
}

std::string json_opt(const std::optional<double>& v) {
    return v ? json_num(*v) : "null";
}

struct MetricsJson {
    std::optional<double> rre, psnr, ssim, rmse;
    double runtime_seconds = 0.0;
    std::string stop_reason;
    int iters = 0;
    std::uint64_t seed = 0;
};

void write_metrics_json(const fs::path& path, const MetricsJson& m) {
    atomic_write_file(path, [&](std::ostream& out) {
        out << "{\n"
            << "  \"rre\": " << json_opt(m.rre) << ",\n"
            << "  \"psnr\": " << json_opt(m.psnr) << ",\n"
            << "  \"ssim\": " << json_opt(m.ssim) << ",\n"
            << "  \"rmse\": " << json_opt(m.rmse) << ",\n"
            << "  \"runtime_seconds\": " << json_num(m.runtime_seconds) << ",\n"
            << "  \"stop_reason\": \"" << m.stop_reason << "\",\n"
            << "  \"iters\": " << m.iters << ",\n"
            << "  \"seed\": " << m.seed << "\n"
            << "}\n";
    });
}

void ensure_out_dir(const std::string& out) {
    fs::create_directories(out);
}

// ---------------------------------------------------------------- synth ---

int run_synth(int n1, int n2, int n3, int rank, double sr, const SolverFlags& flags,
              std::uint64_t seed, const std::string& out, bool timing) {
    const SolverConfig cfg = flags.config();
    const Tensor3 truth = gen_lowrank(n1, n2, n3, rank, derive_seed(seed, {0}));
    const Mask mask = random_mask(n1, n2, n3, sr, derive_seed(seed, {1}));
    const Tensor3 x_obs = apply_mask(truth, mask);

    ensure_out_dir(out);
    const auto t0 = std::chrono::steady_clock::now();
    const SolveResult res = solve(x_obs, mask, cfg, &truth);
    const auto t1 = std::chrono::steady_clock::now();

    MetricsJson m;
    m.rre = rre(res.m, truth);
    m.runtime_seconds = timing ? std::chrono::duration<double>(t1 - t0).count() : 0.0;
    m.stop_reason = stop_reason_name(res.stop);
    m.iters = static_cast<int>(res.trace.rows.size());
    m.seed = seed;
    write_metrics_json(fs::path(out) / "metrics.json", m);
    atomic_write_file(fs::path(out) / "trace.csv",
                      [&](std::ostream& os) { write_trace_csv(os, res.trace); });
    return kExitOk;
}

// ---------------------------------------------------------------- phase ---

std::vector<LabelledConfig> build_specs(const std::string& list, const SolverFlags& flags) {
    std::vector<LabelledConfig> specs;
    std::stringstream ss(list);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        specs.emplace_back(token, parse_spec_token(token, flags));
    }
    if (specs.empty()) throw InvalidParam("--specs: no spec tokens");
    return specs;
}

int run_phase(int n, const std::string& ranks, const std::string& srs, int trials,
              const std::string& spec_list, double success_threshold, const SolverFlags& flags,
              std::uint64_t seed, const std::string& out, bool timing) {
    PhaseGrid grid;
    {
        std::stringstream ss(ranks);
        std::string t;
        while (std::getline(ss, t, ',')) grid.ranks.push_back(std::stoi(t));
    }
    {
        std::stringstream ss(srs);
        std::string t;
        while (std::getline(ss, t, ',')) grid.sampling_rates.push_back(std::stod(t));
    }
    grid.trials = trials;
    grid.success_threshold = success_threshold;
    const auto specs = build_specs(spec_list, flags);
    validate(grid);

    ensure_out_dir(out);
    const auto rows = phase_transition(grid, n, specs, seed, timing);
    atomic_write_file(fs::path(out) / "phase.csv",
                      [&](std::ostream& os) { write_phase_csv(os, rows); });
    return kExitOk;
}

// -------------------------------------------------------------- inpaint ---

struct FrameStack {
    std::vector<std::string> names;  // empty for a single image
    Tensor3 tensor;
    int channels = 0;  // per-frame channels for single-image mode
};

FrameStack load_input(const fs::path& path) {
    FrameStack in;
    if (fs::is_directory(path)) {
        std::vector<fs::path> frames;
        for (const auto& e : fs::directory_iterator(path))
            if (e.path().extension() == ".png") frames.push_back(e.path());
        std::sort(frames.begin(), frames.end());
        if (frames.empty()) throw IoError("no .png frames in directory: " + path.string());
        std::vector<ImageU8> imgs;
        for (const auto& f : frames) {
            ImageU8 img = read_png(f);
            if (img.channels != 1)
                throw IoError("frame stacks must be grayscale: " + f.string());
            if (!imgs.empty() &&
                (img.height != imgs[0].height || img.width != imgs[0].width))
                throw IoError("frame dimensions differ: " + f.string());
            imgs.push_back(std::move(img));
            in.names.push_back(f.filename().string());
        }
        in.tensor = Tensor3(imgs[0].height, imgs[0].width, static_cast<int>(imgs.size()));
        for (std::size_t k = 0; k < imgs.size(); ++k)
            for (int i = 0; i < imgs[0].height; ++i)
                for (int j = 0; j < imgs[0].width; ++j)
                    in.tensor(i, j, static_cast<int>(k)) =
                        imgs[k].pixels[static_cast<std::size_t>(i) * imgs[0].width + j] / 255.0;
        in.channels = 1;
    } else {
        const ImageU8 img = read_png(path);
        in.tensor = image_to_tensor(img);
        in.channels = img.channels;
    }
    return in;
}

Mask mask_from_image(const fs::path& path, const Tensor3& like) {
    const ImageU8 img = read_png(path);
    if (img.height != like.n1() || img.width != like.n2())
        throw InvalidParam("mask image dimensions differ from input image");
    if (img.channels != 1 && img.channels != like.n3())
        throw InvalidParam("mask image must be grayscale or match the channel count");
    Mask mask(like.n1(), like.n2(), like.n3());
    for (int i = 0; i < like.n1(); ++i)
        for (int j = 0; j < like.n2(); ++j)
            for (int k = 0; k < like.n3(); ++k) {
                const int c = (img.channels == 1) ? 0 : k;
                const std::uint8_t v =
                    img.pixels[(static_cast<std::size_t>(i) * like.n2() + j) * img.channels + c];
                mask.set(i, j, k, v != 0);  // zero pixels mark missing entries
            }
    return mask;
}

ImageU8 mask_to_image(const Mask& mask, int k) {
    ImageU8 img;
    img.height = mask.n1();
    img.width = mask.n2();
    img.channels = 1;
    img.pixels.resize(static_cast<std::size_t>(mask.n1()) * mask.n2());
    for (int i = 0; i < mask.n1(); ++i)
        for (int j = 0; j < mask.n2(); ++j)
            img.pixels[static_cast<std::size_t>(i) * mask.n2() + j] =
                mask.observed(i, j, k) ? 255 : 0;
    return img;
}

int run_inpaint(const std::string& image, const std::string& original_path, double sr,
                int stripe_width, int stripe_period, const std::string& mask_file,
                const SolverFlags& flags, std::uint64_t seed, const std::string& out,
                bool timing) {
    const SolverConfig cfg = flags.config();
    const FrameStack in = load_input(image);
    const Tensor3& x = in.tensor;

    const bool have_sr = sr > 0.0;
    const bool have_stripe = stripe_width > 0 || stripe_period > 0;
    const bool have_file = !mask_file.empty();
    if (have_sr + have_stripe + have_file != 1)
        throw InvalidParam("choose exactly one mask source: --sr, --stripe-*, or --mask-file");

    Mask mask;
    if (have_sr) {
        mask = random_mask(x.n1(), x.n2(), x.n3(), sr, derive_seed(seed, {1}));
    } else if (have_stripe) {
        mask = stripe_mask(x.n1(), x.n2(), x.n3(), stripe_width, stripe_period);
    } else {
        if (!in.names.empty())
            throw InvalidParam("--mask-file is not supported for frame stacks");
        mask = mask_from_image(mask_file, x);
    }

    // Reference for the quality metrics: an explicit --original wins; a
    // generated mask implies the input itself is the intact reference; with
    // --mask-file and no --original there is nothing to compare against.
    std::optional<Tensor3> reference;
    if (!original_path.empty()) {
        const FrameStack ref = load_input(original_path);
        if (!ref.tensor.same_dims(x)) throw InvalidParam("--original dimensions differ");
        reference = ref.tensor;
    } else if (!have_file) {
        reference = x;
    }

    const Tensor3 x_obs = apply_mask(x, mask);
    ensure_out_dir(out);

    const auto t0 = std::chrono::steady_clock::now();
    const SolveResult res = solve(x_obs, mask, cfg, reference ? &*reference : nullptr);
    const auto t1 = std::chrono::steady_clock::now();

    if (in.names.empty()) {
        write_png(fs::path(out) / "completed.png", tensor_to_image(res.m));
        write_png(fs::path(out) / "mask.png", mask_to_image(mask, 0));
    } else {
        fs::create_directories(fs::path(out) / "completed");
        fs::create_directories(fs::path(out) / "mask");
        for (int k = 0; k < x.n3(); ++k) {
            ImageU8 frame;
            frame.height = x.n1();
            frame.width = x.n2();
            frame.channels = 1;
            frame.pixels.resize(static_cast<std::size_t>(x.n1()) * x.n2());
            for (int i = 0; i < x.n1(); ++i)
                for (int j = 0; j < x.n2(); ++j) {
                    double v = std::clamp(res.m(i, j, k), 0.0, 1.0);
                    frame.pixels[static_cast<std::size_t>(i) * x.n2() + j] =
                        static_cast<std::uint8_t>(v * 255.0 + 0.5);
                }
            write_png(fs::path(out) / "completed" / in.names[k], frame);
            write_png(fs::path(out) / "mask" / in.names[k], mask_to_image(mask, k));
        }
    }

    MetricsJson m;
    if (reference) {
        m.rre = rre(res.m, *reference);
        m.psnr = psnr(res.m, *reference);
        m.ssim = ssim(res.m, *reference);
        m.rmse = rmse(res.m, *reference);
    }
    m.runtime_seconds = timing ? std::chrono::duration<double>(t1 - t0).count() : 0.0;
    m.stop_reason = stop_reason_name(res.stop);
    m.iters = static_cast<int>(res.trace.rows.size());
    m.seed = seed;
    write_metrics_json(fs::path(out) / "metrics.json", m);
    atomic_write_file(fs::path(out) / "trace.csv",
                      [&](std::ostream& os) { write_trace_csv(os, res.trace); });
    return kExitOk;
}

// --------------------------------------------------------------- curves ---

int run_curves(double lambda, double p, double sigma_ratio, double gamma_ratio, double xmin,
               double xmax, double step, const std::string& out) {
    if (!(step > 0.0) || !(xmax >= xmin)) throw InvalidParam("curves: bad grid");
    std::vector<double> grid;
    for (double x = xmin; x <= xmax + 0.5 * step; x += step) grid.push_back(x);
    const CurveTable table = curve_table(lambda, p, sigma_ratio, gamma_ratio, grid);
    ensure_out_dir(out);
    atomic_write_file(fs::path(out) / "curves.csv",
                      [&](std::ostream& os) { write_curve_csv(os, table); });
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"low-tubal-rank tensor completion toolkit"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "solve a synthetic completion instance");
    int s_n = 0, s_n1 = 0, s_n2 = 0, s_n3 = 0, s_rank = 0;
    double s_sr = 0.0;
    std::uint64_t s_seed = 0;
    std::string s_out;
    bool s_timing = false;
    SolverFlags s_flags;
    synth->add_option("--n", s_n, "cubic tensor side (sets n1 = n2 = n3)");
    synth->add_option("--n1", s_n1);
    synth->add_option("--n2", s_n2);
    synth->add_option("--n3", s_n3);
    synth->add_option("--rank", s_rank, "tubal rank of the ground truth")->required();
    synth->add_option("--sr", s_sr, "sampling rate in (0, 1]")->required();
    synth->add_option("--seed", s_seed, "RNG seed");
    synth->add_option("--out", s_out, "output directory")->required();
    synth->add_flag("--timing", s_timing, "record wall-clock time (breaks bit-reproducibility)");
    s_flags.attach(synth);

    // phase
    auto* phase = app.add_subcommand("phase", "rank x sampling-rate phase table");
    int p_n = 20, p_trials = 3;
    double p_threshold = 1e-4;
    std::string p_ranks, p_srs, p_specs = "soft,hop:0.3,hop:0.6,how,hoc", p_out;
    std::uint64_t p_seed = 0;
    bool p_timing = false;
    SolverFlags p_flags;
    phase->add_option("--n", p_n, "cubic tensor side");
    phase->add_option("--ranks", p_ranks, "comma list of tubal ranks")->required();
    phase->add_option("--srs", p_srs, "comma list of sampling rates")->required();
    phase->add_option("--trials", p_trials, "trials per cell");
    phase->add_option("--specs", p_specs, "comma list of spec tokens, e.g. soft,hop:0.3,how,hoc");
    phase->add_option("--success-threshold", p_threshold, "success when rre <= threshold");
    phase->add_option("--seed", p_seed, "RNG seed");
    phase->add_option("--out", p_out, "output directory")->required();
    phase->add_flag("--timing", p_timing, "record wall-clock time (breaks bit-reproducibility)");
    p_flags.attach(phase);

    // inpaint
    auto* inpaint = app.add_subcommand("inpaint", "complete a PNG image or frame stack");
    std::string i_image, i_original, i_mask_file, i_out;
    double i_sr = 0.0;
    int i_stripe_width = 0, i_stripe_period = 0;
    std::uint64_t i_seed = 0;
    bool i_timing = false;
    SolverFlags i_flags;
    inpaint->add_option("--image", i_image, "input PNG (or directory of grayscale frames)")
        ->required();
    inpaint->add_option("--original", i_original, "intact reference for the quality metrics");
    inpaint->add_option("--sr", i_sr, "random mask sampling rate in (0, 1]");
    inpaint->add_option("--stripe-width", i_stripe_width, "missing stripe width (columns)");
    inpaint->add_option("--stripe-period", i_stripe_period, "stripe repetition period");
    inpaint->add_option("--mask-file", i_mask_file, "mask PNG, zero pixels = missing");
    inpaint->add_option("--seed", i_seed, "RNG seed");
    inpaint->add_option("--out", i_out, "output directory")->required();
    inpaint->add_flag("--timing", i_timing, "record wall-clock time (breaks bit-reproducibility)");
    i_flags.attach(inpaint);

    // curves
    auto* curves = app.add_subcommand("curves", "tabulate thresholding functions");
    double c_lambda = 1.0, c_p = 0.3, c_sigma = std::sqrt(2.0), c_gamma = 1.0;
    double c_xmin = -5.0, c_xmax = 5.0, c_step = 0.01;
    std::string c_out;
    curves->add_option("--lambda", c_lambda, "threshold");
    curves->add_option("--p", c_p, "hop exponent");
    curves->add_option("--sigma-ratio", c_sigma, "how sigma/lambda");
    curves->add_option("--gamma-ratio", c_gamma, "hoc gamma/lambda");
    curves->add_option("--xmin", c_xmin);
    curves->add_option("--xmax", c_xmax);
    curves->add_option("--step", c_step);
    curves->add_option("--out", c_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (synth->parsed()) {
            int n1 = s_n1, n2 = s_n2, n3 = s_n3;
            if (s_n > 0) n1 = n2 = n3 = s_n;
            if (n1 < 1 || n2 < 1 || n3 < 1)
                throw InvalidParam("synth: give --n or all of --n1/--n2/--n3");
            return run_synth(n1, n2, n3, s_rank, s_sr, s_flags, s_seed, s_out, s_timing);
        }
        if (phase->parsed())
            return run_phase(p_n, p_ranks, p_srs, p_trials, p_specs, p_threshold, p_flags, p_seed,
                             p_out, p_timing);
        if (inpaint->parsed())
            return run_inpaint(i_image, i_original, i_sr, i_stripe_width, i_stripe_period,
                               i_mask_file, i_flags, i_seed, i_out, i_timing);
        if (curves->parsed())
            return run_curves(c_lambda, c_p, c_sigma, c_gamma, c_xmin, c_xmax, c_step, c_out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        // missing/unreadable inputs are configuration problems
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitConfig;
}
