#include "heatrig/experiment.hpp"

#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

using namespace heatrig;
namespace fs = std::filesystem;

namespace {

// Scratch directory removed on scope exit; unique per instantiation.
struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        const auto tick =
            std::chrono::steady_clock::now().time_since_epoch().count();
        path = fs::temp_directory_path() /
               ("heatrig_test_" + std::to_string(tick) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("full config text populates every field") {
    const ExperimentConfig cfg = parse_config_text(R"(
# exercise every section
[domain]
family = ellipse
a = 1.5
b = 1.0
target_h = 0.12

[times]
list = 0.05, 0.1, 0.2

[run]
modes = 33
tolerance = 0.01
seed = 9
refine = 1
psi = seeded
out = somewhere

[band]
theta1 = 0.7
theta2 = 2.0
n_points = 500
tol = 1e-5
)");
    CHECK(cfg.domain.describe().find("ellipse") != std::string::npos);
    REQUIRE(cfg.times.size() == 3);
    CHECK(cfg.times[0] == 0.05);
    CHECK(cfg.times[2] == 0.2);
    CHECK(cfg.mode_count == 33);
    CHECK(cfg.tolerance == 0.01);
    CHECK(cfg.seed == 9);
    CHECK(cfg.refine == 1);
    CHECK(cfg.psi == "seeded");
    CHECK(cfg.out_dir == "somewhere");
    CHECK_FALSE(cfg.band.cap);
    CHECK(cfg.band.theta1 == 0.7);
    CHECK(cfg.band.theta2 == 2.0);
    CHECK(cfg.band.n_points == 500);
    CHECK(cfg.band_tol == 1e-5);
}

TEST_CASE("empty text yields the default configuration") {
    CHECK(canonical_text(parse_config_text("")) == canonical_text(ExperimentConfig{}));
}

TEST_CASE("bare keys land in [run]; headers and keys are case-insensitive") {
    const ExperimentConfig bare = parse_config_text("modes = 12\nseed = 7\n");
    CHECK(bare.mode_count == 12);
    CHECK(bare.seed == 7);

    const ExperimentConfig upper =
        parse_config_text("[DOMAIN]\nFAMILY = Disk\nRadius = 2.0\n");
    CHECK(upper.domain.describe().find("disk") != std::string::npos);

    const ExperimentConfig commented =
        parse_config_text("modes = 12   ; trailing comment\n   # whole-line comment\n");
    CHECK(commented.mode_count == 12);
}

TEST_CASE("time generators: explicit list, geometric, log-spaced") {
    const auto geo = parse_config_text("[times]\nstart = 0.1\nratio = 2\ncount = 4\n").times;
    REQUIRE(geo.size() == 4);
    CHECK(geo[0] == doctest::Approx(0.1));
    CHECK(geo[3] == doctest::Approx(0.8));

    const auto logspace =
        parse_config_text("[times]\nstart = 0.1\nstop = 10\ncount = 3\n").times;
    REQUIRE(logspace.size() == 3);
    CHECK(logspace[0] == doctest::Approx(0.1));
    CHECK(logspace[1] == doctest::Approx(1.0));
    CHECK(logspace[2] == doctest::Approx(10.0));

    const auto single = parse_config_text("[times]\nstart = 0.3\nstop = 1\ncount = 1\n").times;
    REQUIRE(single.size() == 1);
    CHECK(single[0] == 0.3);
}

TEST_CASE("domain families and the interface key parse through the factories") {
    CHECK(parse_config_text("[domain]\nfamily = annulus\ninner = 0.3\nouter = 1\n")
              .domain.describe()
              .find("annulus") != std::string::npos);
    CHECK(parse_config_text("[domain]\nfamily = radial\neps = 0.1\nm = 5\n")
              .domain.describe()
              .find("radial") != std::string::npos);
    CHECK(parse_config_text("[domain]\nfamily = polygon\npoly = 0 0, 1 0, 0 1\n")
              .domain.describe()
              .find("polygon") != std::string::npos);
    CHECK(parse_config_text("[domain]\ninterface = 0.6\n").domain.interface_radius == 0.6);

    const ExperimentConfig cap = parse_config_text("[band]\ntheta0 = 1.0\n");
    CHECK(cap.band.cap);
    CHECK(cap.band.theta2 == 1.0);
    CHECK(parse_config_text("[band]\ncap = true\n").band.cap);
}

TEST_CASE("malformed configs raise invalid_argument with diagnostics") {
    const char* bad[] = {
        "[nope]\nx = 1\n",                                  // unknown section
        "[domain]\nfamily = disk\nwat = 3\n",               // unknown key
        "[run]\nmodes = 10\nmodes = 11\n",                  // duplicate key
        "[domain\nfamily = disk\n",                         // malformed header
        "just a line\n",                                    // missing '='
        "= 3\n",                                            // empty key
        "[run]\nmodes = ten\n",                             // bad integer
        "[run]\ntolerance = abc\n",                         // bad number
        "[times]\nlist = 0.1, fish\n",                      // bad list entry
        "[times]\nlist = 0.1\ncount = 3\n",                 // list excludes generators
        "[times]\nstart = 0.1\nratio = 2\nstop = 1\ncount = 3\n",  // ratio xor stop
        "[times]\ncount = 3\n",                             // generator without start
        "[times]\nstart = 0.1\nratio = 2\ncount = 0\n",     // count < 1
        "[times]\nstart = 0.1\nstop = 0.05\ncount = 3\n",   // stop <= start
        "[domain]\nfamily = polygon\n",                     // missing poly
        "[domain]\nfamily = polygon\npoly = 0 0, 1 0, 0\n", // odd coordinate count
        "[domain]\nfamily = warp\n",                        // unknown family
        "[band]\ncap = maybe\n",                            // bad boolean
        "[band]\ntheta1 = 2.0\ntheta2 = 1.0\n",             // band range inverted
        "[run]\npsi = fish\n",                              // psi not in {one, seeded}
        "[run]\nrefine = 9\n",                              // refine out of range
        "[times]\nlist = 0.1, -0.5\n",                      // nonpositive time
        "[run]\ntolerance = -1\n",                          // nonpositive tolerance
        "[run]\nmodes = 0\n",                               // mode_count < 1
    };
    for (const char* text : bad) {
        CAPTURE(text);
        CHECK_THROWS_AS(parse_config_text(text), std::invalid_argument);
    }
}

TEST_CASE("parse_config reads files and rejects missing paths") {
    TempDir tmp;
    const fs::path file = tmp.path / "run.cfg";
    std::ofstream(file) << "[run]\nmodes = 21\n";
    CHECK(parse_config(file.string()).mode_count == 21);
    CHECK_THROWS_AS(parse_config((tmp.path / "absent.cfg").string()), std::invalid_argument);
}

TEST_CASE("fnv1a64 matches the published test vectors") {
    CHECK(fnv1a64("") == 14695981039346656037ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("config hash: stable for equal configs, sensitive to every field") {
    const ExperimentConfig base;
    const std::string h0 = config_hash(base);
    CHECK(h0.size() == 16);
    CHECK(h0.find_first_not_of("0123456789abcdef") == std::string::npos);
    CHECK(config_hash(ExperimentConfig{}) == h0);

    auto differs = [&](auto&& mutate) {
        ExperimentConfig c;
        mutate(c);
        return config_hash(c) != h0;
    };
    CHECK(differs([](ExperimentConfig& c) { c.refine = 1; }));
    CHECK(differs([](ExperimentConfig& c) { c.times.push_back(3.2); }));
    CHECK(differs([](ExperimentConfig& c) { c.mode_count = 121; }));
    CHECK(differs([](ExperimentConfig& c) { c.tolerance = 0.03; }));
    CHECK(differs([](ExperimentConfig& c) { c.seed = 2; }));
    CHECK(differs([](ExperimentConfig& c) { c.psi = "seeded"; }));
    CHECK(differs([](ExperimentConfig& c) { c.band.n_points = 1000; }));
    CHECK(differs([](ExperimentConfig& c) { c.band_tol = 1e-5; }));
    CHECK(differs([](ExperimentConfig& c) { c.domain = DomainSpec::disk_spec(2.0, 0.05); }));
    // The artifact directory is where results land, not what they are.
    ExperimentConfig moved;
    moved.out_dir = "elsewhere";
    CHECK(config_hash(moved) == h0);
}

TEST_CASE("CsvWriter renders 17-significant-digit rows after # metadata") {
    CsvWriter csv;
    csv.meta("tool", "demo");
    csv.header({"a", "b"});
    csv.row({1.0, 0.5});
    csv.row({1.0 / 3.0, 0.1});
    CHECK(csv.body() ==
          "# tool: demo\n"
          "a,b\n"
          "1,0.5\n"
          "0.33333333333333331,0.10000000000000001\n");
    CHECK_THROWS_AS(csv.row({1.0}), std::logic_error);
}

TEST_CASE("CsvWriter::write_atomic creates directories and leaves no temp file") {
    TempDir tmp;
    CsvWriter csv;
    csv.header({"x"});
    csv.row({2.0});
    const fs::path target = tmp.path / "nested" / "out.csv";
    csv.write_atomic(target.string());
    CHECK(slurp(target) == csv.body());
    CHECK_FALSE(fs::exists(target.string() + ".tmp"));
}

TEST_CASE("seeded boundary functions are zero-average, normalized, reproducible") {
    const Mesh mesh = make_domain(DomainSpec::disk_spec(1.0, 0.2));
    const SystemMatrices sys = assemble(mesh);
    const SpMat& B = sys.B_bnd();
    const Vector w = B * Vector::Ones(static_cast<int>(sys.boundary.size()));

    const Vector psi = zero_average_boundary_function(sys, 1);
    CHECK(psi.size() == static_cast<int>(sys.boundary.size()));
    CHECK(std::abs(w.dot(psi)) < 1e-12);
    CHECK(psi.dot(B * psi) == doctest::Approx(1.0).epsilon(1e-12));

    const Vector again = zero_average_boundary_function(sys, 1);
    CHECK((psi.array() == again.array()).all());  // bitwise: the generator is pinned

    const Vector other = zero_average_boundary_function(sys, 2);
    CHECK((psi - other).norm() > 0.1);
}

TEST_CASE("run_mesh writes a loadable mesh artifact") {
    TempDir tmp;
    ExperimentConfig cfg;
    cfg.domain = DomainSpec::disk_spec(1.0, 0.2);
    cfg.out_dir = tmp.path.string();
    CHECK(run_mesh(cfg) == kExitPass);
    std::ifstream in(tmp.path / "mesh.txt");
    REQUIRE(in.good());
    const Mesh loaded = load_mesh(in);
    CHECK(loaded.num_vertices() == make_domain(cfg.domain).num_vertices());
}

TEST_CASE("run_flux on a disk passes and its artifact is byte-reproducible") {
    TempDir tmp;
    ExperimentConfig cfg;
    cfg.domain = DomainSpec::disk_spec(1.0, 0.1);
    cfg.mode_count = 60;
    cfg.times = {0.1, 0.4};

    cfg.out_dir = (tmp.path / "one").string();
    CHECK(run("flux", cfg) == kExitPass);
    cfg.out_dir = (tmp.path / "two").string();
    CHECK(run("flux", cfg) == kExitPass);

    const std::string a = slurp(tmp.path / "one" / "flux.csv");
    const std::string b = slurp(tmp.path / "two" / "flux.csv");
    CHECK(a == b);
    CHECK(a.rfind("# tool: heatrig 1.0.0\n", 0) == 0);
    CHECK(a.find("# verdict: pass") != std::string::npos);
}

TEST_CASE("run_serrin flags the ellipse (exit 1); dispatcher maps errors to 2") {
    TempDir tmp;
    ExperimentConfig cfg;
    cfg.domain = DomainSpec::ellipse_spec(1.5, 1.0, 0.15);
    cfg.mode_count = 30;
    cfg.out_dir = tmp.path.string();
    CHECK(run("serrin", cfg) == kExitFail);

    CHECK(run("warp", cfg) == kExitInconclusive);  // unknown subcommand

    ExperimentConfig empty_times = cfg;
    empty_times.times.clear();
    CHECK(run("flux", empty_times) == kExitInconclusive);

    ExperimentConfig no_interface;
    no_interface.domain = DomainSpec::disk_spec(1.0, 0.2);
    no_interface.out_dir = tmp.path.string();
    CHECK(run("interior", no_interface) == kExitInconclusive);
}
