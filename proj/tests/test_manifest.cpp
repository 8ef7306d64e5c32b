#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "seqwarp/errors.hpp"
#include "seqwarp/manifest.hpp"
#include "test_support.hpp"

using namespace seqwarp;

namespace {

std::string read(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string shipped_text(const std::string& name) {
    return read(std::string(SEQWARP_MANIFEST_DIR) + "/" + name + ".toml");
}

std::string data_dir() { return std::string(SEQWARP_MANIFEST_DIR) + "/../tests/data"; }

std::vector<std::string> errors_of(const std::string& text) {
    try {
        parse_manifest(text);
    } catch (const ManifestError& e) {
        return e.errors();
    }
    return {};
}

bool mentions(const std::vector<std::string>& errs, const std::string& needle) {
    return std::any_of(errs.begin(), errs.end(), [&](const std::string& e) { return e.find(needle) != std::string::npos; });
}

const char* kMinimal = R"([ambient]
real_dim = 4

[chart]
coords = ["u1", "u2"]
holomorphic = ["u1", "u2"]
domain.u1 = [0, 1]
domain.u2 = [0, 1]

[immersion]
x1 = "u1"
x2 = "u2"
x3 = "0"
x4 = "0"
)";

}  // namespace

TEST_CASE("every shipped manifest validates") {
    int count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(SEQWARP_MANIFEST_DIR)) {
        if (entry.path().extension() != ".toml") continue;
        CAPTURE(entry.path().string());
        CHECK_NOTHROW(load_manifest(entry.path().string()));
        ++count;
    }
    CHECK(count >= 6);
}

TEST_CASE("E18 example manifest contents") {
    const Manifest m = testing::shipped("example31");
    CHECK(m.name == "example31");
    CHECK(m.immersion.ambient_dim() == 18);
    CHECK(m.immersion.dim() == 5);
    CHECK(m.immersion.partition.size(Role::holomorphic) == 2);
    CHECK(m.immersion.partition.size(Role::totally_real) == 1);
    CHECK(m.immersion.partition.size(Role::slant) == 2);
    CHECK(m.immersion.partition.ordering == Ordering::t_perp_theta);
    CHECK(m.holomorphic_curvature == 0.0);
    CHECK(m.J.rows() == 18);
    CHECK(m.warping.f.has_value());
    CHECK(m.warping.h.has_value());
}

TEST_CASE("minimal manifest parses with defaults") {
    const Manifest m = parse_manifest(kMinimal);
    CHECK(m.complex_structure == "consecutive-pairs");
    CHECK(m.immersion.partition.ordering == Ordering::t_perp_theta);
    CHECK(!m.has_ordering_tag);
    CHECK(!m.warping.f.has_value());
    CHECK(!m.sin_floor.has_value());
}

TEST_CASE("hash is the FNV-1a digest of the text") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(hex64(0xcbf29ce484222325ULL) == "cbf29ce484222325");
    const std::string text = shipped_text("example31");
    CHECK(parse_manifest(text).hash == parse_manifest(text).hash);
    CHECK(parse_manifest(text).hash != parse_manifest(text + "\n").hash);
}

TEST_CASE("missing immersion coordinate is reported with counts") {
    const auto errs = errors_of(read(data_dir() + "/missing_x18.toml"));
    CHECK(mentions(errs, "immersion: expected 18 coordinates, found 17"));
}

TEST_CASE("coordinate in two factors is named") {
    const auto errs = errors_of(read(data_dir() + "/overlap.toml"));
    CHECK(mentions(errs, "coordinate 'u1' is assigned to both holomorphic and totally_real"));
}

TEST_CASE("every problem is collected") {
    std::string text = kMinimal;
    text.replace(text.find("x3 = \"0\""), 8, "x3 = \"cos(\"");
    text += "[warping]\nf = \"q + 1\"\ncolour = \"red\"\n";
    const auto errs = errors_of(text);
    CHECK(errs.size() >= 3);
    CHECK(mentions(errs, "immersion.x3: syntax error at offset 4"));
    CHECK(mentions(errs, "unknown identifier 'q'"));
    CHECK(mentions(errs, "unknown key warping.colour"));
}

TEST_CASE("structural errors") {
    auto with = [](const std::string& from, const std::string& to) {
        std::string t = kMinimal;
        t.replace(t.find(from), from.size(), to);
        return errors_of(t);
    };
    CHECK(mentions(with("real_dim = 4", "real_dim = 5"), "positive even integer"));
    CHECK(mentions(with("holomorphic = [\"u1\", \"u2\"]", "holomorphic = [\"u1\"]\ntotally_real = [\"u2\"]\n"
                                                             "slant = []\nordering = \"sideways\""),
                   "chart.ordering"));
    CHECK(mentions(with("holomorphic = [\"u1\", \"u2\"]", "holomorphic = [\"u1\"]\nslant = [\"u2\"]"),
                   "even dimension, found 1"));
    CHECK(mentions(with("holomorphic = [\"u1\", \"u2\"]", "holomorphic = [\"u1\"]"),
                   "'u2' is not assigned to any factor"));
    CHECK(mentions(with("domain.u2 = [0, 1]", "domain.u2 = [1, 0]"), "empty interval"));
    CHECK(mentions(with("domain.u2 = [0, 1]", ""), "missing domain.u2"));
    CHECK(mentions(with("[chart]", "[charts]"), "unknown section [charts]"));
    CHECK(mentions(with("coords = [\"u1\", \"u2\"]", "coords = [\"u1\", \"sin\"]"), "reserved name"));
}

TEST_CASE("complex structure matrix is validated") {
    std::string good = kMinimal;
    good.replace(good.find("real_dim = 4"), 12,
                 "real_dim = 4\ncomplex_structure = [[0,-1,0,0],[1,0,0,0],[0,0,0,-1],[0,0,1,0]]");
    const Manifest m = parse_manifest(good);
    CHECK(m.complex_structure == "matrix");
    CHECK((m.J * m.J + Eigen::MatrixXd::Identity(4, 4)).norm() == 0.0);

    std::string bad = kMinimal;
    bad.replace(bad.find("real_dim = 4"), 12,
                "real_dim = 4\ncomplex_structure = [[0,-1,0,0],[1,0,0,0],[0,0,0,-2],[0,0,1,0]]");
    CHECK(mentions(errors_of(bad), "not an orthogonal complex structure"));
    std::string named = kMinimal;
    named.replace(named.find("real_dim = 4"), 12, "real_dim = 4\ncomplex_structure = \"swapped\"");
    CHECK(mentions(errors_of(named), "unknown name 'swapped'"));
}

TEST_CASE("warping functions may only depend on earlier factors") {
    auto swap = [](std::string t, const std::string& from, const std::string& to) {
        return t.replace(t.find(from), from.size(), to);
    };
    const std::string text = swap(shipped_text("example31"), "h = \"sqrt(1 + u1^2 + u2^2 + t1^2)\"", "h = \"sqrt(1 + t2^2)\"");
    CHECK(mentions(errors_of(text), "warping.h: depends on 't2', which is not a first- or second-factor coordinate"));
    const std::string f = swap(shipped_text("example31"), "f = \"sqrt(2 + u1^2 + u2^2)\"", "f = \"sqrt(2 + t1^2)\"");
    CHECK(mentions(errors_of(f), "warping.f: depends on 't1', which is not a first-factor coordinate"));
}

TEST_CASE("tolerances and sin floor") {
    std::string text = kMinimal;
    text += "[tolerances]\ndefault = 1e-7\ngauss_eq = 1e-9\nsin_floor = 0.2\n";
    const Manifest m = parse_manifest(text);
    CHECK(m.tolerances.at("default") == 1e-7);
    CHECK(m.tolerances.at("gauss_eq") == 1e-9);
    CHECK(*m.sin_floor == 0.2);
    CHECK(mentions(errors_of(std::string(kMinimal) + "[tolerances]\ngauss_eq = -1\n"), "non-negative"));
}

TEST_CASE("unreadable file") {
    CHECK_THROWS_AS(load_manifest("/nonexistent/manifest.toml"), ManifestError);
}
