#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oe/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run oe_run(std::vector<std::string> args) {
    args.insert(args.begin(), "oe");
    std::ostringstream out, err;
    int code = oe::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    auto d = fs::temp_directory_path() / ("oe_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("closure of a two-edge chain prints three edges") {
    auto d = scratch("closure");
    std::ofstream(d / "chain.tsv") << "dog\tIsA\tmammal\nmammal\tIsA\tanimal\n";
    auto r = oe_run({"closure", "--input", (d / "chain.tsv").string()});
    CHECK(r.code == 0);
    CHECK(count_lines(r.out) == 3);
    CHECK(r.out.find("dog\tIsA\tanimal") != std::string::npos);
    auto red = oe_run({"reduce", "--input", (d / "chain.tsv").string(), "--provenance"});
    CHECK(red.code == 0);
    CHECK(count_lines(red.out) == 2);
}

TEST_CASE("mine on a diamond reports one constraint of each kind") {
    auto d = scratch("mine");
    std::ofstream(d / "diamond.tsv") << "bottom\tIsA\tleft\nbottom\tIsA\tright\nleft\tIsA\ttop\nright\tIsA\ttop\n";
    auto r = oe_run({"mine", "--input", (d / "diamond.tsv").string(), "--output", (d / "c.tsv").string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("common_child=1") != std::string::npos);
    CHECK(r.out.find("common_parent=1") != std::string::npos);
    CHECK(count_lines(slurp(d / "c.tsv")) == 2);
}

TEST_CASE("synth is seeded") {
    auto a = scratch("synth_a"), b = scratch("synth_b");
    for (auto& dir : {a, b})
        CHECK(oe_run({"synth", "--out-dir", dir.string(), "--tree-depth", "3", "--seed", "7", "--corpus-bytes", "2000"})
                  .code == 0);
    for (auto f : {"full.tsv", "train.tsv", "dev.tsv", "test.tsv", "corpus.txt"}) CHECK(slurp(a / f) == slurp(b / f));
    CHECK(count_lines(slurp(a / "full.tsv")) == 14);
}

TEST_CASE("train, eval and export end to end") {
    auto d = scratch("e2e");
    REQUIRE(oe_run({"synth", "--out-dir", d.string(), "--tree-depth", "4", "--seed", "1"}).code == 0);
    auto t = oe_run({"train", "--train", (d / "train.tsv").string(), "--out", (d / "m.bin").string(), "--dim", "5",
                     "--epochs", "20", "--dev", (d / "dev.tsv").string(), "--report", (d / "report.txt").string()});
    REQUIRE(t.code == 0);
    CHECK(slurp(d / "report.txt").find("epoch=20") != std::string::npos);
    auto e = oe_run({"eval", "--model", (d / "m.bin").string(), "--dev", (d / "dev.tsv").string(), "--test",
                     (d / "test.tsv").string(), "--kv"});
    CHECK(e.code == 0);
    CHECK(e.out.rfind("accuracy=", 0) == 0);
    auto x = oe_run({"export", "--model", (d / "m.bin").string()});
    CHECK(x.code == 0);
    CHECK(count_lines(x.out) == 31);
}

TEST_CASE("config file and flags: the flag wins") {
    auto d = scratch("cfg");
    std::ofstream(d / "g.tsv") << "a\tIsA\tb\nb\tIsA\tc\n";
    std::ofstream(d / "c.cfg") << "dim=3\nepochs=2\n";
    REQUIRE(oe_run({"train", "--train", (d / "g.tsv").string(), "--out", (d / "m.bin").string(), "--config",
                    (d / "c.cfg").string(), "--dim", "6"})
                .code == 0);
    auto x = oe_run({"export", "--model", (d / "m.bin").string()});
    auto first = x.out.substr(0, x.out.find('\n'));
    CHECK(std::count(first.begin(), first.end(), ' ') == 5);
}

TEST_CASE("failures exit nonzero with one machine-readable error line") {
    auto d = scratch("errors");
    auto missing = oe_run({"closure", "--input", (d / "nope.tsv").string()});
    CHECK(missing.code != 0);
    auto unknown = oe_run({"closure", "--bogus"});
    CHECK(unknown.code == 2);
    CHECK(unknown.err.find("error: ") != std::string::npos);
    CHECK(oe_run({}).code == 2);

    std::ofstream(d / "empty.tsv") << "a\tHasA\tb\n";
    auto empty = oe_run({"closure", "--input", (d / "empty.tsv").string()});
    CHECK(empty.code == 1);
    CHECK(empty.err.rfind("error: empty_ontology:", 0) == 0);
    CHECK(count_lines(empty.err) == 1);

    std::ofstream(d / "g.tsv") << "a\tIsA\tb\n";
    auto bad_cfg = oe_run({"train", "--train", (d / "g.tsv").string(), "--out", (d / "m.bin").string(), "--window", "3"});
    CHECK(bad_cfg.code != 0);
    CHECK(bad_cfg.err.find("error: config") != std::string::npos);
}
