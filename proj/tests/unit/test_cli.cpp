#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include <sys/wait.h>

#include "dcop/golden.hpp"
#include "dcop/io.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "dcop_cli_tests";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
    const auto out = workdir() / "stdout.txt";
    const std::string cmd = env + " \"" DCOP_CLI_PATH "\" " + args + " > \"" + out.string() + "\" 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, dcop::read_file(out)};
}

std::string file(const std::string& name, const std::string& content) {
    const auto p = workdir() / name;
    dcop::write_file(p, content);
    return "\"" + p.string() + "\"";
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("validate exit codes") {
    CHECK(run("validate " + file("t1.json", dcop::golden::emit_golden("table1"))).code == 0);
    CHECK(run("validate " + file("t2.json", dcop::golden::emit_golden("table2"))).code == 0);
    const auto bad = file("bad.json", R"({"kind":"array","M":2,"L":2,"entries":[]})");
    const auto r = run("validate " + bad);
    CHECK(r.code == 1);
    CHECK(r.out.find("A2") != std::string::npos);
    CHECK(run("validate " + file("broken.json", "{\"kind\":")).code == 2);
    CHECK(run("validate " + file("zero.json", R"({"kind":"array","M":1,"L":2,"entries":[["1,1","1/0"]]})")).code == 2);
    CHECK(run("validate /nonexistent/file.json").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("").code == 2);
}

TEST_CASE("convert and extend") {
    const auto t2 = file("t2.json", dcop::golden::emit_golden("table2"));
    const auto c = run("convert --to copula " + t2);
    CHECK(c.code == 0);
    CHECK(c.out == dcop::golden::emit_golden("table1"));
    const auto back = run("convert --to array " + file("t1.json", c.out));
    CHECK(back.out == dcop::golden::emit_golden("table2"));

    const auto sub = file("sub.json", dcop::serialize(dcop::golden::example4_subcopula()));
    const auto e = run("extend " + sub);
    CHECK(e.code == 0);
    CHECK(e.out == dcop::serialize(dcop::extend(dcop::golden::example4_subcopula())));
    CHECK(run("extend " + file("t1b.json", c.out)).code == 2);
}

TEST_CASE("empirical and ties") {
    const auto s = file("s.csv", "member,a,b\n1,1,20\n2,2,10\n");
    const auto r = run("empirical " + s);
    CHECK(r.code == 0);
    CHECK(r.out.find("copula-sparse") != std::string::npos);
    const auto tied = file("tied.csv", "member,a,b\n1,1,20\n2,1,10\n");
    CHECK(run("empirical " + tied).code == 1);
    const auto r1 = run("empirical --ties random --seed 3 " + tied);
    CHECK(r1.code == 0);
    CHECK(run("empirical --ties random " + tied, "DCOP_SEED=3").out == r1.out);
    CHECK(run("empirical " + tied, "DCOP_SEED=x").code == 2);
}

TEST_CASE("demo names") {
    CHECK(run("demo table1").out == dcop::golden::emit_golden("table1"));
    CHECK(run("demo example4").code == 0);
    CHECK(run("demo table7").code == 2);
}

TEST_CASE("pipeline commands") {
    const auto dir = workdir() / "synth";
    CHECK(run("synth --seed 4 --dir \"" + dir.string() + "\"").code == 0);
    const auto raw = "\"" + (dir / "raw.csv").string() + "\"";
    const auto train = "\"" + (dir / "train.csv").string() + "\"";
    const auto hist = "\"" + (dir / "hist.csv").string() + "\"";
    const auto out = workdir() / "ecc.csv";
    CHECK(run("ecc --raw " + raw + " --train " + train + " --out \"" + out.string() + "\"").code == 0);
    CHECK(run("verify --ref " + raw + " --out \"" + out.string() + "\"").code == 0);

    const auto ind = workdir() / "ind.csv";
    CHECK(run("ecc --individual --seed 9 --raw " + raw + " --train " + train + " --out \"" + ind.string() + "\"").code == 0);
    CHECK(run("verify --ref " + raw + " --out \"" + ind.string() + "\"").code == 1);

    CHECK(run("ecc --method passthrough --raw " + raw).code == 0);
    CHECK(run("ecc --raw " + raw).code == 2);
    CHECK(run("schaake --hist " + hist + " --train " + train + " --size 30").code == 0);
    CHECK(run("schaake --hist " + hist + " --train " + train + " --size 29").code == 2);
    CHECK(run("schaake --hist " + hist + " --train " + train + " --raw " + raw + " --size 30").code == 0);
}

}
