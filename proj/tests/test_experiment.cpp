#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ccs/experiment.hpp"
#include "ccs/gen.hpp"
#include "ccs/oracle.hpp"

using namespace ccs;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) {
        path = (std::filesystem::temp_directory_path() / name).string();
        std::remove(path.c_str());
    }
    ~TempFile() { std::remove(path.c_str()); }
};

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(f), {});
}

}  // namespace

TEST_CASE("spec validation") {
    ExperimentSpec spec;
    spec.problem = Problem::strsort;
    spec.n = 12;
    CHECK_THROWS_AS(spec.validate(), IoError);
    spec.n = 16;
    spec.density = 1.5;
    CHECK_THROWS_AS(spec.validate(), IoError);
    spec.density = 0.5;
    spec.validate();
}

TEST_CASE("gen_input is byte-identical per seed") {
    for (Problem p : {Problem::strsort, Problem::pm, Problem::objsort, Problem::sa}) {
        ExperimentSpec spec;
        spec.problem = p;
        spec.n = 16;
        spec.seed = 1;
        TempFile a("ccs_gen_a.txt"), b("ccs_gen_b.txt");
        gen_input(spec, a.path);
        gen_input(spec, b.path);
        CHECK(slurp(a.path) == slurp(b.path));
        CHECK(!slurp(a.path).empty());
    }
}

TEST_CASE("density 1.0 fills the whole budget for string inputs") {
    auto strings = gen_strings(16, 8, 1.0, 3);
    uint64_t total = 0;
    for (const auto& s : strings) total += s.size();
    CHECK(total == uint64_t(1.0 * 8 * 16 * 16));
}

TEST_CASE("periodic generators have the declared period") {
    auto s = gen_sa_string(16, 8, 0.1, 2);  // variant 2: period 3
    for (size_t i = 3; i < s.size(); ++i) CHECK(s[i] == s[i - 3]);
    auto pc = gen_pm(16, 8, 0.1, 2);  // variant 2: period 2
    for (size_t i = 2; i < pc.pattern.size(); ++i) CHECK(pc.pattern[i] == pc.pattern[i - 2]);
}

TEST_CASE("string file round-trip") {
    TempFile f("ccs_strings.txt");
    std::vector<std::vector<uint64_t>> strings = {{1, 2, 3}, {200, 255}, {9}};
    write_strings_file(f.path, strings);
    CHECK(read_strings_file(f.path) == strings);
    CHECK_THROWS_AS(write_strings_file(f.path, {{10}}), IoError);  // newline byte
}

TEST_CASE("objects file round-trip") {
    TempFile f("ccs_objects.bin");
    std::vector<std::vector<uint64_t>> payloads = {{5, 6, 7}, {1}, {1u << 30, 42}};
    write_objects_file(f.path, payloads);
    CHECK(read_objects_file(f.path) == payloads);
}

TEST_CASE("pm file round-trip") {
    TempFile f("ccs_pm.txt");
    write_pm_file(f.path, {1, 2}, {1, 2, 1, 2});
    auto [p, t] = read_pm_file(f.path);
    CHECK(p == std::vector<uint64_t>{1, 2});
    CHECK(t == std::vector<uint64_t>{1, 2, 1, 2});
}

TEST_CASE("run: verified runs for every problem") {
    for (Problem p : {Problem::objsort, Problem::strsort, Problem::pm, Problem::sa,
                      Problem::netsort}) {
        ExperimentSpec spec;
        spec.problem = p;
        spec.n = 16;
        spec.seed = 7;
        spec.verify = true;
        RunReport rep = run(spec);
        CHECK(rep.verified);
        CHECK(rep.rounds > 0);
        CHECK(rep.problem == problem_name(p));
    }
}

TEST_CASE("explicit backend verifies the same pipelines") {
    for (Problem p : {Problem::strsort, Problem::sa}) {
        ExperimentSpec spec;
        spec.problem = p;
        spec.n = 16;
        spec.seed = 2;
        spec.verify = true;
        spec.backend = RoutingBackend::explicit_matching;
        RunReport rep = run(spec);
        CHECK(rep.verified);
        CHECK(rep.rounds > 0);
    }
}

TEST_CASE("run from generated input file matches the in-memory run") {
    ExperimentSpec spec;
    spec.problem = Problem::strsort;
    spec.n = 16;
    spec.seed = 5;
    spec.verify = true;
    RunReport mem = run(spec);

    TempFile f("ccs_strsort_in.txt");
    gen_input(spec, f.path);
    ExperimentSpec from_file = spec;
    from_file.input_path = f.path;
    RunReport file = run(from_file);
    CHECK(file.stable_row() == mem.stable_row());
}

TEST_CASE("csv rows are byte-identical across repeated runs") {
    ExperimentSpec spec;
    spec.problem = Problem::pm;
    spec.n = 16;
    spec.seed = 3;
    spec.verify = true;

    TempFile a("ccs_csv_a.csv"), b("ccs_csv_b.csv");
    sweep(spec, {16}, {1, 2, 3}, a.path);
    sweep(spec, {16}, {1, 2, 3}, b.path);

    auto strip_wall = [](const std::string& text) {
        std::string out;
        size_t start = 0;
        while (start < text.size()) {
            size_t end = text.find('\n', start);
            if (end == std::string::npos) end = text.size();
            std::string line = text.substr(start, end - start);
            size_t comma = line.rfind(',');
            out += line.substr(0, comma) + "\n";
            start = end + 1;
        }
        return out;
    };
    CHECK(strip_wall(slurp(a.path)) == strip_wall(slurp(b.path)));
}

TEST_CASE("sweep produces the full cross product in order") {
    ExperimentSpec spec;
    spec.problem = Problem::objsort;
    spec.n = 16;
    auto reports = sweep(spec, {8, 16}, {1, 2, 3}, "");
    REQUIRE(reports.size() == 6);
    CHECK(reports[0].n == 8);
    CHECK(reports[0].seed == 1);
    CHECK(reports[5].n == 16);
    CHECK(reports[5].seed == 3);
}

TEST_CASE("csv header matches the frozen schema") {
    CHECK(std::string(kCsvHeader) ==
          "problem,n,seed,rounds,max_send,max_recv,aux_peak,comparisons,verified,wall_ms");
}
