#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ccs/config.hpp"
#include "ccs/mathutil.hpp"

namespace ccs {

enum class Problem : uint8_t { objsort, strsort, pm, sa, netsort };

const char* problem_name(Problem p);
Problem parse_problem(const std::string& name);  // throws IoError on junk

struct ExperimentSpec {
    Problem problem = Problem::strsort;
    uint32_t n = 16;
    uint64_t seed = 1;
    Frac epsilon{2, 3};      // objsort only
    std::string input_path;  // optional; generated per seed when empty
    double density = 0.0;    // fraction of c_L*n^2; <= 0 picks the default
    bool verify = false;
    RoutingBackend backend = RoutingBackend::abstract;

    void validate() const;  // n a power of two in [8..1024], density in (0,1]
    double effective_density() const;
};

struct RunReport {
    std::string problem;
    uint32_t n = 0;
    uint64_t seed = 0;
    uint64_t rounds = 0;
    uint64_t max_send = 0;
    uint64_t max_recv = 0;
    uint64_t aux_peak = 0;
    uint64_t comparisons = 0;
    bool verified = false;
    uint64_t wall_ms = 0;

    std::string csv_row() const;
    std::string stable_row() const;  // everything but wall_ms
};

inline constexpr const char* kCsvHeader =
    "problem,n,seed,rounds,max_send,max_recv,aux_peak,comparisons,verified,wall_ms";

// per-problem default density, tuned so every routing invocation stays
// within the c_L*n load budget at desk scale
double default_density(Problem p);

// Executes one experiment; throws VerificationFailed when verify is set and
// the oracle disagrees. Appends a CSV row when csv_path is nonempty.
RunReport run(const ExperimentSpec& spec, const std::string& csv_path = "");

// cross product of n values and seeds, rows in order
std::vector<RunReport> sweep(ExperimentSpec spec, const std::vector<uint32_t>& n_list,
                             const std::vector<uint64_t>& seeds, const std::string& csv_path);

// writes the deterministic input files for a spec
void gen_input(const ExperimentSpec& spec, const std::string& path);

// input file formats
void write_strings_file(const std::string& path, const std::vector<std::vector<uint64_t>>& strings);
std::vector<std::vector<uint64_t>> read_strings_file(const std::string& path);
void write_pm_file(const std::string& path, const std::vector<uint64_t>& pattern,
                   const std::vector<uint64_t>& text);
std::pair<std::vector<uint64_t>, std::vector<uint64_t>> read_pm_file(const std::string& path);
void write_objects_file(const std::string& path,
                        const std::vector<std::vector<uint64_t>>& payloads);
std::vector<std::vector<uint64_t>> read_objects_file(const std::string& path);

}  // namespace ccs
