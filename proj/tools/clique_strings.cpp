// Batch experiment runner for the clique string algorithms: generates or
// loads inputs, runs the selected pipeline on the simulator, verifies
// against the sequential reference when asked, and reports round/load
// figures as CSV rows.

#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "ccs/errors.hpp"
#include "ccs/experiment.hpp"

namespace {

std::vector<uint64_t> parse_u64_list(const std::string& csv) {
    std::vector<uint64_t> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stoull(item));
    return out;
}

ccs::Frac parse_epsilon(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) {
        uint32_t v = uint32_t(std::stoul(s));
        return ccs::Frac{v, 1};
    }
    return ccs::Frac{uint32_t(std::stoul(s.substr(0, slash))),
                     uint32_t(std::stoul(s.substr(slash + 1)))};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"congested clique string algorithms"};

    std::string problem = "strsort";
    uint32_t n = 16;
    uint64_t seed = 1;
    std::string epsilon = "2/3";
    double density = 0.0;
    std::string input, backend = "abstract", csv, sweep_n, seeds;
    bool verify = false;

    app.add_option("--problem", problem, "objsort|strsort|pm|sa|netsort")->required();
    app.add_option("--n", n, "clique size, a power of two in [8..1024]");
    app.add_option("--seed", seed, "64-bit input seed");
    app.add_option("--epsilon", epsilon, "size-class exponent for objsort, e.g. 2/3 or 0");
    app.add_option("--density", density, "input size as a fraction of c_L*n^2");
    app.add_option("--input", input, "input file (generated from the seed when absent)");
    app.add_option("--backend", backend, "abstract|explicit")
        ->check(CLI::IsMember({"abstract", "explicit"}));
    app.add_flag("--verify", verify, "check the result against the sequential reference");
    app.add_option("--csv", csv, "append one CSV row per run");
    app.add_option("--sweep-n", sweep_n, "comma list of n values");
    app.add_option("--seeds", seeds, "comma list of seeds");
    CLI11_PARSE(app, argc, argv);

    try {
        ccs::ExperimentSpec spec;
        spec.problem = ccs::parse_problem(problem);
        spec.n = n;
        spec.seed = seed;
        spec.epsilon = parse_epsilon(epsilon);
        spec.density = density;
        spec.input_path = input;
        spec.verify = verify;
        spec.backend = backend == "explicit" ? ccs::RoutingBackend::explicit_matching
                                             : ccs::RoutingBackend::abstract;

        std::vector<uint32_t> n_list;
        for (uint64_t v : parse_u64_list(sweep_n)) n_list.push_back(uint32_t(v));
        std::vector<uint64_t> seed_list = parse_u64_list(seeds);

        std::cout << ccs::kCsvHeader << '\n';
        for (const ccs::RunReport& r : ccs::sweep(spec, n_list, seed_list, csv))
            std::cout << r.csv_row() << '\n';
        return 0;
    } catch (const ccs::VerificationFailed& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const ccs::IoError& e) {
        std::cerr << e.what() << '\n';
        return 4;
    } catch (const ccs::SimError& e) {
        std::cerr << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 3;
    }
}
