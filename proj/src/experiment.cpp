#include "ccs/experiment.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ccs/clique.hpp"
#include "ccs/errors.hpp"
#include "ccs/gen.hpp"
#include "ccs/netsort.hpp"
#include "ccs/objsort.hpp"
#include "ccs/oracle.hpp"
#include "ccs/patmatch.hpp"
#include "ccs/sacon.hpp"
#include "ccs/strsort.hpp"

namespace ccs {

const char* problem_name(Problem p) {
    switch (p) {
        case Problem::objsort: return "objsort";
        case Problem::strsort: return "strsort";
        case Problem::pm: return "pm";
        case Problem::sa: return "sa";
        case Problem::netsort: return "netsort";
    }
    return "?";
}

Problem parse_problem(const std::string& name) {
    for (Problem p : {Problem::objsort, Problem::strsort, Problem::pm, Problem::sa,
                      Problem::netsort})
        if (name == problem_name(p)) return p;
    throw IoError("unknown problem '" + name + "'");
}

void ExperimentSpec::validate() const {
    if (n < 8 || n > 1024 || (n & (n - 1)) != 0)
        throw IoError("n must be a power of two in [8..1024]");
    double d = effective_density();
    if (d <= 0.0 || d > 1.0) throw IoError("density must be in (0, 1]");
}

double ExperimentSpec::effective_density() const {
    return density > 0.0 ? density : default_density(problem);
}

double default_density(Problem p) {
    switch (p) {
        case Problem::objsort: return 0.075;
        case Problem::strsort: return 0.075;
        case Problem::pm: return 0.08;
        case Problem::sa: return 0.03;
        case Problem::netsort: return 0.25;
    }
    return 0.05;
}

std::string RunReport::stable_row() const {
    std::ostringstream os;
    os << problem << ',' << n << ',' << seed << ',' << rounds << ',' << max_send << ','
       << max_recv << ',' << aux_peak << ',' << comparisons << ',' << (verified ? "true" : "false");
    return os.str();
}

std::string RunReport::csv_row() const { return stable_row() + ',' + std::to_string(wall_ms); }

namespace {

uint32_t load_factor_from_env() {
    if (const char* s = std::getenv("CLIQUE_STRINGS_CL")) {
        long v = std::atol(s);
        if (v < 1) throw IoError("CLIQUE_STRINGS_CL must be a positive integer");
        return uint32_t(v);
    }
    return 8;
}

std::vector<std::vector<ObjectRecord>> objects_from_payloads(
    uint32_t n, const std::vector<std::vector<uint64_t>>& payloads) {
    std::vector<std::vector<ObjectRecord>> out(n);
    size_t v = 0;
    // payloads are dealt round-robin so every node holds a share
    for (size_t i = 0; i < payloads.size(); ++i) {
        ObjectRecord o;
        o.origin_node = uint32_t(v);
        o.origin_index = uint32_t(out[v].size());
        o.payload = payloads[i];
        out[v].push_back(std::move(o));
        v = (v + 1) % n;
    }
    return out;
}

std::vector<std::vector<uint64_t>> oracle_rank_by_origin(
    const std::vector<std::vector<ObjectRecord>>& objs) {
    std::vector<std::vector<uint64_t>> payloads;
    for (const auto& node : objs)
        for (const auto& o : node) payloads.push_back(o.payload);
    auto flat_ranks = oracle::naive_string_sort(payloads);
    std::vector<std::vector<uint64_t>> out(objs.size());
    size_t k = 0;
    for (size_t v = 0; v < objs.size(); ++v)
        for (size_t i = 0; i < objs[v].size(); ++i) out[v].push_back(flat_ranks[k++]);
    return out;
}

}  // namespace

RunReport run(const ExperimentSpec& spec, const std::string& csv_path) {
    spec.validate();
    auto t0 = std::chrono::steady_clock::now();

    SimConfig cfg;
    cfg.n_nodes = spec.n;
    cfg.load_factor = load_factor_from_env();
    cfg.backend = spec.backend;
    cfg.seed = spec.seed;
    Clique cq(cfg);

    const double density = spec.effective_density();
    const uint64_t budget = cfg.load_limit() * uint64_t(spec.n);
    bool verified = false;

    switch (spec.problem) {
        case Problem::objsort:
        case Problem::netsort: {
            std::vector<std::vector<ObjectRecord>> objs;
            if (!spec.input_path.empty())
                objs = objects_from_payloads(spec.n, read_objects_file(spec.input_path));
            else if (spec.problem == Problem::netsort)
                objs = gen_netsort_objects(spec.n, cfg.load_factor, density, spec.seed);
            else
                objs = gen_objects(spec.n, cfg.load_factor, density, spec.seed);

            ObjectSet set(spec.n);
            set.per_node = objs;
            Frac eps = spec.problem == Problem::netsort ? Frac{0, 1} : spec.epsilon;
            auto ranks = solve_object_sort(cq, std::move(set), eps);
            if (spec.verify) {
                auto expect = oracle_rank_by_origin(objs);
                if (ranks != expect) throw VerificationFailed("object ranks differ from oracle");
                verified = true;
            }
            break;
        }
        case Problem::strsort: {
            std::vector<std::vector<uint64_t>> strings;
            if (!spec.input_path.empty())
                strings = read_strings_file(spec.input_path);
            else
                strings = gen_strings(spec.n, cfg.load_factor, density, spec.seed);
            DistStringSet set = make_string_set(spec.n, strings, budget);
            std::vector<uint32_t> holder(set.string_count());
            for (uint64_t j = 0; j < set.string_count(); ++j) holder[j] = set.start_node(j);
            StringSortResult res = string_sort(cq, set);
            if (spec.verify) {
                auto expect = oracle::naive_string_sort(strings);
                if (res.rank != expect) throw VerificationFailed("string ranks differ from oracle");
                for (uint64_t j = 0; j < set.string_count(); ++j)
                    if (res.holder[j] != holder[j])
                        throw VerificationFailed("rank not delivered to the start node");
                verified = true;
            }
            break;
        }
        case Problem::pm: {
            std::vector<uint64_t> pattern, text;
            std::vector<uint64_t> planted;
            if (!spec.input_path.empty()) {
                auto [p, t] = read_pm_file(spec.input_path);
                pattern = std::move(p);
                text = std::move(t);
            } else {
                PmCase pc = gen_pm(spec.n, cfg.load_factor, density, spec.seed);
                pattern = std::move(pc.pattern);
                text = std::move(pc.text);
                planted = std::move(pc.planted);
            }
            PmInput in = make_pm_input(spec.n, pattern, text, budget);
            auto offsets = flatten_offsets(pm_match(cq, in));
            if (spec.verify) {
                auto expect = oracle::naive_pm(pattern, text);
                if (offsets != expect) throw VerificationFailed("offsets differ from oracle");
                for (uint64_t p : planted)
                    if (!std::binary_search(offsets.begin(), offsets.end(), p))
                        throw VerificationFailed("planted occurrence missed");
                verified = true;
            }
            break;
        }
        case Problem::sa: {
            std::vector<uint64_t> s;
            if (!spec.input_path.empty()) {
                auto strings = read_strings_file(spec.input_path);
                if (strings.empty()) throw IoError("sa input file holds no string");
                s = strings.front();
            } else {
                s = gen_sa_string(spec.n, cfg.load_factor, density, spec.seed);
            }
            SaLcpResult res = sa_and_lcp(cq, DistWords::chop(s, spec.n));
            if (spec.verify) {
                auto expect = oracle::naive_sa_lcp(s);
                if (res.sa_flat() != expect.sa) throw VerificationFailed("SA differs from oracle");
                if (res.lcp_flat() != expect.lcp)
                    throw VerificationFailed("LCP differs from oracle");
                verified = true;
            }
            break;
        }
    }

    auto t1 = std::chrono::steady_clock::now();
    RunReport rep;
    rep.problem = problem_name(spec.problem);
    rep.n = spec.n;
    rep.seed = spec.seed;
    rep.rounds = cq.ledger().rounds_charged;
    rep.max_send = cq.ledger().max_send_load;
    rep.max_recv = cq.ledger().max_recv_load;
    rep.aux_peak = cq.ledger().aux_nodes_peak;
    rep.comparisons = cq.ledger().comparisons;
    rep.verified = verified;
    rep.wall_ms = uint64_t(std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count());

    if (!csv_path.empty()) {
        bool fresh = !std::filesystem::exists(csv_path) ||
                     std::filesystem::file_size(csv_path) == 0;
        std::ofstream f(csv_path, std::ios::app);
        if (!f) throw IoError("cannot open csv file " + csv_path);
        if (fresh) f << kCsvHeader << '\n';
        f << rep.csv_row() << '\n';
    }
    return rep;
}

std::vector<RunReport> sweep(ExperimentSpec spec, const std::vector<uint32_t>& n_list,
                             const std::vector<uint64_t>& seeds, const std::string& csv_path) {
    std::vector<RunReport> out;
    std::vector<uint32_t> ns = n_list.empty() ? std::vector<uint32_t>{spec.n} : n_list;
    std::vector<uint64_t> ss = seeds.empty() ? std::vector<uint64_t>{spec.seed} : seeds;
    for (uint32_t n : ns)
        for (uint64_t seed : ss) {
            spec.n = n;
            spec.seed = seed;
            out.push_back(run(spec, csv_path));
        }
    return out;
}

// ---- input files ------------------------------------------------------

namespace {
void check_text_char(uint64_t c) {
    if (c < 1 || c > 255 || c == '\n' || c == '\r')
        throw IoError("character " + std::to_string(c) + " not representable in a text file");
}
}  // namespace

void write_strings_file(const std::string& path,
                        const std::vector<std::vector<uint64_t>>& strings) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path);
    for (const auto& s : strings) {
        for (uint64_t c : s) {
            check_text_char(c);
            f.put(char(uint8_t(c)));
        }
        f.put('\n');
    }
}

std::vector<std::vector<uint64_t>> read_strings_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read " + path);
    std::vector<std::vector<uint64_t>> out;
    std::string line;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) throw IoError("empty string in " + path);
        std::vector<uint64_t> s;
        for (unsigned char c : line) {
            if (c == 0) throw IoError("NUL byte in " + path);
            s.push_back(c);
        }
        out.push_back(std::move(s));
    }
    return out;
}

void write_pm_file(const std::string& path, const std::vector<uint64_t>& pattern,
                   const std::vector<uint64_t>& text) {
    write_strings_file(path, {pattern, text});
}

std::pair<std::vector<uint64_t>, std::vector<uint64_t>> read_pm_file(const std::string& path) {
    auto lines = read_strings_file(path);
    if (lines.size() != 2) throw IoError(path + " must hold exactly two lines (P, then T)");
    return {lines[0], lines[1]};
}

void write_objects_file(const std::string& path,
                        const std::vector<std::vector<uint64_t>>& payloads) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path);
    auto put_u64 = [&](uint64_t v) {
        for (int i = 0; i < 8; ++i) f.put(char(uint8_t(v >> (8 * i))));
    };
    put_u64(payloads.size());
    for (const auto& p : payloads) {
        put_u64(p.size());
        for (uint64_t w : p) put_u64(w);
    }
}

std::vector<std::vector<uint64_t>> read_objects_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read " + path);
    auto get_u64 = [&]() {
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            int c = f.get();
            if (c == EOF) throw IoError("truncated objects file " + path);
            v |= uint64_t(uint8_t(c)) << (8 * i);
        }
        return v;
    };
    uint64_t count = get_u64();
    std::vector<std::vector<uint64_t>> out(count);
    for (auto& p : out) {
        p.resize(get_u64());
        for (auto& w : p) w = get_u64();
    }
    return out;
}

void gen_input(const ExperimentSpec& spec, const std::string& path) {
    spec.validate();
    const uint32_t cl = load_factor_from_env();
    const double d = spec.effective_density();
    switch (spec.problem) {
        case Problem::objsort: {
            auto objs = gen_objects(spec.n, cl, d, spec.seed);
            std::vector<std::vector<uint64_t>> payloads;
            for (auto& node : objs)
                for (auto& o : node) payloads.push_back(o.payload);
            write_objects_file(path, payloads);
            break;
        }
        case Problem::netsort: {
            auto objs = gen_netsort_objects(spec.n, cl, d, spec.seed);
            std::vector<std::vector<uint64_t>> payloads;
            for (auto& node : objs)
                for (auto& o : node) payloads.push_back(o.payload);
            write_objects_file(path, payloads);
            break;
        }
        case Problem::strsort:
            write_strings_file(path, gen_strings(spec.n, cl, d, spec.seed));
            break;
        case Problem::pm: {
            PmCase pc = gen_pm(spec.n, cl, d, spec.seed);
            write_pm_file(path, pc.pattern, pc.text);
            break;
        }
        case Problem::sa:
            write_strings_file(path, {gen_sa_string(spec.n, cl, d, spec.seed)});
            break;
    }
}

}  // namespace ccs
