#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <mutex>

#include "berkdyn/report.hpp"

using namespace berkdyn;

namespace {

// configuration precedence: command-line flags > BERKDYN_* environment
// variables > key=value config file
std::string layered(const std::string& cli_value, const char* env_name,
                    const std::map<std::string, std::string>& config, const std::string& key,
                    const std::string& fallback) {
    if (!cli_value.empty()) return cli_value;
    if (const char* e = std::getenv(env_name); e && *e) return e;
    auto it = config.find(key);
    if (it != config.end()) return it->second;
    return fallback;
}

std::map<std::string, std::string> read_config(const std::string& path) {
    std::map<std::string, std::string> out;
    if (path.empty()) return out;
    std::ifstream in(path);
    if (!in) {
        std::cerr << "config file not found: " << path << "\n";
        std::exit(2);
    }
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        out[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return out;
}

void print_human(const Json& j) {
    // compact key: value lines; nested objects inline
    for (const auto& [key, val] : j.items()) {
        if (key == "trace") continue;  // too noisy for text mode
        std::cout << key << ": " << (val.is_string() ? val.get<std::string>() : val.dump()) << "\n";
    }
}

int run_one(const JobSpec& job, bool json_mode) {
    try {
        Json result = run(job);
        if (json_mode)
            std::cout << result.dump() << "\n";
        else
            print_human(result);
        return 0;
    } catch (const Error& e) {
        Json err{{"error", error_name(e.code())}, {"message", e.what()}};
        if (json_mode)
            std::cout << err.dump() << "\n";
        else
            std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        if (json_mode)
            std::cout << Json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
        else
            std::cerr << "internal error: " << e.what() << "\n";
        return 5;
    }
}

int run_batch(std::istream& in, int jobs) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) lines.push_back(line);
    }
    std::vector<std::string> outputs(lines.size());
    std::vector<int> codes(lines.size(), 0);
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= lines.size()) return;
            try {
                JobSpec job = job_from_json(Json::parse(lines[i]));
                Json result = run(job);
                outputs[i] = result.dump();
            } catch (const Error& e) {
                outputs[i] = Json{{"error", error_name(e.code())}, {"message", e.what()}}.dump();
                codes[i] = exit_code_for(e.code());
            } catch (const std::exception& e) {
                outputs[i] = Json{{"error", "Internal"}, {"message", e.what()}}.dump();
                codes[i] = 5;
            }
        }
    };
    std::vector<std::thread> pool;
    int nthreads = std::max(1, jobs);
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    int rc = 0;
    for (size_t i = 0; i < lines.size(); ++i) {
        std::cout << outputs[i] << "\n";
        if (codes[i] != 0) rc = codes[i];
    }
    return rc;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact dynamics of rational maps on the p-adic projective line and its tree"};
    app.require_subcommand(0, 1);

    std::string config_path;
    app.add_option("--config", config_path, "key=value configuration file");
    bool json_mode = false;
    app.add_flag("--json", json_mode, "emit one JSON object instead of text");

    JobSpec job;
    std::string p_text, precision_text, jet_text, step_text, iter_text;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("map", job.map_text, "map expression in z, e.g. \"(z^2+3/5)/(1-2*z)\"")
            ->required();
        sub->add_option("-p,--prime", p_text, "prime p");
        sub->add_option("--precision", precision_text, "working precision in digits");
        sub->add_option("--jet-order", jet_text, "jet truncation order");
        sub->add_option("--iterations", iter_text, "orbit iteration budget");
    };

    std::vector<std::pair<std::string, std::string>> subs = {
        {"reduce", "reduction of the map at a tree point"},
        {"fixed-points", "fixed points with multipliers"},
        {"periodic-points", "periodic points of period n"},
        {"exceptional", "the exceptional set"},
        {"ball-image", "image of a ball"},
        {"annulus-image", "image of an annulus"},
        {"modulus-growth", "modulus growth along a fixed end"},
        {"hp-fixed", "fixed points of the tree action"},
        {"march", "fixed-point march on the tree"},
        {"epsilon-norms", "norms of iterate displacements on an invariant disk"},
        {"classify", "classify a point: basin / quasi-periodic / unknown"},
        {"orbit", "exact forward orbit"},
        {"preimages", "preimage components of a disk"},
        {"batch", "read JSON jobs from stdin, one per line"},
    };
    std::map<std::string, CLI::App*> sub_apps;
    int batch_jobs = 1;
    for (const auto& [name, desc] : subs) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->fallthrough(true);  // parent options (--json, --config) after the subcommand
        if (name == "batch") {
            sub->add_option("--jobs", batch_jobs, "number of worker threads");
            continue;
        }
        add_common(sub);
        if (name == "reduce" || name == "march" || name == "modulus-growth")
            sub->add_option("--start,--point", job.point, "tree point II(a, t) or I(x)");
        if (name == "modulus-growth")
            sub->add_option("--direction", job.direction, "residue of the end (digit or inf)");
        if (name == "ball-image" || name == "epsilon-norms" || name == "preimages")
            sub->add_option("--ball", job.ball, "ball as a;t or a;t;open|closed");
        if (name == "annulus-image" || name == "modulus-growth")
            sub->add_option("--annulus", job.annulus, "annulus as center;t_in;t_out");
        if (name == "classify" || name == "orbit")
            sub->add_option("--point,--value", job.value, "rational point or inf");
        if (name == "periodic-points" || name == "orbit")
            sub->add_option("-n", job.n, "period / iterate count");
        if (name == "epsilon-norms") sub->add_option("--m-max", job.m_max, "levels to certify");
        if (name == "march") sub->add_option("--step", step_text, "initial step size");
        sub_apps[name] = sub;
    }

    CLI11_PARSE(app, argc, argv);

    auto config = read_config(config_path);
    if (app.get_subcommands().empty()) {
        std::cout << app.help() << "\n";
        return 0;
    }
    CLI::App* active = app.get_subcommands().front();
    job.command = active->get_name();

    if (job.command == "batch") return run_batch(std::cin, batch_jobs);

    try {
        std::string pstr = layered(p_text, "BERKDYN_PRIME", config, "prime", "");
        if (pstr.empty()) {
            std::cerr << "error: a prime is required (-p, BERKDYN_PRIME, or config prime=)\n";
            return 2;
        }
        job.p = std::stol(pstr);
        std::string prec = layered(precision_text, "BERKDYN_PRECISION", config, "precision", "64");
        job.budgets.precision = std::stoi(prec);
        std::string jet = layered(jet_text, "BERKDYN_JET_ORDER", config, "jet_order", "64");
        job.budgets.jet_order = std::stoi(jet);
        std::string iters = layered(iter_text, "BERKDYN_ITERATIONS", config, "iterations", "10000");
        job.budgets.orbit_iterations = std::stol(iters);
        std::string step = layered(step_text, "BERKDYN_STEP", config, "step", "1");
        auto sr = rat_from_string(step);
        if (!sr) {
            std::cerr << "error: bad step value\n";
            return 2;
        }
        job.step0 = *sr;
    } catch (const std::exception& e) {
        std::cerr << "error: bad numeric option: " << e.what() << "\n";
        return 2;
    }
    return run_one(job, json_mode);
}
